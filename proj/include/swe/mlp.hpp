#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace swe {

// Which features feed the network (Base = the 7 audio features; respiration
// rate and/or filler count may be appended, in that order).
enum class FeatureSet : std::uint32_t { Base = 0, Resp = 1, Fillers = 2, Both = 3 };

inline int feature_dim(FeatureSet fs) {
    switch (fs) {
        case FeatureSet::Base: return 7;
        case FeatureSet::Resp: return 8;
        case FeatureSet::Fillers: return 8;
        case FeatureSet::Both: return 9;
    }
    throw std::runtime_error("feature_dim: invalid feature set");
}

inline std::string feature_set_name(FeatureSet fs) {
    switch (fs) {
        case FeatureSet::Base: return "base";
        case FeatureSet::Resp: return "+resp";
        case FeatureSet::Fillers: return "+fillers";
        case FeatureSet::Both: return "+both";
    }
    return "?";
}

inline FeatureSet parse_feature_set(const std::string& s) {
    if (s == "base") return FeatureSet::Base;
    if (s == "+resp" || s == "resp") return FeatureSet::Resp;
    if (s == "+fillers" || s == "fillers") return FeatureSet::Fillers;
    if (s == "+both" || s == "both") return FeatureSet::Both;
    throw std::runtime_error("unknown feature set: " + s);
}

// Fully-connected ReLU regressor with z-score input normalization baked into
// the parameters, so inference is self-contained.
struct Mlp {
    std::vector<int> sizes;                   // e.g. {7, 256, 256, 256, 1}
    std::vector<std::vector<double>> weights; // per layer, row-major [out][in]
    std::vector<std::vector<double>> biases;
    std::vector<double> feat_mean, feat_std;  // length == sizes.front()
    FeatureSet feature_set = FeatureSet::Base;
    std::uint64_t train_config_hash = 0;

    int input_dim() const { return sizes.front(); }

    bool operator==(const Mlp& o) const {
        return sizes == o.sizes && weights == o.weights && biases == o.biases &&
               feat_mean == o.feat_mean && feat_std == o.feat_std &&
               feature_set == o.feature_set && train_config_hash == o.train_config_hash;
    }
};

struct TrainConfig {
    double learning_rate = 0.001;
    int batch_size = 64;
    int epochs = 50;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;
    std::vector<int> hidden = {256, 256, 256};

    void validate() const {
        if (learning_rate <= 0 || batch_size <= 0 || epochs <= 0)
            throw std::runtime_error("TrainConfig: non-positive value");
    }
};

namespace detail {

inline void affine(const std::vector<double>& w, const std::vector<double>& b,
                   const std::vector<double>& in, std::vector<double>& out) {
    const std::size_t rows = b.size(), cols = in.size();
    out.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* wr = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * in[c];
        out[r] = acc;
    }
}

}  // namespace detail

// Normalized forward pass; linear, unclamped output.
inline double forward(const Mlp& m, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != m.input_dim())
        throw std::runtime_error("forward: feature dimension mismatch (got " +
                                 std::to_string(x.size()) + ", model expects " +
                                 std::to_string(m.input_dim()) + ")");
    std::vector<double> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        a[i] = (x[i] - m.feat_mean[i]) / m.feat_std[i];
    std::vector<double> z;
    const std::size_t layers = m.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
        detail::affine(m.weights[l], m.biases[l], a, z);
        if (l + 1 < layers)
            for (double& v : z) v = std::max(0.0, v);
        a = z;
    }
    return a[0];
}

// Mean-squared-error loss over a batch (normalization applied inside).
inline double mse_loss(const Mlp& m, const std::vector<std::vector<double>>& xs,
                       const std::vector<double>& ys) {
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = forward(m, xs[i]) - ys[i];
        acc += d * d;
    }
    return acc / static_cast<double>(xs.size());
}

// Backpropagated gradient of mse_loss with respect to every weight and bias.
// Gradient layout mirrors m.weights / m.biases.
inline void mse_grad(const Mlp& m, const std::vector<std::vector<double>>& xs,
                     const std::vector<double>& ys,
                     std::vector<std::vector<double>>& gw,
                     std::vector<std::vector<double>>& gb) {
    const std::size_t layers = m.weights.size();
    gw.resize(layers);
    gb.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        gw[l].assign(m.weights[l].size(), 0.0);
        gb[l].assign(m.biases[l].size(), 0.0);
    }

    std::vector<std::vector<double>> acts(layers + 1);
    for (std::size_t s = 0; s < xs.size(); ++s) {
        acts[0].resize(xs[s].size());
        for (std::size_t i = 0; i < xs[s].size(); ++i)
            acts[0][i] = (xs[s][i] - m.feat_mean[i]) / m.feat_std[i];
        for (std::size_t l = 0; l < layers; ++l) {
            detail::affine(m.weights[l], m.biases[l], acts[l], acts[l + 1]);
            if (l + 1 < layers)
                for (double& v : acts[l + 1]) v = std::max(0.0, v);
        }
        // dL/dy for one sample of the batch mean
        std::vector<double> delta{2.0 * (acts[layers][0] - ys[s]) /
                                  static_cast<double>(xs.size())};
        for (std::size_t l = layers; l-- > 0;) {
            const std::size_t rows = m.biases[l].size(), cols = acts[l].size();
            std::vector<double> prev(cols, 0.0);
            for (std::size_t r = 0; r < rows; ++r) {
                const double d = delta[r];
                if (d == 0.0) continue;
                gb[l][r] += d;
                const double* wr = m.weights[l].data() + r * cols;
                double* gwr = gw[l].data() + r * cols;
                for (std::size_t c = 0; c < cols; ++c) {
                    gwr[c] += d * acts[l][c];
                    prev[c] += d * wr[c];
                }
            }
            if (l > 0)
                for (std::size_t c = 0; c < cols; ++c)
                    if (acts[l][c] <= 0.0) prev[c] = 0.0;  // ReLU mask
            delta = std::move(prev);
        }
    }
}

// Scaled uniform fan-in initialization with the run seed.
inline Mlp init_mlp(const std::vector<int>& sizes, std::uint64_t seed, FeatureSet fs) {
    Mlp m;
    m.sizes = sizes;
    m.feature_set = fs;
    m.feat_mean.assign(sizes.front(), 0.0);
    m.feat_std.assign(sizes.front(), 1.0);
    std::mt19937_64 gen(seed);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int in = sizes[l], out = sizes[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        std::vector<double> w(static_cast<std::size_t>(in) * out);
        for (double& v : w) v = dist(gen);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(out, 0.0);
    }
    return m;
}

// Mini-batch ADAM training on MSE. Normalization statistics are fitted on
// the training set; rows with non-finite values are dropped and counted in
// rejected_rows. Deterministic for a fixed seed.
inline Mlp train(const std::vector<std::vector<double>>& features,
                 const std::vector<double>& labels, const TrainConfig& cfg,
                 FeatureSet fs = FeatureSet::Base, int* rejected_rows = nullptr) {
    cfg.validate();
    if (features.size() != labels.size())
        throw std::runtime_error("train: feature/label count mismatch");

    const int dim = feature_dim(fs);
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    int rejected = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        bool ok = static_cast<int>(features[i].size()) == dim && std::isfinite(labels[i]);
        for (double v : features[i]) ok = ok && std::isfinite(v);
        if (ok) {
            xs.push_back(features[i]);
            ys.push_back(labels[i]);
        } else {
            ++rejected;
        }
    }
    if (rejected_rows) *rejected_rows = rejected;
    if (xs.empty()) throw std::runtime_error("train: no usable training rows");

    std::vector<int> sizes;
    sizes.push_back(dim);
    for (int h : cfg.hidden) sizes.push_back(h);
    sizes.push_back(1);
    Mlp m = init_mlp(sizes, cfg.seed, fs);

    // z-score statistics from the training set only
    for (int c = 0; c < dim; ++c) {
        double mean = 0.0;
        for (const auto& x : xs) mean += x[c];
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (const auto& x : xs) var += (x[c] - mean) * (x[c] - mean);
        var /= static_cast<double>(xs.size());
        m.feat_mean[c] = mean;
        m.feat_std[c] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    // ADAM state
    std::vector<std::vector<double>> mw, vw, mb, vb;
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        mw.emplace_back(m.weights[l].size(), 0.0);
        vw.emplace_back(m.weights[l].size(), 0.0);
        mb.emplace_back(m.biases[l].size(), 0.0);
        vb.emplace_back(m.biases[l].size(), 0.0);
    }

    std::mt19937_64 gen(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::vector<double>> gw, gb;
    std::vector<std::vector<double>> bx;
    std::vector<double> by;
    std::int64_t step = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), gen);
        for (std::size_t off = 0; off < order.size(); off += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), off + cfg.batch_size);
            bx.clear();
            by.clear();
            for (std::size_t k = off; k < end; ++k) {
                bx.push_back(xs[order[k]]);
                by.push_back(ys[order[k]]);
            }
            mse_grad(m, bx, by, gw, gb);
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < m.weights.size(); ++l) {
                auto update = [&](std::vector<double>& p, const std::vector<double>& g,
                                  std::vector<double>& m1, std::vector<double>& m2) {
                    for (std::size_t i = 0; i < p.size(); ++i) {
                        m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * g[i];
                        m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                        p[i] -= cfg.learning_rate * (m1[i] / bc1) /
                                (std::sqrt(m2[i] / bc2) + cfg.epsilon);
                    }
                };
                update(m.weights[l], gw[l], mw[l], vw[l]);
                update(m.biases[l], gb[l], mb[l], vb[l]);
            }
        }
    }
    return m;
}

// ---- weight persistence: versioned, little-endian binary format ----

namespace detail {

constexpr char kMagic[4] = {'S', 'W', 'E', 'M'};
constexpr std::uint32_t kVersion = 1;

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(out, bits);
}

struct Reader {
    const unsigned char* p;
    std::size_t left;
    void need(std::size_t n) const {
        if (left < n) throw std::runtime_error("model format error: truncated data");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        p += 4;
        left -= 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        p += 8;
        left -= 8;
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double d;
        std::memcpy(&d, &bits, 8);
        return d;
    }
};

}  // namespace detail

inline std::string save_model(const Mlp& m) {
    std::string out;
    out.append(detail::kMagic, 4);
    detail::put_u32(out, detail::kVersion);
    detail::put_u32(out, static_cast<std::uint32_t>(m.feature_set));
    detail::put_u64(out, m.train_config_hash);
    detail::put_u32(out, static_cast<std::uint32_t>(m.sizes.size()));
    for (int s : m.sizes) detail::put_u32(out, static_cast<std::uint32_t>(s));
    for (double v : m.feat_mean) detail::put_f64(out, v);
    for (double v : m.feat_std) detail::put_f64(out, v);
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        for (double v : m.weights[l]) detail::put_f64(out, v);
        for (double v : m.biases[l]) detail::put_f64(out, v);
    }
    return out;
}

inline Mlp load_model(const std::string& bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), detail::kMagic, 4) != 0)
        throw std::runtime_error("model format error: bad magic bytes");
    detail::Reader r{reinterpret_cast<const unsigned char*>(bytes.data()) + 4,
                     bytes.size() - 4};
    const std::uint32_t version = r.u32();
    if (version != detail::kVersion)
        throw std::runtime_error("model format error: unsupported version " +
                                 std::to_string(version));
    Mlp m;
    const std::uint32_t fs = r.u32();
    if (fs > 3) throw std::runtime_error("model format error: invalid feature set id");
    m.feature_set = static_cast<FeatureSet>(fs);
    m.train_config_hash = r.u64();
    const std::uint32_t n_layers = r.u32();
    if (n_layers < 2 || n_layers > 64)
        throw std::runtime_error("model format error: implausible layer count");
    for (std::uint32_t i = 0; i < n_layers; ++i)
        m.sizes.push_back(static_cast<int>(r.u32()));
    if (m.sizes.front() != feature_dim(m.feature_set))
        throw std::runtime_error("model format error: input size does not match feature set");
    m.feat_mean.resize(m.sizes.front());
    m.feat_std.resize(m.sizes.front());
    for (double& v : m.feat_mean) v = r.f64();
    for (double& v : m.feat_std) v = r.f64();
    for (std::size_t l = 0; l + 1 < m.sizes.size(); ++l) {
        std::vector<double> w(static_cast<std::size_t>(m.sizes[l]) * m.sizes[l + 1]);
        std::vector<double> b(m.sizes[l + 1]);
        for (double& v : w) v = r.f64();
        for (double& v : b) v = r.f64();
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    if (r.left != 0) throw std::runtime_error("model format error: trailing bytes");
    return m;
}

inline void save_model_file(const std::string& path, const Mlp& m) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open model file for writing: " + path);
    const std::string bytes = save_model(m);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline Mlp load_model_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open model file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return load_model(bytes);
}

// Guard used by pipelines before inference.
inline void check_feature_set(const Mlp& m, FeatureSet expected) {
    if (m.feature_set != expected)
        throw std::runtime_error("feature-set mismatch: model was trained with '" +
                                 feature_set_name(m.feature_set) + "', pipeline uses '" +
                                 feature_set_name(expected) + "'");
}

}  // namespace swe
