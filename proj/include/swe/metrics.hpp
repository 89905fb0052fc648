#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace swe {

inline double rmse(const std::vector<double>& est, const std::vector<double>& lab) {
    if (est.size() != lab.size() || est.empty())
        throw std::runtime_error("rmse: sequences must have equal non-zero length");
    double acc = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double d = est[i] - lab[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(est.size()));
}

namespace detail {

// Regularized incomplete beta function I_x(a, b) via Lentz's continued
// fraction; used for the t-distribution tail.
inline double betacf(double a, double b, double x) {
    const double eps = 3e-14, fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

inline double betai(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace detail

// Sample Pearson correlation with a two-tailed p-value from the
// t-approximation (n-2 degrees of freedom).
inline std::pair<double, double> pearson(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::runtime_error("pearson: need equal sequences of length >= 3");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::runtime_error("pearson: correlation undefined for a constant sequence");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::min(1.0, std::max(-1.0, r));
    const double df = n - 2.0;
    double p = 1.0;
    if (std::abs(r) < 1.0) {
        const double t2 = r * r * df / (1.0 - r * r);
        p = detail::betai(df / 2.0, 0.5, df / (df + t2));
    } else {
        p = 0.0;
    }
    return {r, p};
}

// RMSE as a percentage of the mean label value.
inline double percent_error(double rmse_value, const std::vector<double>& labels) {
    if (labels.empty()) throw std::runtime_error("percent_error: empty labels");
    double mean = 0.0;
    for (double v : labels) mean += v;
    mean /= static_cast<double>(labels.size());
    if (mean <= 0.0)
        throw std::runtime_error("percent_error: undefined for non-positive label mean");
    return 100.0 * rmse_value / mean;
}

// Indices where the label model and the voice activity output agree: label
// zero with no detected voice, or label non-zero with detected voice.
inline std::vector<std::size_t> filter_agreement(const std::vector<double>& labels,
                                                 const std::vector<bool>& vad_flags) {
    if (labels.size() != vad_flags.size())
        throw std::runtime_error("filter_agreement: length mismatch");
    std::vector<std::size_t> retained;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if ((labels[i] == 0.0 && !vad_flags[i]) || (labels[i] != 0.0 && vad_flags[i]))
            retained.push_back(i);
    return retained;
}

// One leave-one-participant-out split per participant.
struct LosoSplit {
    std::vector<std::string> train_ids;
    std::string test_id;
};

inline std::vector<LosoSplit> loso_splits(const std::vector<std::string>& participant_ids) {
    std::set<std::string> unique(participant_ids.begin(), participant_ids.end());
    if (unique.size() != participant_ids.size())
        throw std::runtime_error("loso_splits: duplicate participant id");
    if (participant_ids.size() < 2)
        throw std::runtime_error("loso_splits: need at least 2 participants");
    std::vector<LosoSplit> out;
    for (const auto& test : participant_ids) {
        LosoSplit s;
        s.test_id = test;
        for (const auto& id : participant_ids)
            if (id != test) s.train_ids.push_back(id);
        out.push_back(std::move(s));
    }
    return out;
}

// Two-fold cross-paradigm split: train on one paradigm, test on the other.
struct ParadigmFold {
    std::string train_paradigm, test_paradigm;
};

inline std::vector<ParadigmFold> cross_paradigm_splits(const std::string& paradigm_a,
                                                       const std::string& paradigm_b) {
    if (paradigm_a == paradigm_b)
        throw std::runtime_error("cross_paradigm_splits: paradigms must differ");
    return {{paradigm_a, paradigm_b}, {paradigm_b, paradigm_a}};
}

// One line of the evaluation report.
struct ReportRow {
    std::string dataset;    // "unfiltered" | "filtered"
    std::string condition;  // condition tag or "All"
    double rmse_value = 0.0;
    double pct_error = 0.0;
    std::optional<double> pearson_r;  // unfiltered rows only
    std::optional<double> p_value;
    std::size_t n = 0;
};

// Pooled evaluation instance: estimate vs label plus metadata.
struct EvalInstance {
    double estimate = 0.0;
    double label = 0.0;
    bool vad = false;
    std::string condition;
};

// Metrics per condition and overall, for the unfiltered and filtered
// datasets. Correlation is reported for the unfiltered dataset only.
inline std::vector<ReportRow> build_report(const std::vector<EvalInstance>& instances) {
    if (instances.empty()) throw std::runtime_error("build_report: no instances");
    std::map<std::string, std::vector<const EvalInstance*>> by_cond;
    for (const auto& inst : instances) {
        by_cond[inst.condition].push_back(&inst);
        by_cond["All"].push_back(&inst);
    }

    std::vector<ReportRow> rows;
    for (const std::string dataset : {"unfiltered", "filtered"}) {
        const bool filtered = dataset == std::string("filtered");
        for (const auto& [cond, insts] : by_cond) {
            std::vector<double> est, lab;
            std::vector<bool> vad;
            for (const auto* p : insts) {
                est.push_back(p->estimate);
                lab.push_back(p->label);
                vad.push_back(p->vad);
            }
            if (filtered) {
                const auto keep = filter_agreement(lab, vad);
                std::vector<double> fe, fl;
                for (std::size_t i : keep) {
                    fe.push_back(est[i]);
                    fl.push_back(lab[i]);
                }
                est = std::move(fe);
                lab = std::move(fl);
            }
            if (est.empty()) continue;
            ReportRow row;
            row.dataset = dataset;
            row.condition = cond;
            row.n = est.size();
            row.rmse_value = rmse(est, lab);
            double mean = 0.0;
            for (double v : lab) mean += v;
            mean /= static_cast<double>(lab.size());
            row.pct_error = mean > 0.0 ? 100.0 * row.rmse_value / mean :
                                         std::numeric_limits<double>::quiet_NaN();
            if (!filtered && est.size() >= 3) {
                try {
                    const auto [r, p] = pearson(est, lab);
                    row.pearson_r = r;
                    row.p_value = p;
                } catch (const std::runtime_error&) {
                    // constant sequence: correlation left unreported
                }
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline std::string report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "dataset,condition,n,rmse,percent_error,pearson_r,p_value\n";
    for (const auto& r : rows) {
        os << r.dataset << ',' << r.condition << ',' << r.n << ',' << r.rmse_value << ','
           << r.pct_error << ',';
        if (r.pearson_r) os << *r.pearson_r;
        os << ',';
        if (r.p_value) os << *r.p_value;
        os << '\n';
    }
    return os.str();
}

inline std::string report_text(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "Dataset     Condition   N        Corr.      RMSE       Pct. Error\n";
    for (const auto& r : rows) {
        char line[160];
        std::string corr = "-";
        if (r.pearson_r) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3f%s", *r.pearson_r,
                          (r.p_value && *r.p_value < 0.0001) ? "**"
                          : (r.p_value && *r.p_value < 0.05) ? "*" : "");
            corr = buf;
        }
        std::snprintf(line, sizeof(line), "%-11s %-11s %-8zu %-10s %-10.3f %.3f%%\n",
                      r.dataset.c_str(), r.condition.c_str(), r.n, corr.c_str(),
                      r.rmse_value, r.pct_error);
        os << line;
    }
    return os.str();
}

}  // namespace swe
