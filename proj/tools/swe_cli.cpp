// Command-line front end: feature extraction, training, estimation,
// streaming, evaluation, benchmarking, and synthetic audio generation.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swe/audio.hpp"
#include "swe/bench.hpp"
#include "swe/config.hpp"
#include "swe/dataset.hpp"
#include "swe/metrics.hpp"
#include "swe/mlp.hpp"
#include "swe/pipeline.hpp"
#include "swe/synth.hpp"

namespace {

swe::TimeSeries load_respiration_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open respiration file: " + path);
    std::string line;
    std::getline(f, line);  // header: time_s,breaths_per_min
    swe::TimeSeries ts;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cols = swe::detail::split_csv_line(line);
        if (cols.size() < 2) throw std::runtime_error("respiration file: expected 2 columns");
        ts.time_s.push_back(std::stod(cols[0]));
        ts.value.push_back(std::stod(cols[1]));
    }
    return ts;
}

// Label for a window is the label at the window's start second.
double label_at(const std::vector<swe::LabelRow>& labels, double start_s,
                std::string* condition = nullptr) {
    double best_label = 0.0, best_d = 1e18;
    for (const auto& r : labels) {
        const double d = std::abs(r.time_s - start_s);
        if (d < best_d) {
            best_d = d;
            best_label = r.label;
            if (condition) *condition = r.condition;
        }
    }
    return best_label;
}

int run_extract(const std::string& audio_path, const std::string& labels_path,
                const std::string& out_path, swe::EngineConfig& cfg,
                const std::string& resp_path, const std::string& participant,
                const std::string& paradigm) {
    const auto audio = swe::to_mono(swe::load_wav(audio_path));
    std::optional<swe::TimeSeries> resp;
    if (!resp_path.empty()) resp = load_respiration_csv(resp_path);
    if (cfg.use_respiration && !resp)
        throw std::runtime_error("respiration feature enabled but no --respiration file given");

    std::vector<swe::LabelRow> labels;
    if (!labels_path.empty()) labels = swe::load_labels_csv(labels_path);

    std::vector<swe::DataRow> rows;
    for (const auto& win : swe::windows(audio, cfg.analysis)) {
        const auto feats = swe::compute_features(win, cfg, resp ? &*resp : nullptr);
        swe::DataRow r;
        r.participant = participant;
        r.paradigm = paradigm;
        r.time_s = win.start_time_s;
        r.features = feats.vec;
        if (!labels.empty()) r.label = label_at(labels, win.start_time_s, &r.condition);
        rows.push_back(std::move(r));
    }
    swe::save_dataset_csv(out_path, rows, cfg.feature_set(), swe::config_echo(cfg));
    std::cout << "wrote " << rows.size() << " windows to " << out_path << "\n";
    return 0;
}

int run_train(const std::string& data_path, const std::string& out_path,
              swe::TrainConfig& tcfg, swe::FeatureSet fs) {
    const auto rows = swe::load_dataset_csv(data_path, fs);
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (const auto& r : rows) {
        xs.push_back(r.features);
        ys.push_back(r.label);
    }
    int rejected = 0;
    swe::Mlp m = swe::train(xs, ys, tcfg, fs, &rejected);
    if (rejected > 0)
        std::cerr << "warning: rejected " << rejected << " rows with non-finite values\n";
    swe::save_model_file(out_path, m);
    std::cout << "trained on " << (xs.size() - rejected) << " rows ("
              << swe::feature_set_name(fs) << "), model written to " << out_path << "\n";
    return 0;
}

int run_estimate(const std::string& audio_path, const std::string& model_path,
                 swe::EngineConfig& cfg, bool clamp, const std::string& resp_path) {
    const swe::Mlp model = swe::load_model_file(model_path);
    cfg.use_respiration = model.feature_set == swe::FeatureSet::Resp ||
                          model.feature_set == swe::FeatureSet::Both;
    cfg.use_fillers = model.feature_set == swe::FeatureSet::Fillers ||
                      model.feature_set == swe::FeatureSet::Both;
    std::optional<swe::TimeSeries> resp;
    if (!resp_path.empty()) resp = load_respiration_csv(resp_path);

    const auto audio = swe::load_wav(audio_path);
    const auto estimates = swe::file_estimates(audio, model, cfg, resp ? &*resp : nullptr);

    std::cout << swe::config_echo(cfg) << "\n";
    std::cout << "start_s,estimate,window_vad_mean";
    for (const auto& n : swe::feature_names(cfg.feature_set())) std::cout << ',' << n;
    std::cout << "\n";
    for (const auto& e : estimates) {
        double value = e.estimate;
        if (clamp) value = std::min(4.0, std::max(0.0, value));
        std::cout << e.start_time_s << ',' << value << ',' << e.vad_mean;
        if (e.features)
            for (double v : *e.features) std::cout << ',' << v;
        std::cout << "\n";
    }
    return 0;
}

int run_stream(const std::string& audio_path, const std::string& model_path,
               swe::EngineConfig& cfg, double chunk_ms) {
    const swe::Mlp model = swe::load_model_file(model_path);
    swe::check_feature_set(model, cfg.feature_set());
    swe::BufferChunkSource source(swe::to_mono(swe::load_wav(audio_path)), chunk_ms);
    const auto estimates = swe::stream_estimates(source, model, cfg);
    for (const auto& e : estimates) {
        nlohmann::json rec = {{"start_s", e.start_time_s},
                              {"estimate", e.estimate},
                              {"vad_mean", e.vad_mean},
                              {"latency_ms", e.latency_ms}};
        if (e.features) rec["features"] = *e.features;
        std::cout << rec.dump() << "\n";
    }
    return 0;
}

swe::Mlp train_on_rows(const std::vector<swe::DataRow>& rows, const swe::TrainConfig& tcfg,
                       swe::FeatureSet fs) {
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (const auto& r : rows) {
        xs.push_back(r.features);
        ys.push_back(r.label);
    }
    return swe::train(xs, ys, tcfg, fs);
}

std::vector<swe::EvalInstance> predict_rows(const swe::Mlp& m,
                                            const std::vector<swe::DataRow>& rows) {
    std::vector<swe::EvalInstance> out;
    for (const auto& r : rows) {
        swe::EvalInstance inst;
        inst.estimate = swe::forward(m, r.features);
        inst.label = r.label;
        inst.vad = r.features[4] > 0.0;  // vad_mean column
        inst.condition = r.condition.empty() ? "All" : r.condition;
        out.push_back(std::move(inst));
    }
    return out;
}

int run_eval(const std::string& mode, const std::string& data_a, const std::string& data_b,
             const std::string& model_config, const std::string& csv_out,
             swe::FeatureSet fs) {
    swe::TrainConfig tcfg;
    if (!model_config.empty()) {
        std::ifstream f(model_config);
        if (!f) throw std::runtime_error("cannot open model config: " + model_config);
        nlohmann::json j;
        f >> j;
        if (j.contains("epochs")) tcfg.epochs = j["epochs"].get<int>();
        if (j.contains("seed")) tcfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("learning_rate")) tcfg.learning_rate = j["learning_rate"].get<double>();
        if (j.contains("batch_size")) tcfg.batch_size = j["batch_size"].get<int>();
        if (j.contains("hidden")) tcfg.hidden = j["hidden"].get<std::vector<int>>();
    }

    const auto rows = swe::load_dataset_csv(data_a, fs);
    std::vector<swe::EvalInstance> pooled;

    if (mode == "emulated") {
        // train and test on the same dataset (within-individual setting)
        const swe::Mlp m = train_on_rows(rows, tcfg, fs);
        pooled = predict_rows(m, rows);
    } else if (mode == "loso") {
        std::set<std::string> ids;
        for (const auto& r : rows) ids.insert(r.participant);
        const auto splits =
            swe::loso_splits(std::vector<std::string>(ids.begin(), ids.end()));
        std::cout << "# loso: " << splits.size() << " folds\n";
        for (const auto& split : splits) {
            std::vector<swe::DataRow> train_rows, test_rows;
            for (const auto& r : rows)
                (r.participant == split.test_id ? test_rows : train_rows).push_back(r);
            const swe::Mlp m = train_on_rows(train_rows, tcfg, fs);
            auto preds = predict_rows(m, test_rows);
            pooled.insert(pooled.end(), preds.begin(), preds.end());
        }
    } else if (mode == "cross") {
        if (data_b.empty())
            throw std::runtime_error("eval --mode cross needs two dataset files");
        const auto rows_b = swe::load_dataset_csv(data_b, fs);
        if (rows.empty() || rows_b.empty())
            throw std::runtime_error("eval: empty dataset");
        swe::cross_paradigm_splits(rows.front().paradigm, rows_b.front().paradigm);
        auto run_fold = [&](const std::vector<swe::DataRow>& train_rows,
                            const std::vector<swe::DataRow>& test_rows) {
            const swe::Mlp m = train_on_rows(train_rows, tcfg, fs);
            auto preds = predict_rows(m, test_rows);
            pooled.insert(pooled.end(), preds.begin(), preds.end());
        };
        run_fold(rows, rows_b);
        run_fold(rows_b, rows);
    } else {
        throw std::runtime_error("unknown eval mode: " + mode);
    }

    const auto report = swe::build_report(pooled);
    std::cout << swe::report_text(report);
    if (!csv_out.empty()) {
        std::ofstream f(csv_out);
        f << swe::report_csv(report);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming speech-workload estimation"};
    app.require_subcommand(1);

    std::string config_path;
    if (const char* env = std::getenv("SWE_CONFIG")) config_path = env;
    app.add_option("--config", config_path, "JSON config overriding analysis/VAD/pitch settings");

    swe::EngineConfig cfg;
    double window_s = 0.0, step_s = 0.0;

    // extract
    auto* extract = app.add_subcommand("extract", "Extract per-window features to CSV");
    std::string ex_audio, ex_labels, ex_out = "features.csv", ex_resp;
    std::string ex_participant = "p0", ex_paradigm = "supervisory";
    extract->add_option("audio", ex_audio, "input WAV file")->required();
    extract->add_option("--labels", ex_labels, "label CSV to join by window start time");
    extract->add_option("-o,--out", ex_out, "output CSV");
    extract->add_option("--respiration", ex_resp, "respiration CSV (time_s,breaths_per_min)");
    extract->add_option("--participant", ex_participant, "participant id for the output rows");
    extract->add_option("--paradigm", ex_paradigm, "paradigm tag for the output rows");
    std::string ex_features = "base";
    extract->add_option("--features", ex_features, "base|+resp|+fillers|+both");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train the workload regressor");
    std::string tr_data, tr_out = "model.bin", tr_features = "base";
    swe::TrainConfig tcfg;
    train_cmd->add_option("data", tr_data, "features CSV")->required();
    train_cmd->add_option("-o,--out", tr_out, "output model file");
    train_cmd->add_option("--epochs", tcfg.epochs, "training epochs");
    train_cmd->add_option("--seed", tcfg.seed, "RNG seed");
    train_cmd->add_option("--lr", tcfg.learning_rate, "learning rate");
    train_cmd->add_option("--batch", tcfg.batch_size, "batch size");
    train_cmd->add_option("--features", tr_features, "base|+resp|+fillers|+both");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Per-window workload estimates for a file");
    std::string es_audio, es_model, es_resp;
    bool es_clamp = false;
    estimate->add_option("audio", es_audio, "input WAV file")->required();
    estimate->add_option("--model", es_model, "model file")->required();
    estimate->add_flag("--clamp", es_clamp, "clamp estimates to [0, 4]");
    estimate->add_option("--respiration", es_resp, "respiration CSV");

    // stream
    auto* stream = app.add_subcommand("stream", "Streaming estimates as NDJSON");
    std::string st_audio, st_model;
    double st_chunk_ms = 500.0;
    stream->add_option("audio", st_audio, "input WAV file consumed in chunks")->required();
    stream->add_option("--model", st_model, "model file")->required();
    stream->add_option("--chunk-ms", st_chunk_ms, "chunk duration in ms");

    // eval
    auto* eval = app.add_subcommand("eval", "Run an evaluation protocol");
    std::string ev_mode = "emulated", ev_a, ev_b, ev_cfg, ev_csv, ev_features = "base";
    eval->add_option("--mode", ev_mode, "emulated|loso|cross")->required();
    eval->add_option("data", ev_a, "features CSV")->required();
    eval->add_option("data_b", ev_b, "second features CSV (cross mode)");
    eval->add_option("--model-config", ev_cfg, "JSON training config");
    eval->add_option("--report-csv", ev_csv, "write the report as CSV");
    eval->add_option("--features", ev_features, "base|+resp|+fillers|+both");

    // bench
    auto* bench = app.add_subcommand("bench", "Feature-extraction run-time study");
    std::vector<double> bn_sizes = {1, 5, 10, 15, 30, 60};
    int bn_repeats = 10;
    std::string bn_audio, bn_csv;
    bench->add_option("--sizes", bn_sizes, "window sizes in seconds")->delimiter(',');
    bench->add_option("--repeats", bn_repeats, "repetitions per size");
    bench->add_option("--audio", bn_audio, "WAV input (default: synthetic speech)");
    bench->add_option("--csv", bn_csv, "write the timing table as CSV");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate deterministic synthetic audio");
    std::string sy_scenario, sy_out = "out.wav";
    int sy_rate = 16000;
    double sy_seconds = 5.0;
    std::uint64_t sy_seed = 1;
    synth_cmd->add_option("scenario", sy_scenario,
                          "silence|noise|sine:<hz>|tone:<f0>|bursts:<n>|vowel:<f0>:<f1>:<f2>|speech[:occ]")
        ->required();
    synth_cmd->add_option("-o,--out", sy_out, "output WAV");
    synth_cmd->add_option("--rate", sy_rate, "sample rate in Hz");
    synth_cmd->add_option("--seconds", sy_seconds, "duration in seconds");
    synth_cmd->add_option("--seed", sy_seed, "noise seed");

    app.add_option("--window-s", window_s, "analysis window in seconds");
    app.add_option("--step-s", step_s, "window step in seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) swe::load_config_file(cfg, config_path);
        if (window_s > 0) cfg.analysis.window_ms = window_s * 1000.0;
        if (step_s > 0) cfg.analysis.step_ms = step_s * 1000.0;

        if (*extract) {
            const auto fs = swe::parse_feature_set(ex_features);
            cfg.use_respiration = fs == swe::FeatureSet::Resp || fs == swe::FeatureSet::Both;
            cfg.use_fillers = fs == swe::FeatureSet::Fillers || fs == swe::FeatureSet::Both;
            return run_extract(ex_audio, ex_labels, ex_out, cfg, ex_resp, ex_participant,
                               ex_paradigm);
        }
        if (*train_cmd)
            return run_train(tr_data, tr_out, tcfg, swe::parse_feature_set(tr_features));
        if (*estimate) return run_estimate(es_audio, es_model, cfg, es_clamp, es_resp);
        if (*stream) return run_stream(st_audio, st_model, cfg, st_chunk_ms);
        if (*eval)
            return run_eval(ev_mode, ev_a, ev_b, ev_cfg, ev_csv,
                            swe::parse_feature_set(ev_features));
        if (*bench) {
            swe::AudioBuffer audio = bn_audio.empty()
                ? swe::synth::scenario("speech:0.6", 16000, 70.0)
                : swe::to_mono(swe::load_wav(bn_audio));
            const auto rep = swe::run_bench(audio, bn_sizes, bn_repeats);
            std::cout << swe::bench_text(rep);
            if (!bn_csv.empty()) {
                std::ofstream f(bn_csv);
                f << swe::bench_csv(rep);
            }
            return 0;
        }
        if (*synth_cmd) {
            const auto buf = swe::synth::scenario(sy_scenario, sy_rate, sy_seconds, sy_seed);
            swe::save_wav(sy_out, buf);
            std::cout << "wrote " << sy_out << " (" << buf.samples.size() << " samples @ "
                      << sy_rate << " Hz)\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
