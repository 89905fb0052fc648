#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "swe/audio.hpp"
#include "swe/features.hpp"
#include "swe/formants.hpp"
#include "swe/framing.hpp"
#include "swe/mlp.hpp"
#include "swe/pitch.hpp"
#include "swe/syllables.hpp"
#include "swe/vad.hpp"

namespace swe {

// Everything the per-window estimator needs besides the model weights.
struct EngineConfig {
    AnalysisConfig analysis;
    VadParams vad;
    PitchParams pitch;
    SyllableParams syllables;
    FormantParams formants;
    FillerParams fillers;
    bool use_respiration = false;
    bool use_fillers = false;

    FeatureSet feature_set() const {
        if (use_respiration && use_fillers) return FeatureSet::Both;
        if (use_respiration) return FeatureSet::Resp;
        if (use_fillers) return FeatureSet::Fillers;
        return FeatureSet::Base;
    }
};

// Externally supplied aligned series (e.g. respiration rate over time).
struct TimeSeries {
    std::vector<double> time_s;
    std::vector<double> value;

    // Mean over [t0, t1]; falls back to the nearest point when the span is empty.
    double mean_over(double t0, double t1) const {
        if (time_s.empty()) throw std::runtime_error("TimeSeries: empty series");
        double acc = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < time_s.size(); ++i) {
            if (time_s[i] >= t0 && time_s[i] <= t1) {
                acc += value[i];
                ++count;
            }
        }
        if (count > 0) return acc / count;
        std::size_t best = 0;
        double best_d = std::abs(time_s[0] - t0);
        for (std::size_t i = 1; i < time_s.size(); ++i) {
            const double d = std::min(std::abs(time_s[i] - t0), std::abs(time_s[i] - t1));
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return value[best];
    }
};

struct WindowEstimate {
    double start_time_s = 0.0;
    double estimate = 0.0;
    std::optional<std::vector<double>> features;  // absent on short circuit
    double vad_mean = 0.0;
    double latency_ms = 0.0;  // filled in by stream_estimates
};

// All per-window features, computed unconditionally (used by `extract`).
struct WindowFeatures {
    std::vector<double> vec;  // feature-set order
    VadResult vad;
    SyllableResult syllables;
    int filler_count = 0;
};

inline WindowFeatures compute_features(const AudioWindow& win, const EngineConfig& cfg,
                                       const TimeSeries* respiration = nullptr) {
    WindowFeatures out;
    const auto rms = frame_rms(win, cfg.analysis);
    const auto energy = frame_energy(win, cfg.analysis);
    const auto zcr = frame_zcr(win, cfg.analysis);
    const auto pitch = pitch_track(win, rms, cfg.analysis, cfg.pitch);
    out.vad = detect_voice_activity(energy, zcr, pitch, cfg.vad);

    const auto gated = gate_by_vad(pitch, out.vad.flags, cfg.analysis);
    const auto [imean, istd] = summarize(rms);
    const auto [pmean, pstd] = summarize(gated);  // zeros included
    out.syllables = count_syllables(rms, zcr, pitch, cfg.analysis, cfg.syllables);

    out.vec = {imean, istd, pmean, pstd, out.vad.mean, out.vad.std_dev, out.syllables.rate};
    if (cfg.use_respiration) {
        if (!respiration)
            throw std::runtime_error("respiration feature enabled but no series supplied");
        out.vec.push_back(respiration->mean_over(
            win.start_time_s, win.start_time_s + cfg.analysis.window_ms / 1000.0));
    }
    if (cfg.use_fillers) {
        const auto formants = formant_track(win, pitch, cfg.analysis, cfg.formants);
        out.filler_count =
            detect_fillers(formants, out.vad, cfg.analysis, cfg.fillers).count;
        out.vec.push_back(static_cast<double>(out.filler_count));
    }
    return out;
}

// One pass of the estimation loop: voice activity is evaluated first, and a
// window with zero voice activity returns estimate 0 without assembling the
// feature vector.
inline WindowEstimate estimate_window(const AudioWindow& win, const Mlp& model,
                                      const EngineConfig& cfg,
                                      const TimeSeries* respiration = nullptr) {
    check_feature_set(model, cfg.feature_set());
    WindowEstimate out;
    out.start_time_s = win.start_time_s;

    const auto rms = frame_rms(win, cfg.analysis);
    const auto energy = frame_energy(win, cfg.analysis);
    const auto zcr = frame_zcr(win, cfg.analysis);
    const auto pitch = pitch_track(win, rms, cfg.analysis, cfg.pitch);
    const auto vad = detect_voice_activity(energy, zcr, pitch, cfg.vad);
    out.vad_mean = vad.mean;
    if (vad.mean == 0.0) return out;  // estimate stays exactly 0

    const auto gated = gate_by_vad(pitch, vad.flags, cfg.analysis);
    const auto [imean, istd] = summarize(rms);
    const auto [pmean, pstd] = summarize(gated);
    const auto syl = count_syllables(rms, zcr, pitch, cfg.analysis, cfg.syllables);

    std::vector<double> x = {imean, istd, pmean, pstd, vad.mean, vad.std_dev, syl.rate};
    if (cfg.use_respiration) {
        if (!respiration)
            throw std::runtime_error("respiration feature enabled but no series supplied");
        x.push_back(respiration->mean_over(
            win.start_time_s, win.start_time_s + cfg.analysis.window_ms / 1000.0));
    }
    if (cfg.use_fillers) {
        const auto formants = formant_track(win, pitch, cfg.analysis, cfg.formants);
        x.push_back(static_cast<double>(
            detect_fillers(formants, vad, cfg.analysis, cfg.fillers).count));
    }
    out.estimate = forward(model, x);
    out.features = std::move(x);
    return out;
}

// Consume a chunk source and emit one estimate per completed window, in
// start-time order. Latency is measured from window completion to emission.
inline std::vector<WindowEstimate> stream_estimates(ChunkSource& source, const Mlp& model,
                                                    const EngineConfig& cfg,
                                                    const TimeSeries* respiration = nullptr) {
    Windower windower(cfg.analysis, source.sample_rate());
    std::vector<WindowEstimate> out;
    std::vector<double> chunk(4096);
    for (;;) {
        const std::size_t n = source.read(chunk);
        if (n == 0) break;
        windower.push(std::span<const double>(chunk.data(), n));
        while (auto win = windower.poll()) {
            const auto t0 = std::chrono::steady_clock::now();
            WindowEstimate est = estimate_window(*win, model, cfg, respiration);
            const auto t1 = std::chrono::steady_clock::now();
            est.latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            out.push_back(std::move(est));
        }
    }
    return out;
}

// Whole-file processing through the same windower as streaming mode, so the
// two modes agree bit-for-bit.
inline std::vector<WindowEstimate> file_estimates(const AudioBuffer& audio, const Mlp& model,
                                                  const EngineConfig& cfg,
                                                  const TimeSeries* respiration = nullptr) {
    const AudioBuffer mono = to_mono(audio);
    std::vector<WindowEstimate> out;
    for (const auto& win : windows(mono, cfg.analysis))
        out.push_back(estimate_window(win, model, cfg, respiration));
    return out;
}

}  // namespace swe
