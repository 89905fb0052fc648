#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swe/common.hpp"
#include "swe/framing.hpp"

namespace swe {

enum class TrackKind { energy, rms, zcr, pitch_hz, vad_flag };

// Per-frame series aligned on the 10 ms frame grid of one window.
struct FrameTrack {
    std::vector<double> values;
    TrackKind kind = TrackKind::rms;
    double frame_step_ms = 10.0;
    double frame_span_ms = 50.0;

    std::size_t size() const { return values.size(); }
};

inline void check_same_grid(const FrameTrack& a, const FrameTrack& b) {
    if (a.values.size() != b.values.size() || a.frame_step_ms != b.frame_step_ms ||
        a.frame_span_ms != b.frame_span_ms)
        throw std::runtime_error("frame grid mismatch between tracks");
}

// Root-mean-square intensity per frame.
inline FrameTrack frame_rms(const AudioWindow& win, const AnalysisConfig& cfg) {
    FrameTrack t{{}, TrackKind::rms, cfg.frame_step_ms, cfg.frame_span_ms};
    const auto bounds = frame_bounds(cfg, static_cast<std::int64_t>(win.samples.size()),
                                     win.sample_rate);
    t.values.reserve(bounds.size());
    for (const auto& [s, e] : bounds) {
        double acc = 0.0;
        for (std::int64_t i = s; i < e; ++i) acc += win.samples[i] * win.samples[i];
        t.values.push_back(std::sqrt(acc / static_cast<double>(e - s)));
    }
    return t;
}

// Short-term energy per frame: unnormalized sum of squared samples.
inline FrameTrack frame_energy(const AudioWindow& win, const AnalysisConfig& cfg) {
    FrameTrack t{{}, TrackKind::energy, cfg.frame_step_ms, cfg.frame_span_ms};
    const auto bounds = frame_bounds(cfg, static_cast<std::int64_t>(win.samples.size()),
                                     win.sample_rate);
    t.values.reserve(bounds.size());
    for (const auto& [s, e] : bounds) {
        double acc = 0.0;
        for (std::int64_t i = s; i < e; ++i) acc += win.samples[i] * win.samples[i];
        t.values.push_back(acc);
    }
    return t;
}

// Zero-crossing rate per frame, in crossings per sample. A crossing is a
// strict sign change between consecutive samples; exact zeros inherit the
// previous sign so the count is deterministic.
inline FrameTrack frame_zcr(const AudioWindow& win, const AnalysisConfig& cfg) {
    FrameTrack t{{}, TrackKind::zcr, cfg.frame_step_ms, cfg.frame_span_ms};
    const auto bounds = frame_bounds(cfg, static_cast<std::int64_t>(win.samples.size()),
                                     win.sample_rate);
    t.values.reserve(bounds.size());
    for (const auto& [s, e] : bounds) {
        int prev = win.samples[s] < 0.0 ? -1 : 1;
        std::int64_t crossings = 0;
        for (std::int64_t i = s + 1; i < e; ++i) {
            const double x = win.samples[i];
            const int sign = x > 0.0 ? 1 : (x < 0.0 ? -1 : prev);
            if (sign != prev) ++crossings;
            prev = sign;
        }
        t.values.push_back(static_cast<double>(crossings) / static_cast<double>(e - s));
    }
    return t;
}

// (mean, population std) over all frames of a track.
inline std::pair<double, double> summarize(const FrameTrack& track) {
    if (track.values.empty()) throw std::runtime_error("summarize: empty track");
    return mean_std(track.values);
}

}  // namespace swe
