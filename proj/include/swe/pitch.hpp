#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swe/common.hpp"
#include "swe/features.hpp"
#include "swe/framing.hpp"

namespace swe {

struct PitchParams {
    double floor_hz = 75.0;            // lowest admissible fundamental
    double ceiling_hz = 400.0;         // frequencies above this are rejected
    double voicing_threshold = 0.45;   // minimum normalized autocorrelation peak
    double snr = 4.0;                  // silence threshold = snr * ambient noise
    double octave_ratio = 0.95;        // prefer the shortest lag among near-equal peaks
    int min_run = 4;                   // non-zero runs shorter than this are removed
};

namespace detail {

// Zero out runs of non-zero values shorter than min_run frames.
inline void prune_short_runs(std::vector<double>& v, int min_run) {
    std::size_t i = 0;
    while (i < v.size()) {
        if (v[i] == 0.0) { ++i; continue; }
        std::size_t j = i;
        while (j < v.size() && v[j] != 0.0) ++j;
        if (j - i < static_cast<std::size_t>(min_run))
            std::fill(v.begin() + i, v.begin() + j, 0.0);
        i = j;
    }
}

// Best normalized-autocorrelation lag for one frame, with parabolic
// refinement. Returns 0 when no peak clears the voicing threshold.
inline double frame_pitch_hz(const double* x, std::int64_t n, int rate,
                             const PitchParams& p) {
    const std::int64_t lag_min =
        std::max<std::int64_t>(2, static_cast<std::int64_t>(std::floor(rate / p.ceiling_hz)));
    const std::int64_t lag_max =
        std::min<std::int64_t>(n - 2, static_cast<std::int64_t>(std::ceil(rate / p.floor_hz)));
    if (lag_max <= lag_min) return 0.0;

    double mean = 0.0;
    for (std::int64_t i = 0; i < n; ++i) mean += x[i];
    mean /= static_cast<double>(n);

    std::vector<double> d(static_cast<std::size_t>(n));
    double total_energy = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        d[i] = x[i] - mean;
        total_energy += d[i] * d[i];
    }
    if (total_energy <= 0.0) return 0.0;

    // r[k] from lag 1 to lag_max+1: lags below lag_min take part in the
    // octave-bias scan so a fundamental above the ceiling is recognized (and
    // rejected) instead of being reported at a subharmonic.
    const std::int64_t lo = 1;
    const std::int64_t hi = std::min<std::int64_t>(lag_max + 1, n - 1);
    std::vector<double> r(static_cast<std::size_t>(hi - lo + 1), -1.0);
    for (std::int64_t lag = lo; lag <= hi; ++lag) {
        const std::int64_t m = n - lag;
        double num = 0.0, e0 = 0.0, e1 = 0.0;
        for (std::int64_t i = 0; i < m; ++i) {
            num += d[i] * d[i + lag];
            e0 += d[i] * d[i];
            e1 += d[i + lag] * d[i + lag];
        }
        const double denom = std::sqrt(e0 * e1);
        r[lag - lo] = denom > 0.0 ? num / denom : 0.0;
    }

    double best_in_range = -1.0;
    for (std::int64_t lag = lag_min; lag <= lag_max; ++lag)
        best_in_range = std::max(best_in_range, r[lag - lo]);
    if (best_in_range < p.voicing_threshold) return 0.0;

    double best = best_in_range;
    for (std::int64_t lag = 2; lag < lag_min; ++lag) best = std::max(best, r[lag - lo]);

    // Shortest-lag local maximum whose height is close to the global best;
    // avoids locking onto the period's integer multiples. Starting below
    // lag_min lets a short true period surface and be ruled out of range.
    std::int64_t pick = -1;
    for (std::int64_t lag = 2; lag <= lag_max; ++lag) {
        const double c = r[lag - lo];
        if (c >= p.octave_ratio * best && c >= r[lag - lo - 1] &&
            (lag - lo + 1 >= static_cast<std::int64_t>(r.size()) || c >= r[lag - lo + 1])) {
            pick = lag;
            break;
        }
    }
    if (pick < 0) return 0.0;

    double lag_refined = static_cast<double>(pick);
    if (pick - lo >= 1 && pick - lo + 1 < static_cast<std::int64_t>(r.size())) {
        const double rm = r[pick - lo - 1], r0 = r[pick - lo], rp = r[pick - lo + 1];
        const double denom = rm - 2.0 * r0 + rp;
        if (denom < 0.0) {
            const double delta = 0.5 * (rm - rp) / denom;
            if (std::abs(delta) <= 1.0) lag_refined += delta;
        }
    }
    const double hz = rate / lag_refined;
    if (hz > p.ceiling_hz || hz < p.floor_hz) return 0.0;
    return hz;
}

}  // namespace detail

// Per-frame fundamental frequency by normalized autocorrelation; 0 encodes
// unvoiced or rejected frames. Frames quieter than snr times the window's
// ambient noise level (10th percentile of the frame RMS track) are silenced,
// then non-zero runs shorter than min_run frames are removed.
inline FrameTrack pitch_track(const AudioWindow& win, const FrameTrack& rms,
                              const AnalysisConfig& cfg, const PitchParams& p = {}) {
    const auto bounds = frame_bounds(cfg, static_cast<std::int64_t>(win.samples.size()),
                                     win.sample_rate);
    if (bounds.size() != rms.values.size())
        throw std::runtime_error("pitch_track: rms track does not match the frame grid");

    FrameTrack t{{}, TrackKind::pitch_hz, cfg.frame_step_ms, cfg.frame_span_ms};
    t.values.resize(bounds.size(), 0.0);

    const double ambient = percentile(rms.values, 10.0);
    double silence_threshold = p.snr * ambient;
    const double max_rms = *std::max_element(rms.values.begin(), rms.values.end());
    // When the gate would silence every frame (no intensity spread in the
    // window, e.g. a continuous tone), it carries no information; disable it
    // and let the voicing threshold decide.
    if (silence_threshold >= max_rms) silence_threshold = 0.0;

    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (silence_threshold > 0.0 && rms.values[i] < silence_threshold) continue;
        const auto& [s, e] = bounds[i];
        t.values[i] = detail::frame_pitch_hz(win.samples.data() + s, e - s, win.sample_rate, p);
    }
    detail::prune_short_runs(t.values, p.min_run);
    return t;
}

// Discard pitch values not within 100 ms of a positive voice-activity frame.
// Zeroes values only; never creates or changes non-zero ones.
inline FrameTrack gate_by_vad(const FrameTrack& pitch, const FrameTrack& vad_flags,
                              const AnalysisConfig& cfg) {
    check_same_grid(pitch, vad_flags);
    const int radius = static_cast<int>(std::llround(100.0 / cfg.frame_step_ms));
    FrameTrack out = pitch;
    const std::int64_t n = static_cast<std::int64_t>(pitch.values.size());
    // prefix counts of positive vad flags for O(1) range queries
    std::vector<std::int64_t> prefix(n + 1, 0);
    for (std::int64_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + (vad_flags.values[i] != 0.0 ? 1 : 0);
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t a = std::max<std::int64_t>(0, i - radius);
        const std::int64_t b = std::min<std::int64_t>(n, i + radius + 1);
        if (prefix[b] - prefix[a] == 0) out.values[i] = 0.0;
    }
    return out;
}

}  // namespace swe
