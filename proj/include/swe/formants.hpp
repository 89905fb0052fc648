#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "swe/features.hpp"
#include "swe/framing.hpp"
#include "swe/vad.hpp"

namespace swe {

struct FormantParams {
    double preemphasis = 0.97;
    double grid_min_hz = 90.0;       // search band for envelope peaks
    double grid_max_hz = 4000.0;
    double grid_step_hz = 5.0;
    int extra_order = 2;             // LPC order = extra_order + rate/1000
};

struct FillerParams {
    double min_ms = 250.0;                    // minimum filler duration
    double f1_band[2] = {300.0, 700.0};       // back-vowel region
    double f2_band[2] = {600.0, 1400.0};
    double occupancy = 0.80;                  // fraction of frames inside the bands
    double f1_std_max_hz = 75.0;              // formant stability limits
    double f2_std_max_hz = 100.0;
};

// Per-frame (F1, F2) estimates; (0, 0) on unvoiced frames.
struct FormantTrack {
    std::vector<std::array<double, 2>> values;
    double frame_step_ms = 10.0;
    double frame_span_ms = 50.0;
};

struct FillerResult {
    std::vector<std::pair<std::int64_t, std::int64_t>> segments;  // [start, end) frames
    int count = 0;
};

namespace detail {

// Levinson-Durbin recursion on the frame autocorrelation; returns LPC
// coefficients a[1..order] of A(z) = 1 - sum a_k z^-k.
inline std::vector<double> lpc_coeffs(const std::vector<double>& x, int order) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    std::vector<double> r(order + 1, 0.0);
    for (int k = 0; k <= order; ++k)
        for (std::int64_t i = 0; i + k < n; ++i) r[k] += x[i] * x[i + k];
    if (r[0] <= 0.0) return {};

    std::vector<double> a(order + 1, 0.0), tmp(order + 1, 0.0);
    double err = r[0];
    for (int m = 1; m <= order; ++m) {
        double acc = r[m];
        for (int k = 1; k < m; ++k) acc -= a[k] * r[m - k];
        const double reflect = acc / err;
        tmp = a;
        a[m] = reflect;
        for (int k = 1; k < m; ++k) a[k] = tmp[k] - reflect * tmp[m - k];
        err *= 1.0 - reflect * reflect;
        if (err <= 0.0) return {};
    }
    return a;
}

// The two strongest peaks of the LPC spectral envelope within the search
// band, ordered by frequency and refined parabolically on the log-magnitude
// grid. Taking the strongest (rather than the lowest) peaks keeps harmonic
// ripple between two distant resonances from masquerading as a formant.
inline std::array<double, 2> envelope_peaks(const std::vector<double>& a, int rate,
                                            const FormantParams& p) {
    const int order = static_cast<int>(a.size()) - 1;
    const double fmax = std::min(p.grid_max_hz, rate / 2.0 - p.grid_step_hz);
    const int bins = static_cast<int>((fmax - p.grid_min_hz) / p.grid_step_hz) + 1;
    if (bins < 3) return {0.0, 0.0};

    std::vector<double> logmag(bins);
    for (int b = 0; b < bins; ++b) {
        const double w = 2.0 * std::numbers::pi * (p.grid_min_hz + b * p.grid_step_hz) / rate;
        double re = 1.0, im = 0.0;
        for (int k = 1; k <= order; ++k) {
            re -= a[k] * std::cos(w * k);
            im += a[k] * std::sin(w * k);
        }
        logmag[b] = -0.5 * std::log(re * re + im * im + 1e-300);
    }

    std::vector<std::pair<double, double>> peaks;  // (height, freq)
    for (int b = 1; b < bins - 1; ++b) {
        if (logmag[b] > logmag[b - 1] && logmag[b] >= logmag[b + 1]) {
            double delta = 0.0;
            const double denom = logmag[b - 1] - 2.0 * logmag[b] + logmag[b + 1];
            if (denom < 0.0) delta = 0.5 * (logmag[b - 1] - logmag[b + 1]) / denom;
            peaks.emplace_back(logmag[b], p.grid_min_hz + (b + delta) * p.grid_step_hz);
        }
    }
    if (peaks.size() < 2) return {0.0, 0.0};
    std::partial_sort(peaks.begin(), peaks.begin() + 2, peaks.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    std::array<double, 2> f{peaks[0].second, peaks[1].second};
    if (f[0] > f[1]) std::swap(f[0], f[1]);
    return f;
}

}  // namespace detail

// F1/F2 estimation by linear prediction with spectral peak picking, run only
// on frames the pitch track marks as voiced.
inline FormantTrack formant_track(const AudioWindow& win, const FrameTrack& pitch,
                                  const AnalysisConfig& cfg, const FormantParams& p = {}) {
    const auto bounds = frame_bounds(cfg, static_cast<std::int64_t>(win.samples.size()),
                                     win.sample_rate);
    if (bounds.size() != pitch.values.size())
        throw std::runtime_error("formant_track: pitch track does not match the frame grid");

    FormantTrack t;
    t.frame_step_ms = cfg.frame_step_ms;
    t.frame_span_ms = cfg.frame_span_ms;
    t.values.resize(bounds.size(), {0.0, 0.0});

    const int order = p.extra_order + win.sample_rate / 1000;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (pitch.values[i] == 0.0) continue;
        const auto& [s, e] = bounds[i];
        const std::int64_t n = e - s;
        std::vector<double> frame(static_cast<std::size_t>(n));
        // pre-emphasis then Hamming window
        frame[0] = win.samples[s];
        for (std::int64_t k = 1; k < n; ++k)
            frame[k] = win.samples[s + k] - p.preemphasis * win.samples[s + k - 1];
        for (std::int64_t k = 0; k < n; ++k)
            frame[k] *= 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / (n - 1));

        const auto a = detail::lpc_coeffs(frame, order);
        if (a.empty()) continue;
        auto f = detail::envelope_peaks(a, win.sample_rate, p);
        if (f[0] > 0.0 && f[1] > 0.0 && f[0] < f[1]) t.values[i] = f;
    }
    return t;
}

// A maximal voiced segment counts as a filler utterance when it lasts at
// least min_ms, its formants sit in the back-vowel bands on at least the
// occupancy fraction of frames, and both formants are stable over the
// segment.
inline FillerResult detect_fillers(const FormantTrack& formants, const VadResult& vad,
                                   const AnalysisConfig& cfg, const FillerParams& p = {}) {
    if (formants.values.size() != vad.flags.values.size())
        throw std::runtime_error("detect_fillers: frame grid mismatch");
    const std::int64_t n = static_cast<std::int64_t>(formants.values.size());
    const std::int64_t min_frames =
        static_cast<std::int64_t>(std::llround(p.min_ms / cfg.frame_step_ms));

    FillerResult res;
    std::int64_t i = 0;
    while (i < n) {
        if (vad.flags.values[i] == 0.0) { ++i; continue; }
        std::int64_t j = i;
        while (j < n && vad.flags.values[j] != 0.0) ++j;
        const std::int64_t len = j - i;
        if (len >= min_frames) {
            std::int64_t in_band = 0;
            std::vector<double> f1s, f2s;
            for (std::int64_t k = i; k < j; ++k) {
                const auto& f = formants.values[k];
                if (f[0] <= 0.0 || f[1] <= 0.0) continue;
                f1s.push_back(f[0]);
                f2s.push_back(f[1]);
                if (f[0] >= p.f1_band[0] && f[0] <= p.f1_band[1] &&
                    f[1] >= p.f2_band[0] && f[1] <= p.f2_band[1])
                    ++in_band;
            }
            if (static_cast<double>(in_band) >= p.occupancy * static_cast<double>(len) &&
                !f1s.empty()) {
                const auto [m1, s1] = mean_std(f1s);
                const auto [m2, s2] = mean_std(f2s);
                (void)m1; (void)m2;
                if (s1 <= p.f1_std_max_hz && s2 <= p.f2_std_max_hz)
                    res.segments.emplace_back(i, j);
            }
        }
        i = j;
    }
    res.count = static_cast<int>(res.segments.size());
    return res;
}

}  // namespace swe
