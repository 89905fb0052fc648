#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swe/features.hpp"
#include "swe/framing.hpp"

namespace swe {

struct SyllableParams {
    double min_width_frames = 2.0;  // peak width at half prominence
    int min_distance_frames = 4;    // minimum spacing between kept peaks
    double zcr_max = 0.06;          // peak frame must be below this
    int pitch_radius = 4;           // frames searched for a non-zero pitch
    double min_prominence_ratio = 0.1;  // prominence relative to the track max
};

struct SyllableResult {
    std::vector<std::int64_t> peak_frames;  // sorted syllable peak indices
    double rate = 0.0;                      // syllables per second of window
};

namespace detail {

struct Peak {
    std::int64_t index;
    double height;
    double width;
    double prominence;
};

// Local maxima with plateau handling, prominence and half-prominence width
// thresholds, and minimum-distance culling (higher peak wins, earlier peak
// on ties).
inline std::vector<Peak> find_peaks(const std::vector<double>& v, double min_width,
                                    int min_distance, double min_prominence = 0.0) {
    const std::int64_t n = static_cast<std::int64_t>(v.size());
    std::vector<Peak> peaks;
    std::int64_t i = 1;
    while (i < n - 1) {
        if (v[i] > v[i - 1]) {
            std::int64_t j = i;
            while (j < n - 1 && v[j + 1] == v[i]) ++j;
            if (j < n - 1 && v[j + 1] < v[i]) {
                peaks.push_back({(i + j) / 2, v[i], 0.0, 0.0});
                i = j;
            }
        }
        ++i;
    }

    // prominence and width at half prominence
    for (auto& pk : peaks) {
        double left_min = pk.height, right_min = pk.height;
        for (std::int64_t k = pk.index - 1; k >= 0; --k) {
            if (v[k] > pk.height) break;
            left_min = std::min(left_min, v[k]);
        }
        for (std::int64_t k = pk.index + 1; k < n; ++k) {
            if (v[k] > pk.height) break;
            right_min = std::min(right_min, v[k]);
        }
        pk.prominence = pk.height - std::max(left_min, right_min);
        const double ref = pk.height - 0.5 * pk.prominence;
        double left = static_cast<double>(pk.index);
        for (std::int64_t k = pk.index - 1; k >= 0; --k) {
            if (v[k] < ref) {
                left = k + (ref - v[k]) / (v[k + 1] - v[k]);
                break;
            }
            left = static_cast<double>(k);
        }
        double right = static_cast<double>(pk.index);
        for (std::int64_t k = pk.index + 1; k < n; ++k) {
            if (v[k] < ref) {
                right = k - (ref - v[k]) / (v[k - 1] - v[k]);
                break;
            }
            right = static_cast<double>(k);
        }
        pk.width = right - left;
    }

    std::erase_if(peaks, [&](const Peak& pk) {
        return pk.width < min_width || pk.prominence < min_prominence;
    });

    // distance culling: process tallest first, ties resolved to the earlier peak
    std::vector<std::size_t> order(peaks.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return peaks[a].height > peaks[b].height;
    });
    std::vector<bool> keep(peaks.size(), true);
    for (std::size_t oi : order) {
        if (!keep[oi]) continue;
        for (std::size_t k = 0; k < peaks.size(); ++k) {
            if (k == oi || !keep[k]) continue;
            if (std::llabs(peaks[k].index - peaks[oi].index) < min_distance) keep[k] = false;
        }
    }
    std::vector<Peak> out;
    for (std::size_t k = 0; k < peaks.size(); ++k)
        if (keep[k]) out.push_back(peaks[k]);
    return out;
}

}  // namespace detail

// Voiced intensity peaks are counted as syllables: a kept RMS peak is a
// syllable when its zero-crossing rate is below zcr_max and a non-zero pitch
// value exists within pitch_radius frames. Rate is syllables per second of
// the nominal window duration.
inline SyllableResult count_syllables(const FrameTrack& rms, const FrameTrack& zcr,
                                      const FrameTrack& pitch, const AnalysisConfig& cfg,
                                      const SyllableParams& p = {}) {
    check_same_grid(rms, zcr);
    check_same_grid(rms, pitch);
    if (rms.values.empty()) throw std::runtime_error("count_syllables: empty tracks");

    const double track_max = *std::max_element(rms.values.begin(), rms.values.end());
    const auto peaks =
        detail::find_peaks(rms.values, p.min_width_frames, p.min_distance_frames,
                           p.min_prominence_ratio * track_max);
    const std::int64_t n = static_cast<std::int64_t>(rms.values.size());

    SyllableResult res;
    for (const auto& pk : peaks) {
        if (zcr.values[pk.index] >= p.zcr_max) continue;
        bool pitched = false;
        const std::int64_t a = std::max<std::int64_t>(0, pk.index - p.pitch_radius);
        const std::int64_t b = std::min<std::int64_t>(n, pk.index + p.pitch_radius + 1);
        for (std::int64_t k = a; k < b && !pitched; ++k) pitched = pitch.values[k] != 0.0;
        if (pitched) res.peak_frames.push_back(pk.index);
    }
    std::sort(res.peak_frames.begin(), res.peak_frames.end());
    res.rate = static_cast<double>(res.peak_frames.size()) / (cfg.window_ms / 1000.0);
    return res;
}

}  // namespace swe
