#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swe/common.hpp"
#include "swe/features.hpp"
#include "swe/pitch.hpp"

namespace swe {

struct VadParams {
    double primary_threshold = 40.0;  // multiplies ln(min_energy)
    double zcr_max = 0.04;            // crossings per sample
    double zcr_min = 0.008;
    int pitch_search_radius = 8;      // frames on either side
    int min_run = 10;                 // voiced runs shorter than this are removed
    int init_span = 30;               // frames averaged for the initial energy floor
    double energy_floor = 1e-12;      // ln() clamp for digital silence

    void validate() const {
        if (zcr_min >= zcr_max) throw std::runtime_error("VadParams: zcr_min >= zcr_max");
        if (min_run < 1) throw std::runtime_error("VadParams: min_run < 1");
        if (init_span < 1) throw std::runtime_error("VadParams: init_span < 1");
    }
};

struct VadResult {
    FrameTrack flags;          // vad_flag track, values in {0, 1}
    double mean = 0.0;
    double std_dev = 0.0;
    bool degenerate_silence = false;  // energy floor clamp was hit
};

// Adaptive-threshold voice activity detection. A frame is voiced when its
// energy exceeds primary_threshold * ln(min_energy), its zero-crossing rate
// lies inside (zcr_min, zcr_max), and a non-zero pitch exists within
// pitch_search_radius frames. min_energy starts as the mean energy of the
// first init_span frames (assumed silent) and is folded forward as a running
// mean over every subsequent non-speech frame. Voiced runs shorter than
// min_run frames are removed before the summary statistics.
inline VadResult detect_voice_activity(const FrameTrack& energy, const FrameTrack& zcr,
                                       const FrameTrack& pitch, const VadParams& p = {}) {
    p.validate();
    check_same_grid(energy, zcr);
    check_same_grid(energy, pitch);
    const std::int64_t n = static_cast<std::int64_t>(energy.values.size());
    if (n == 0) throw std::runtime_error("detect_voice_activity: empty tracks");
    for (double e : energy.values)
        if (e < 0.0) throw std::runtime_error("detect_voice_activity: negative energy");

    VadResult res;
    res.flags = FrameTrack{{}, TrackKind::vad_flag, energy.frame_step_ms, energy.frame_span_ms};
    res.flags.values.resize(n, 0.0);

    const std::int64_t init_n = std::min<std::int64_t>(p.init_span, n);
    double min_energy = 0.0;
    for (std::int64_t i = 0; i < init_n; ++i) min_energy += energy.values[i];
    min_energy /= static_cast<double>(init_n);
    if (min_energy <= 0.0) {
        min_energy = p.energy_floor;
        res.degenerate_silence = true;
    }
    double threshold = p.primary_threshold * std::log(min_energy);
    std::int64_t silence_count = 0;

    // prefix counts of non-zero pitch frames
    std::vector<std::int64_t> prefix(n + 1, 0);
    for (std::int64_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + (pitch.values[i] != 0.0 ? 1 : 0);

    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t a = std::max<std::int64_t>(0, i - p.pitch_search_radius);
        const std::int64_t b = std::min<std::int64_t>(n, i + p.pitch_search_radius + 1);
        const bool pitched = prefix[b] - prefix[a] > 0;
        const bool speech = energy.values[i] > threshold &&
                            zcr.values[i] > p.zcr_min && zcr.values[i] < p.zcr_max && pitched;
        if (speech) {
            res.flags.values[i] = 1.0;
        } else {
            silence_count += 1;
            min_energy = (static_cast<double>(silence_count) * min_energy + energy.values[i]) /
                         static_cast<double>(silence_count + 1);
            if (min_energy <= 0.0) {
                min_energy = p.energy_floor;
                res.degenerate_silence = true;
            }
            threshold = p.primary_threshold * std::log(min_energy);
        }
    }

    detail::prune_short_runs(res.flags.values, p.min_run);
    const auto [m, s] = mean_std(res.flags.values);
    res.mean = m;
    res.std_dev = s;
    return res;
}

}  // namespace swe
