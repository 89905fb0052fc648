#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swe/audio.hpp"
#include "swe/common.hpp"

namespace swe {

// Two-level time grid: analysis windows (default 5 s advancing by 1 s) and,
// inside each window, frames at 10 ms steps looking back over 50 ms.
struct AnalysisConfig {
    double window_ms = 5000.0;
    double step_ms = 1000.0;
    double frame_step_ms = 10.0;
    double frame_span_ms = 50.0;

    void validate() const {
        if (window_ms <= 0 || step_ms <= 0 || frame_step_ms <= 0 || frame_span_ms <= 0)
            throw std::runtime_error("AnalysisConfig: all durations must be positive");
        if (frame_span_ms < frame_step_ms)
            throw std::runtime_error("AnalysisConfig: frame_span_ms < frame_step_ms");
        if (window_ms < frame_span_ms)
            throw std::runtime_error("AnalysisConfig: window_ms < frame_span_ms");
    }
};

// One mono analysis window plus its offset in the source stream.
struct AudioWindow {
    std::vector<double> samples;
    int sample_rate = 0;
    double start_time_s = 0.0;
};

// Frame i covers [i*step, i*step + span); only frames fully inside the
// window are emitted.
inline std::vector<std::pair<std::int64_t, std::int64_t>> frame_bounds(
    const AnalysisConfig& cfg, std::int64_t window_len, int rate) {
    cfg.validate();
    const std::int64_t span = ms_to_samples(cfg.frame_span_ms, rate);
    const std::int64_t step = ms_to_samples(cfg.frame_step_ms, rate);
    if (window_len < span)
        throw std::runtime_error("frame_bounds: window shorter than one frame span");
    const std::int64_t count = (window_len - span) / step + 1;
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i)
        out.emplace_back(i * step, i * step + span);
    return out;
}

inline std::int64_t frame_count(const AnalysisConfig& cfg, std::int64_t window_len, int rate) {
    const std::int64_t span = ms_to_samples(cfg.frame_span_ms, rate);
    const std::int64_t step = ms_to_samples(cfg.frame_step_ms, rate);
    if (window_len < span)
        throw std::runtime_error("frame_count: window shorter than one frame span");
    return (window_len - span) / step + 1;
}

// Incremental windower shared by file and stream processing so both modes
// produce identical windows. Window k starts at k*step samples; a window is
// emitted only once fully filled, and trailing audio shorter than a window
// produces nothing. Start positions are computed by multiplication, so there
// is no drift over long streams.
class Windower {
public:
    Windower(const AnalysisConfig& cfg, int rate) : rate_(rate) {
        cfg.validate();
        win_len_ = ms_to_samples(cfg.window_ms, rate);
        step_len_ = ms_to_samples(cfg.step_ms, rate);
        step_s_ = cfg.step_ms / 1000.0;
    }

    void push(std::span<const double> samples) {
        buf_.insert(buf_.end(), samples.begin(), samples.end());
    }

    // Next completed window, or nullopt until more audio arrives.
    std::optional<AudioWindow> poll() {
        const std::int64_t start = next_window_ * step_len_;
        if (start + win_len_ > base_ + static_cast<std::int64_t>(buf_.size()))
            return std::nullopt;
        AudioWindow w;
        w.sample_rate = rate_;
        w.start_time_s = static_cast<double>(next_window_) * step_s_;
        const std::size_t off = static_cast<std::size_t>(start - base_);
        w.samples.assign(buf_.begin() + off, buf_.begin() + off + win_len_);
        ++next_window_;
        // drop samples no future window needs
        const std::int64_t keep_from = next_window_ * step_len_;
        if (keep_from > base_) {
            buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::size_t>(keep_from - base_));
            base_ = keep_from;
        }
        return w;
    }

private:
    int rate_;
    std::int64_t win_len_ = 0, step_len_ = 0;
    double step_s_ = 0.0;
    std::int64_t base_ = 0;       // stream index of buf_[0]
    std::int64_t next_window_ = 0;
    std::vector<double> buf_;
};

// All complete windows of a mono buffer.
inline std::vector<AudioWindow> windows(const AudioBuffer& mono, const AnalysisConfig& cfg) {
    if (mono.channels != 1) throw std::runtime_error("windows: mono input required");
    Windower w(cfg, mono.sample_rate);
    w.push(mono.samples);
    std::vector<AudioWindow> out;
    while (auto win = w.poll()) out.push_back(std::move(*win));
    return out;
}

}  // namespace swe
