#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swe/audio.hpp"
#include "swe/features.hpp"
#include "swe/framing.hpp"
#include "swe/pitch.hpp"
#include "swe/syllables.hpp"
#include "swe/vad.hpp"

namespace swe {

struct BenchRow {
    double window_s = 0.0;
    std::string feature;  // intensity | pitch | voice-activity | speech-rate | all
    double mean_s = 0.0;
    double std_s = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double fit_slope = 0.0;      // linear fit of total time vs window size
    double fit_intercept = 0.0;
    double fit_r2 = 0.0;

    double mean_of(double window_s, const std::string& feature) const {
        for (const auto& r : rows)
            if (r.window_s == window_s && r.feature == feature) return r.mean_s;
        throw std::runtime_error("bench: no row for " + feature);
    }
};

namespace detail {

inline double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace detail

// Time each feature extractor (with its prerequisite tracks) over the given
// window sizes. Timings cover feature extraction only; one warm-up run per
// size is discarded and a monotonic clock is used.
inline BenchReport run_bench(const AudioBuffer& audio,
                             const std::vector<double>& window_sizes_s = {1, 5, 10, 15, 30, 60},
                             int repeats = 10) {
    const AudioBuffer mono = to_mono(audio);
    BenchReport report;
    std::vector<double> totals_x, totals_y;

    for (double size_s : window_sizes_s) {
        const std::int64_t len = ms_to_samples(size_s * 1000.0, mono.sample_rate);
        if (len > static_cast<std::int64_t>(mono.samples.size()))
            throw std::runtime_error("run_bench: audio shorter than the largest window");
        AudioWindow win;
        win.sample_rate = mono.sample_rate;
        win.samples.assign(mono.samples.begin(), mono.samples.begin() + len);

        AnalysisConfig cfg;
        cfg.window_ms = size_s * 1000.0;

        auto timed = [&](auto&& fn) {
            fn();  // warm-up
            std::vector<double> times;
            for (int r = 0; r < repeats; ++r) {
                const double t0 = detail::now_s();
                fn();
                times.push_back(detail::now_s() - t0);
            }
            return mean_std(times);
        };

        // prerequisites computed once for the dependent extractors
        const auto rms = frame_rms(win, cfg);
        const auto energy = frame_energy(win, cfg);
        const auto zcr = frame_zcr(win, cfg);
        const auto pitch = pitch_track(win, rms, cfg);

        auto [im, is] = timed([&] { volatile auto t = frame_rms(win, cfg); (void)t; });
        report.rows.push_back({size_s, "intensity", im, is});

        auto [pm, ps] = timed([&] {
            auto r = frame_rms(win, cfg);
            volatile auto t = pitch_track(win, r, cfg);
            (void)t;
        });
        report.rows.push_back({size_s, "pitch", pm, ps});

        auto [vm, vs] = timed([&] {
            auto e = frame_energy(win, cfg);
            auto z = frame_zcr(win, cfg);
            volatile auto t = detect_voice_activity(e, z, pitch);
            (void)t;
        });
        report.rows.push_back({size_s, "voice-activity", vm, vs});

        auto [sm, ss] = timed([&] {
            auto r = frame_rms(win, cfg);
            auto z = frame_zcr(win, cfg);
            volatile auto t = count_syllables(r, z, pitch, cfg);
            (void)t;
        });
        report.rows.push_back({size_s, "speech-rate", sm, ss});

        auto [am, as] = timed([&] {
            auto r = frame_rms(win, cfg);
            auto e = frame_energy(win, cfg);
            auto z = frame_zcr(win, cfg);
            auto p = pitch_track(win, r, cfg);
            auto v = detect_voice_activity(e, z, p);
            volatile auto t = count_syllables(r, z, p, cfg);
            (void)t;
            (void)v;
        });
        report.rows.push_back({size_s, "all", am, as});

        totals_x.push_back(size_s);
        totals_y.push_back(am);
    }

    // least-squares fit of total time vs window size
    const double n = static_cast<double>(totals_x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < totals_x.size(); ++i) {
        sx += totals_x[i];
        sy += totals_y[i];
        sxx += totals_x[i] * totals_x[i];
        sxy += totals_x[i] * totals_y[i];
        syy += totals_y[i] * totals_y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom > 0.0) {
        report.fit_slope = (n * sxy - sx * sy) / denom;
        report.fit_intercept = (sy - report.fit_slope * sx) / n;
        double ss_res = 0.0, ss_tot = 0.0;
        const double my = sy / n;
        for (std::size_t i = 0; i < totals_x.size(); ++i) {
            const double pred = report.fit_slope * totals_x[i] + report.fit_intercept;
            ss_res += (totals_y[i] - pred) * (totals_y[i] - pred);
            ss_tot += (totals_y[i] - my) * (totals_y[i] - my);
        }
        report.fit_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return report;
}

inline std::string bench_csv(const BenchReport& rep) {
    std::ostringstream os;
    os << "window_s,feature,mean_s,std_s\n";
    for (const auto& r : rep.rows)
        os << r.window_s << ',' << r.feature << ',' << r.mean_s << ',' << r.std_s << '\n';
    os << "# linear fit: slope=" << rep.fit_slope << " intercept=" << rep.fit_intercept
       << " r2=" << rep.fit_r2 << '\n';
    return os.str();
}

inline std::string bench_text(const BenchReport& rep) {
    std::ostringstream os;
    os << "Window (s)  Feature          Mean (s)     Std (s)\n";
    for (const auto& r : rep.rows) {
        char line[120];
        std::snprintf(line, sizeof(line), "%-11.0f %-16s %-12.6f %.6f\n", r.window_s,
                      r.feature.c_str(), r.mean_s, r.std_s);
        os << line;
    }
    char fit[120];
    std::snprintf(fit, sizeof(fit), "Linear fit: total = %.6f * size + %.6f  (R^2 = %.4f)\n",
                  rep.fit_slope, rep.fit_intercept, rep.fit_r2);
    os << fit;
    return os.str();
}

}  // namespace swe
