#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swe/audio.hpp"

namespace swe {
namespace synth {

inline std::vector<double> silence(std::int64_t n) {
    return std::vector<double>(static_cast<std::size_t>(n), 0.0);
}

inline std::vector<double> sine(std::int64_t n, int rate, double freq, double amp,
                                double phase = 0.0) {
    std::vector<double> v(static_cast<std::size_t>(n));
    const double w = 2.0 * std::numbers::pi * freq / rate;
    for (std::int64_t i = 0; i < n; ++i) v[i] = amp * std::sin(w * i + phase);
    return v;
}

inline std::vector<double> white_noise(std::int64_t n, double amp, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-amp, amp);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = dist(gen);
    return v;
}

// Voiced tone: harmonic series with 1/k^2 rolloff, so the fundamental
// dominates and the zero-crossing rate stays near 2*f0 per second.
inline std::vector<double> voiced_tone(std::int64_t n, int rate, double f0, double amp,
                                       int harmonics = 8) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    double norm = 0.0;
    for (int k = 1; k <= harmonics; ++k) norm += 1.0 / (k * k);
    for (int k = 1; k <= harmonics; ++k) {
        if (k * f0 >= rate / 2.0) break;
        const double a = amp / (k * k) / norm;
        const double w = 2.0 * std::numbers::pi * k * f0 / rate;
        for (std::int64_t i = 0; i < n; ++i) v[i] += a * std::sin(w * i);
    }
    return v;
}

namespace detail {

// Two-pole resonator at (freq, bandwidth), applied in place.
inline void resonator(std::vector<double>& v, int rate, double freq, double bandwidth) {
    const double r = std::exp(-std::numbers::pi * bandwidth / rate);
    const double c1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / rate);
    const double c2 = -r * r;
    double y1 = 0.0, y2 = 0.0;
    for (auto& x : v) {
        const double y = x + c1 * y1 + c2 * y2;
        y2 = y1;
        y1 = y;
        x = y;
    }
}

}  // namespace detail

// Glottal-style vowel: impulse train at f0 through two cascaded resonators,
// peak-normalized to amp. This is a true all-pole signal, so linear
// prediction recovers the resonances.
inline std::vector<double> vowel(std::int64_t n, int rate, double f0, double f1, double f2,
                                 double amp, double bw1 = 90.0, double bw2 = 110.0) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    const double period = rate / f0;
    for (double pos = 0.0; pos < static_cast<double>(n); pos += period)
        v[static_cast<std::size_t>(pos)] = 1.0;
    detail::resonator(v, rate, f1, bw1);
    detail::resonator(v, rate, f2, bw2);
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    if (peak > 0.0)
        for (auto& x : v) x *= amp / peak;
    return v;
}

inline void overlay(std::vector<double>& dst, const std::vector<double>& src,
                    std::int64_t offset) {
    for (std::size_t i = 0; i < src.size() && offset + static_cast<std::int64_t>(i) <
                                                  static_cast<std::int64_t>(dst.size());
         ++i)
        dst[offset + i] += src[i];
}

inline void append(std::vector<double>& dst, const std::vector<double>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

// Named deterministic scenarios for the CLI and tests. Syntax:
//   silence | noise[:amp] | sine:<hz>[:amp] | tone:<f0>[:amp]
//   bursts:<count>[:f0] | vowel:<f0>:<f1>:<f2>[:amp] | speech[:occupancy]
inline AudioBuffer scenario(const std::string& name, int rate, double seconds,
                            std::uint64_t seed = 1) {
    const std::int64_t n = static_cast<std::int64_t>(std::llround(seconds * rate));
    std::vector<std::string> parts;
    {
        std::stringstream ss(name);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
    }
    auto arg = [&](std::size_t i, double def) {
        return parts.size() > i ? std::stod(parts[i]) : def;
    };

    AudioBuffer out;
    out.sample_rate = rate;
    out.channels = 1;
    const std::string& kind = parts.at(0);

    if (kind == "silence") {
        out.samples = silence(n);
    } else if (kind == "noise") {
        out.samples = white_noise(n, arg(1, 0.001), seed);
    } else if (kind == "sine") {
        out.samples = sine(n, rate, arg(1, 220.0), arg(2, 0.5));
    } else if (kind == "tone") {
        out.samples = voiced_tone(n, rate, arg(1, 120.0), arg(2, 0.4));
    } else if (kind == "bursts") {
        // evenly spaced voiced bursts over a low noise floor
        const int count = static_cast<int>(arg(1, 3));
        const double f0 = arg(2, 120.0);
        out.samples = white_noise(n, 1e-4, seed);
        const std::int64_t burst_len = static_cast<std::int64_t>(0.15 * rate);
        const std::int64_t gap = count > 0 ? n / count : n;
        for (int k = 0; k < count; ++k)
            overlay(out.samples, voiced_tone(burst_len, rate, f0, 0.4),
                    k * gap + gap / 2 - burst_len / 2);
    } else if (kind == "vowel") {
        const double f0 = arg(1, 120.0), f1 = arg(2, 450.0), f2 = arg(3, 1000.0);
        out.samples = white_noise(n, 1e-4, seed);
        const std::int64_t len = static_cast<std::int64_t>(0.4 * rate);
        overlay(out.samples, vowel(len, rate, f0, f1, f2, arg(4, 0.4)), n / 2 - len / 2);
    } else if (kind == "speech") {
        // alternating voiced speech and noise at the requested occupancy
        const double occ = arg(1, 0.5);
        out.samples = white_noise(n, 1e-4, seed);
        const std::int64_t cycle = static_cast<std::int64_t>(2.0 * rate);
        for (std::int64_t pos = cycle / 4; pos + 1 < n; pos += cycle) {
            const std::int64_t len =
                std::min(static_cast<std::int64_t>(occ * cycle), n - pos);
            overlay(out.samples, voiced_tone(len, rate, 120.0, 0.4), pos);
        }
    } else {
        throw std::runtime_error("unknown synth scenario: " + kind);
    }
    return out;
}

}  // namespace synth
}  // namespace swe
