#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace swe {

// Arithmetic mean and population standard deviation.
inline std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) throw std::runtime_error("mean_std: empty sequence");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    return {mean, std::sqrt(var)};
}

// Linearly interpolated percentile, q in [0, 100].
inline double percentile(std::vector<double> v, double q) {
    if (v.empty()) throw std::runtime_error("percentile: empty sequence");
    std::sort(v.begin(), v.end());
    const double pos = (q / 100.0) * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

// Millisecond duration to sample count at the given rate, rounded to nearest.
inline std::int64_t ms_to_samples(double ms, int rate) {
    return static_cast<std::int64_t>(std::llround(ms * rate / 1000.0));
}

}  // namespace swe
