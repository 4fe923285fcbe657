#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "heritage_twin/core/error.hpp"

namespace htwin {

// Percentile of already-sorted data, linear interpolation between closest
// ranks (inclusive definition, rank = q/100 * (n-1)).
inline double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw DomainError("percentile of empty sample");
    if (q < 0.0 || q > 100.0) throw DomainError("percentile outside [0, 100]");
    const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

inline double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    return percentile_sorted(values, q);
}

inline double mean_of(std::span<const double> v) {
    if (v.empty()) throw DomainError("mean of empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

struct BoxplotStats {
    double min_whisker = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max_whisker = 0.0;
    std::size_t n = 0;

    double iqr() const { return q3 - q1; }
};

// Tukey box: whiskers reach the most extreme datum inside
// [q1 - 1.5 IQR, q3 + 1.5 IQR].
inline BoxplotStats boxplot(std::vector<double> values) {
    if (values.empty()) throw DomainError("boxplot of empty sample");
    std::sort(values.begin(), values.end());
    BoxplotStats b;
    b.n = values.size();
    b.q1 = percentile_sorted(values, 25.0);
    b.median = percentile_sorted(values, 50.0);
    b.q3 = percentile_sorted(values, 75.0);
    const double lo_fence = b.q1 - 1.5 * b.iqr();
    const double hi_fence = b.q3 + 1.5 * b.iqr();
    b.min_whisker = *std::lower_bound(values.begin(), values.end(), lo_fence);
    b.max_whisker = *std::prev(std::upper_bound(values.begin(), values.end(), hi_fence));
    // interpolated quartiles can sit outside the nearest data point in tiny samples
    b.min_whisker = std::min(b.min_whisker, b.q1);
    b.max_whisker = std::max(b.max_whisker, b.q3);
    return b;
}

} // namespace htwin
