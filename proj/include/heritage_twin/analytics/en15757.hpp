#pragma once

#include <algorithm>
#include <vector>

#include "heritage_twin/analytics/smoothing.hpp"
#include "heritage_twin/core/stats.hpp"

namespace htwin::analytics {

struct BandPoint {
    Timestamp time;
    double rh;
    double cma;
    double lower;
    double upper;
    bool risky;
};

struct SafeBandResult {
    std::vector<BandPoint> points;   // the CMA domain
    double lower_offset = 0.0;       // applied offsets, after widening
    double upper_offset = 0.0;
    double raw_lower_offset = 0.0;   // percentile offsets before widening
    double raw_upper_offset = 0.0;
    bool lower_widened = false;
    bool upper_widened = false;
    double annual_mean = 0.0;        // mean RH over the whole input
    std::size_t input_points = 0;
    std::size_t risky_count = 0;

    double risky_fraction() const {
        return points.empty() ? 0.0 : static_cast<double>(risky_count) / static_cast<double>(points.size());
    }
    // Share of input hours that received a band.
    double coverage() const {
        return input_points ? static_cast<double>(points.size()) / static_cast<double>(input_points) : 0.0;
    }
};

inline constexpr Millis kEn15757MinSpan = kDay * 60;

// Safe RH band around the seasonal cycle. Fluctuations are Δ = RH - CMA; the
// band is CMA + [p_lo(Δ), p_hi(Δ)], each side pushed out to at least the
// minimum half-width. A point is risky when RH leaves the band.
inline SafeBandResult en15757_band(const HourlySeries& rh, const AnalysisConfig& cfg = {}) {
    if (rh.empty() || rh.back_time() - rh.front_time() < kEn15757MinSpan)
        throw DomainError("EN 15757 band needs at least 60 days of data");
    const auto cma = seasonal_cma(rh, cfg);
    if (cma.empty()) throw DomainError("EN 15757 band: no hour has a populated seasonal window");

    SafeBandResult r;
    r.input_points = rh.size();
    r.annual_mean = mean_of(rh.values());

    const auto a = align(rh, cma);
    std::vector<double> delta(a.times.size());
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = a.x[i] - a.y[i];
    std::vector<double> sorted = delta;
    std::sort(sorted.begin(), sorted.end());
    r.raw_lower_offset = percentile_sorted(sorted, cfg.fluct_percentiles[0]);
    r.raw_upper_offset = percentile_sorted(sorted, cfg.fluct_percentiles[1]);
    r.lower_offset = std::min(r.raw_lower_offset, -cfg.min_band_halfwidth);
    r.upper_offset = std::max(r.raw_upper_offset, cfg.min_band_halfwidth);
    r.lower_widened = r.lower_offset != r.raw_lower_offset;
    r.upper_widened = r.upper_offset != r.raw_upper_offset;

    r.points.reserve(a.times.size());
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const double lo = a.y[i] + r.lower_offset, hi = a.y[i] + r.upper_offset;
        const bool risky = a.x[i] < lo || a.x[i] > hi;
        r.risky_count += risky;
        r.points.push_back({a.times[i], a.x[i], a.y[i], lo, hi, risky});
    }
    return r;
}

} // namespace htwin::analytics
