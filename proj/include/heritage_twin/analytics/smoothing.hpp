#pragma once

#include <vector>

#include "heritage_twin/analytics/config.hpp"
#include "heritage_twin/analytics/series.hpp"

namespace htwin::analytics {

namespace detail {

// Dense prefix sums over the hourly grid [first, last] so any window mean
// is O(1). Slot i covers hour first + i.
struct HourGrid {
    Timestamp first;
    std::vector<double> sum;         // sum[i] = values of slots < i
    std::vector<std::size_t> count;  // present slots < i

    explicit HourGrid(const HourlySeries& s) : first(s.front_time()) {
        const auto n = static_cast<std::size_t>((s.back_time() - first) / kHour) + 1;
        sum.assign(n + 1, 0.0);
        count.assign(n + 1, 0);
        std::vector<double> v(n, 0.0);
        std::vector<char> has(n, 0);
        for (const auto& p : s.points()) {
            const auto k = static_cast<std::size_t>((p.time - first) / kHour);
            v[k] = p.value;
            has[k] = 1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            sum[i + 1] = sum[i] + v[i];
            count[i + 1] = count[i] + static_cast<std::size_t>(has[i]);
        }
    }

    std::size_t slot(Timestamp t) const { return static_cast<std::size_t>((t - first) / kHour); }
};

} // namespace detail

// 30-day (by default) centred moving average: the mean of the points in
// [t - w/2, t + w/2]. A value is produced for each input hour whose whole
// window lies inside the series span and is at least half populated.
inline HourlySeries seasonal_cma(const HourlySeries& s, const AnalysisConfig& cfg = {}) {
    const Millis window = cfg.seasonal_window();
    if (s.empty() || s.back_time() - s.front_time() < window)
        throw DomainError("seasonal CMA: series spans less than the " + std::to_string(cfg.seasonal_window_days) + "-day window");
    const Millis half = window / 2;
    const auto half_slots = static_cast<std::size_t>(half / kHour);
    const std::size_t slots = 2 * half_slots + 1;
    const detail::HourGrid g(s);
    std::vector<HourlyPoint> out;
    for (const auto& p : s.points()) {
        if (p.time - half < s.front_time() || p.time + half > s.back_time()) continue;
        const std::size_t c = g.slot(p.time);
        const std::size_t lo = c - half_slots, hi = c + half_slots + 1;
        const std::size_t n = g.count[hi] - g.count[lo];
        if (static_cast<double>(n) < cfg.min_window_coverage * static_cast<double>(slots)) continue;
        out.push_back({p.time, (g.sum[hi] - g.sum[lo]) / static_cast<double>(n)});
    }
    return HourlySeries(std::move(out), s.unit(), s.id());
}

// Trailing moving average over (t - w, t], 7 days by default.
inline HourlySeries moving_average(const HourlySeries& s, const AnalysisConfig& cfg = {}) {
    const Millis window = cfg.ma_window();
    const auto slots = static_cast<std::size_t>(window / kHour);
    if (s.empty() || s.back_time() - s.front_time() + kHour < window)
        throw DomainError("moving average: series spans less than the " + std::to_string(cfg.ma_window_days) + "-day window");
    const detail::HourGrid g(s);
    std::vector<HourlyPoint> out;
    for (const auto& p : s.points()) {
        const std::size_t hi = g.slot(p.time) + 1;
        if (hi < slots) continue;
        const std::size_t lo = hi - slots;
        const std::size_t n = g.count[hi] - g.count[lo];
        if (static_cast<double>(n) < cfg.min_window_coverage * static_cast<double>(slots)) continue;
        out.push_back({p.time, (g.sum[hi] - g.sum[lo]) / static_cast<double>(n)});
    }
    return HourlySeries(std::move(out), s.unit(), s.id());
}

// First difference of consecutive hours, stamped at the later hour.
inline HourlySeries gwl_hourly_change(const HourlySeries& gwl) {
    if (gwl.size() < 2) throw DomainError("GWL change needs at least two hourly points");
    std::vector<HourlyPoint> out;
    const auto& p = gwl.points();
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i].time - p[i - 1].time == kHour) out.push_back({p[i].time, p[i].value - p[i - 1].value});
    return HourlySeries(std::move(out), gwl.unit().empty() ? "mm/h" : gwl.unit() + "/h", gwl.id());
}

} // namespace htwin::analytics
