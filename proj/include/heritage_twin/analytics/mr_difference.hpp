#pragma once

#include <vector>

#include "heritage_twin/analytics/smoothing.hpp"
#include "heritage_twin/core/stats.hpp"

namespace htwin::analytics {

// Hourly MA(indoor MR) - MA(outdoor MR) over the hours where both moving
// averages exist.
inline HourlySeries mr_difference(const HourlySeries& indoor_mr, const HourlySeries& outdoor_mr, const AnalysisConfig& cfg = {}) {
    const auto a = align(moving_average(indoor_mr, cfg), moving_average(outdoor_mr, cfg));
    if (a.times.empty()) throw DomainError("MR difference: indoor and outdoor moving averages share no hours");
    std::vector<HourlyPoint> out(a.times.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {a.times[i], a.x[i] - a.y[i]};
    return HourlySeries(std::move(out), "g/kg");
}

// Box summary of that difference; whiskers stop at 1.5 IQR, outliers are
// left out of the whisker range.
inline BoxplotStats mr_difference_distribution(const HourlySeries& indoor_mr, const HourlySeries& outdoor_mr,
                                               const AnalysisConfig& cfg = {}) {
    return boxplot(mr_difference(indoor_mr, outdoor_mr, cfg).values());
}

} // namespace htwin::analytics
