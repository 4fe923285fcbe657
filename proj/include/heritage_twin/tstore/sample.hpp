#pragma once

#include <tuple>

#include "heritage_twin/core/time.hpp"
#include "heritage_twin/core/uuid.hpp"

namespace htwin {

// One row of the (TIME, UUID, VALUE) table.
struct Sample {
    Uuid series_id;
    Timestamp time;
    double value = 0.0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

// Export/report row order.
inline bool time_then_series(const Sample& a, const Sample& b) {
    return std::tie(a.time, a.series_id) < std::tie(b.time, b.series_id);
}

} // namespace htwin
