#pragma once

#include <chrono>
#include <map>
#include <span>
#include <vector>

#include "heritage_twin/core/parameter.hpp"
#include "heritage_twin/tstore/sample.hpp"

namespace htwin {

// Plausibility bounds per parameter plus the interpolation caps for the
// two resolutions the store serves.
struct CleaningBounds {
    std::map<ParameterKind, Bounds> bounds;
    Millis raw_cadence = std::chrono::seconds{30};
    Millis raw_max_gap = std::chrono::minutes{10};
    Millis hourly_max_gap = std::chrono::hours{2};

    static CleaningBounds defaults() {
        CleaningBounds c;
        for (auto p : kAllParameters) c.bounds[p] = default_bounds(p);
        return c;
    }

    const Bounds& for_parameter(ParameterKind p) const {
        auto it = bounds.find(p);
        if (it == bounds.end()) throw ConfigError("no cleaning bounds for " + std::string(name_of(p)));
        return it->second;
    }

    void validate() const {
        for (const auto& [p, b] : bounds)
            if (!(b.lower < b.upper))
                throw ConfigError("cleaning bounds for " + std::string(name_of(p)) + " need lower < upper");
        if (raw_cadence <= Millis::zero() || raw_max_gap < Millis::zero() || hourly_max_gap < Millis::zero())
            throw ConfigError("cleaning cadence must be positive and gaps non-negative");
    }
};

// Drops samples outside `bounds`, then fills interior gaps no longer than
// `max_gap` by linear interpolation at `cadence`. Input must be one series
// sorted by time. Leading/trailing gaps are never extrapolated.
inline std::vector<Sample> clean(std::span<const Sample> samples, Bounds bounds, Millis cadence, Millis max_gap) {
    std::vector<Sample> kept;
    kept.reserve(samples.size());
    for (const auto& s : samples)
        if (bounds.contains(s.value)) kept.push_back(s);

    std::vector<Sample> out;
    out.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i > 0) {
            const Sample& a = kept[i - 1];
            const Sample& b = kept[i];
            const Millis gap = b.time - a.time;
            if (gap > cadence && gap <= max_gap) {
                const double span = static_cast<double>(gap.count());
                for (Timestamp t = a.time + cadence; b.time - t >= cadence / 2; t += cadence) {
                    const double frac = static_cast<double>((t - a.time).count()) / span;
                    out.push_back(Sample{a.series_id, t, a.value + (b.value - a.value) * frac});
                }
            }
        }
        out.push_back(kept[i]);
    }
    return out;
}

} // namespace htwin
