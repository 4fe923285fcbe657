#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "heritage_twin/contextgraph/graph.hpp"
#include "heritage_twin/core/error.hpp"
#include "heritage_twin/core/parameter.hpp"
#include "heritage_twin/edgesim/signal.hpp"

namespace htwin::sim {

struct SensorConfig {
    ParameterKind parameter = ParameterKind::Temperature;
    Uuid series_id;
    SignalModel model;
};

struct DeviceConfig {
    graph::Iri device_id;
    graph::Iri room;
    std::vector<SensorConfig> sensors;
    Millis cadence = std::chrono::seconds{30};
    double dropout = 0.0;
    Millis clock_skew{};
    std::optional<Timestamp> start;  // staggered installation; none = from simulation start
};

inline constexpr Millis kMaxClockSkew = std::chrono::seconds{5};

// Structural checks; with a graph, also that every series resolves and is
// located where the device says it is.
inline void validate_fleet(const std::vector<DeviceConfig>& fleet, const graph::Graph* g = nullptr) {
    std::set<Uuid> seen;
    std::set<std::string> devices;
    for (const auto& d : fleet) {
        const std::string name = d.device_id.value.empty() ? "<unnamed>" : d.device_id.value;
        if (d.device_id.value.empty()) throw ConfigError("device without id");
        if (!devices.insert(d.device_id.value).second) throw ConfigError("duplicate device " + name);
        if (d.cadence <= Millis::zero()) throw ConfigError("cadence must be > 0 for " + name);
        if (!(d.dropout >= 0.0 && d.dropout < 1.0)) throw ConfigError("dropout must be in [0, 1) for " + name);
        if (d.clock_skew > kMaxClockSkew || d.clock_skew < -kMaxClockSkew)
            throw ConfigError("clock skew beyond +-5 s for " + name);
        if (d.sensors.empty()) throw ConfigError("device " + name + " has no sensors");
        for (const auto& s : d.sensors) {
            if (!seen.insert(s.series_id).second) throw ConfigError("series " + s.series_id.str() + " used twice");
            if (s.model.noise_sd < 0.0) throw ConfigError("negative noise_sd on " + s.series_id.str());
            if (g) {
                const auto* meta = g->find_series(s.series_id);
                if (!meta) throw ConfigError("series " + s.series_id.str() + " not in context graph");
                if (meta->parameter != s.parameter)
                    throw ConfigError("series " + s.series_id.str() + " has a different parameter in the graph");
                if (meta->room != d.room)
                    throw ConfigError("series " + s.series_id.str() + " is located elsewhere in the graph");
            }
        }
    }
}

inline std::size_t sensor_count(const std::vector<DeviceConfig>& fleet) {
    std::size_t n = 0;
    for (const auto& d : fleet) n += d.sensors.size();
    return n;
}

} // namespace htwin::sim
