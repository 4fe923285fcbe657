#pragma once

#include <cstdint>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "heritage_twin/edgesim/fleet.hpp"
#include "heritage_twin/gateway/telemetry.hpp"

namespace htwin::sim {

struct DeviceStats {
    std::string device;
    std::size_t expected = 0;
    std::size_t emitted = 0;
    std::size_t dropped = 0;
};

struct SimulationSummary {
    std::vector<DeviceStats> devices;
    std::size_t messages = 0;
    std::size_t readings = 0;
    std::size_t dropped = 0;
};

// Deterministic telemetry producer for a fleet of sensor boxes.
//
// Each device owns two random streams derived from (seed, device index):
// one for measurement noise, one for message dropout, so changing the
// dropout rate never changes the values that do get through. Messages are
// merged across devices by (send time, device index).
class FleetSimulator {
public:
    FleetSimulator(std::vector<DeviceConfig> fleet, std::uint64_t seed, const graph::Graph* g = nullptr)
        : fleet_(std::move(fleet)), seed_(seed) {
        validate_fleet(fleet_, g);
    }

    const std::vector<DeviceConfig>& fleet() const { return fleet_; }

    template <class Sink>
    SimulationSummary run(Timestamp from, Timestamp to, Sink&& sink) const {
        if (!(from < to)) throw ConfigError("simulation needs from < to");
        struct State {
            std::mt19937_64 noise_rng;
            std::mt19937_64 drop_rng;
            std::normal_distribution<double> normal{0.0, 1.0};
            std::uniform_real_distribution<double> uniform{0.0, 1.0};
            Timestamp next;
        };
        std::vector<State> states;
        SimulationSummary summary;
        using Entry = std::pair<Timestamp, std::size_t>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;

        for (std::size_t i = 0; i < fleet_.size(); ++i) {
            const auto& d = fleet_[i];
            std::seed_seq noise_seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                                    static_cast<std::uint32_t>(i), 1u};
            std::seed_seq drop_seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                                   static_cast<std::uint32_t>(i), 2u};
            State st{std::mt19937_64(noise_seq), std::mt19937_64(drop_seq), {}, {}, from};
            if (d.start && *d.start > from) {
                const auto steps = (*d.start - from + d.cadence - Millis{1}) / d.cadence;
                st.next = from + steps * d.cadence;
            }
            DeviceStats ds{d.device_id.value};
            if (st.next < to) ds.expected = static_cast<std::size_t>((to - st.next + d.cadence - Millis{1}) / d.cadence);
            summary.devices.push_back(ds);
            states.push_back(std::move(st));
            if (states.back().next < to) queue.push({states.back().next, i});
        }

        while (!queue.empty()) {
            const auto [tick, i] = queue.top();
            queue.pop();
            const auto& d = fleet_[i];
            auto& st = states[i];
            TelemetryMessage m;
            m.device_id = d.device_id.value;
            m.sent_at = tick + d.clock_skew;
            m.readings.reserve(d.sensors.size());
            for (const auto& s : d.sensors) {
                const double noise = st.normal(st.noise_rng) * s.model.noise_sd;
                const double v = s.model.finish(s.model.expected(tick) + noise, default_bounds(s.parameter));
                m.readings.push_back(Reading{s.series_id, m.sent_at, v});
            }
            const bool drop = st.uniform(st.drop_rng) < d.dropout;
            if (drop) {
                ++summary.devices[i].dropped;
                ++summary.dropped;
            } else {
                ++summary.devices[i].emitted;
                ++summary.messages;
                summary.readings += m.readings.size();
                sink(m);
            }
            st.next = tick + d.cadence;
            if (st.next < to) queue.push({st.next, i});
        }
        return summary;
    }

private:
    std::vector<DeviceConfig> fleet_;
    std::uint64_t seed_;
};

inline std::vector<TelemetryMessage> simulate(const std::vector<DeviceConfig>& fleet, Timestamp from, Timestamp to,
                                              std::uint64_t seed, SimulationSummary* summary = nullptr) {
    std::vector<TelemetryMessage> out;
    auto s = FleetSimulator(fleet, seed).run(from, to, [&](const TelemetryMessage& m) { out.push_back(m); });
    if (summary) *summary = std::move(s);
    return out;
}

} // namespace htwin::sim
