#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "heritage_twin/edgesim/case_study.hpp"

namespace htwin::sim {

// Fleet config file (JSON). Either a full device list:
//
//   {"devices": [{"id": "Box103", "room": "Room103", "cadence_s": 30,
//                 "dropout": 0.0, "clock_skew_ms": 0, "start": "2023-01-13T00:00:00Z",
//                 "sensors": [{"parameter": "Temperature", "uuid": "...",
//                              "base": 17, "daily_amplitude": 0.6, "annual_amplitude": 3,
//                              "noise_sd": 0.05, "daily_peak_hour": 15, "annual_peak_day": 200,
//                              "resolution": 0.01,
//                              "events": [{"start": "...Z", "duration_s": 3600, "delta": 800}]}]}]}
//
// or {"base": "case-study"} to take the built-in fleet; top-level "dropout",
// "cadence_s" and "clock_skew_ms" then override every device.
inline std::vector<DeviceConfig> fleet_from_json(const nlohmann::json& j, const graph::Graph& g) {
    std::vector<DeviceConfig> fleet;
    try {
        if (j.contains("base")) {
            if (j.at("base") != "case-study") throw ConfigError("unknown fleet base " + j.at("base").dump());
            fleet = case_study_fleet();
        }
        if (j.contains("devices")) {
            for (const auto& jd : j.at("devices")) {
                DeviceConfig d;
                d.device_id = g.expand(jd.at("id").get<std::string>());
                d.room = g.expand(jd.at("room").get<std::string>());
                d.cadence = Millis{static_cast<long>(jd.value("cadence_s", 30.0) * 1000)};
                d.dropout = jd.value("dropout", 0.0);
                d.clock_skew = Millis{jd.value("clock_skew_ms", 0L)};
                if (jd.contains("start")) d.start = parse_iso(jd.at("start").get<std::string>());
                for (const auto& js : jd.at("sensors")) {
                    SensorConfig s;
                    s.parameter = parameter_from_name(js.at("parameter").get<std::string>());
                    s.series_id = Uuid::parse(js.at("uuid").get<std::string>());
                    auto& m = s.model;
                    m.base = js.value("base", 0.0);
                    m.daily_amplitude = js.value("daily_amplitude", 0.0);
                    m.annual_amplitude = js.value("annual_amplitude", 0.0);
                    m.noise_sd = js.value("noise_sd", 0.0);
                    m.daily_peak_hour = js.value("daily_peak_hour", 15.0);
                    m.annual_peak_day = js.value("annual_peak_day", 200.0);
                    m.resolution = js.value("resolution", 0.01);
                    for (const auto& je : js.value("events", nlohmann::json::array()))
                        m.events.push_back({parse_iso(je.at("start").get<std::string>()),
                                            Millis{static_cast<long>(je.at("duration_s").get<double>() * 1000)},
                                            je.at("delta").get<double>()});
                    d.sensors.push_back(std::move(s));
                }
                fleet.push_back(std::move(d));
            }
        }
        for (auto& d : fleet) {
            if (j.contains("dropout")) d.dropout = j.at("dropout").get<double>();
            if (j.contains("cadence_s")) d.cadence = Millis{static_cast<long>(j.at("cadence_s").get<double>() * 1000)};
            if (j.contains("clock_skew_ms")) d.clock_skew = Millis{j.at("clock_skew_ms").get<long>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("fleet config: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(std::string("fleet config: ") + e.what());
    }
    if (fleet.empty()) throw ConfigError("fleet config defines no devices");
    validate_fleet(fleet, &g);
    return fleet;
}

inline std::vector<DeviceConfig> load_fleet_file(const std::string& path, const graph::Graph& g) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fleet config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("fleet config '" + path + "': " + e.what());
    }
    return fleet_from_json(j, g);
}

} // namespace htwin::sim
