#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "heritage_twin/contextgraph/topology.hpp"
#include "heritage_twin/edgesim/fleet.hpp"

namespace htwin::sim {

// Sensor box placements of the monitored castle: floor, room, height of the
// box above the floor (m) and installation date.
struct Placement {
    std::string_view floor;
    std::string_view room;
    double height;
    std::string_view installed;
};

inline constexpr std::array<Placement, 13> kPlacements = {{
    {"AT", "Attic", 2.9, "2023-04-20"},
    {"2F", "Room205", 0.9, "2023-01-13"},
    {"2F", "Room210", 1.0, "2023-02-14"},
    {"2F", "Room222", 0.8, "2023-02-14"},
    {"1F", "Room103", 2.0, "2023-01-13"},
    {"1F", "Room113", 0.4, "2023-04-20"},
    {"1F", "Room117", 0.8, "2023-01-13"},
    {"GF", "Room3", 0.9, "2023-01-13"},
    {"GF", "Room5", 0.0, "2022-06-29"},
    {"GF", "Room17", 2.4, "2023-02-14"},
    {"BF", "Room05_01", 2.1, "2023-02-14"},
    {"BF", "Room05_02", 0.0, "2023-06-28"},
    {"BF", "Room014", 0.0, "2023-01-13"},
}};

inline constexpr std::array<std::string_view, 5> kFloors = {"BF", "GF", "1F", "2F", "AT"};
inline constexpr std::string_view kGwlInstalled = "2023-06-28";
inline constexpr std::string_view kOutdoorRoom = "Outdoor";
inline constexpr std::string_view kExteriorFloor = "Exterior";
inline constexpr std::string_view kWeatherStation = "Station1";

// Outdoor series fed by the weather source.
inline constexpr std::array<ParameterKind, 5> kWeatherParameters = {
    ParameterKind::Temperature, ParameterKind::RelativeHumidity, ParameterKind::DewPoint,
    ParameterKind::Precipitation, ParameterKind::Pressure,
};

inline graph::Iri bldg(std::string_view local) { return graph::Iri{graph::vocab::bldg(local)}; }

inline std::string device_name(std::string_view room) {
    return room.rfind("Room", 0) == 0 ? "Box" + std::string(room.substr(4)) : "Box" + std::string(room);
}

inline bool is_basement(std::string_view floor) { return floor == "BF"; }

inline std::string point_name(std::string_view room, ParameterKind p, int channel = 0) {
    std::string s = std::string(room) + "_" + std::string(name_of(p));
    if (channel) s += "_Ch" + std::to_string(channel);
    return s;
}

inline Uuid series_uuid(std::string_view room, ParameterKind p, int channel = 0) {
    std::string key = std::string(room) + "/" + std::string(name_of(p));
    if (channel) key += "/Ch" + std::to_string(channel);
    return Uuid::from_name(key);
}

inline int floor_level(std::string_view floor) {
    for (std::size_t i = 0; i < kFloors.size(); ++i)
        if (kFloors[i] == floor) return static_cast<int>(i);
    return 0;
}

// Default per-floor climate: humid basement, drier upper floors.
inline SignalModel default_model(std::string_view floor, ParameterKind p) {
    const int lvl = floor_level(floor);
    SignalModel m;
    switch (p) {
    case ParameterKind::Temperature: {
        constexpr double base[] = {10, 14, 17, 15, 13}, daily[] = {0.3, 0.8, 0.6, 1.5, 2.0},
                         annual[] = {3, 6, 3, 8, 10};
        m = cosine_model(base[lvl], daily[lvl], annual[lvl], 0.05);
        break;
    }
    case ParameterKind::RelativeHumidity: {
        constexpr double base[] = {96, 78, 55, 62, 65}, daily[] = {0.5, 1.5, 2, 3, 4}, annual[] = {1.5, 6, 5, 8, 8};
        m = cosine_model(base[lvl], daily[lvl], annual[lvl], 0.3);
        m.annual_peak_day = 230;
        break;
    }
    case ParameterKind::CO2: m = cosine_model(420, 15, 0, 8); m.resolution = 1; break;
    case ParameterKind::Dust: m = cosine_model(400, 50, 0, 60); m.resolution = 1; break;
    case ParameterKind::Noise: m = cosine_model(60, 10, 0, 4); m.resolution = 1; break;
    case ParameterKind::Light: m = cosine_model(15, 25, 0, 1); m.daily_peak_hour = 12; break;
    case ParameterKind::GroundwaterLevel: m = cosine_model(600, 0, 20, 0.2); break;
    default: m = cosine_model(0, 0, 0, 0);
    }
    return m;
}

// The 13 sensor boxes: six box parameters each, plus GWL channels 1 and 2
// on every basement box (84 sensors in total).
inline std::vector<DeviceConfig> case_study_fleet() {
    std::vector<DeviceConfig> fleet;
    for (const auto& pl : kPlacements) {
        DeviceConfig d;
        d.device_id = bldg(device_name(pl.room));
        d.room = bldg(pl.room);
        for (auto p : kBoxParameters) d.sensors.push_back({p, series_uuid(pl.room, p), default_model(pl.floor, p)});
        if (is_basement(pl.floor))
            for (int ch = 1; ch <= 2; ++ch)
                d.sensors.push_back({ParameterKind::GroundwaterLevel,
                                     series_uuid(pl.room, ParameterKind::GroundwaterLevel, ch),
                                     default_model(pl.floor, ParameterKind::GroundwaterLevel)});
        fleet.push_back(std::move(d));
    }
    return fleet;
}

inline graph::Graph case_study_topology() {
    using namespace graph;
    GraphBuilder gb;
    const Iri type{vocab::kType};
    auto rel = [](const std::string& p) { return Iri{p}; };
    const auto building = bldg("MainBuilding");
    gb.insert({building, type, Iri{vocab::kBuilding}});

    auto add_point = [&](const Iri& device, std::string_view room, ParameterKind p, int ch) {
        const auto pt = bldg(point_name(room, p, ch));
        gb.insert({device, rel(vocab::kHasPoint), pt});
        gb.insert({pt, type, Iri{vocab::kPoint}});
        gb.insert({pt, rel(vocab::kMeasures), bldg(name_of(p))});
        gb.insert({pt, rel(vocab::kHasUnit), StringLiteral{std::string(unit_of(p))}});
        gb.insert({pt, rel(vocab::kHasUuid), UuidLiteral{series_uuid(room, p, ch)}});
    };

    for (auto f : kFloors) {
        gb.insert({building, rel(vocab::kHasPart), bldg(f)});
        gb.insert({bldg(f), type, Iri{vocab::kFloor}});
    }
    for (const auto& pl : kPlacements) {
        const auto room = bldg(pl.room), device = bldg(device_name(pl.room));
        gb.insert({bldg(pl.floor), rel(vocab::kHasPart), room});
        gb.insert({room, type, Iri{vocab::kRoom}});
        gb.insert({device, type, Iri{vocab::kSensorBox}});
        gb.insert({device, rel(vocab::kHasLocation), room});
        gb.insert({device, rel(vocab::kHasHeight), NumberLiteral{pl.height}});
        gb.insert({device, rel(vocab::kInstalledOn), StringLiteral{std::string(pl.installed)}});
        for (auto p : kBoxParameters) add_point(device, pl.room, p, 0);
        if (is_basement(pl.floor))
            for (int ch = 1; ch <= 2; ++ch) add_point(device, pl.room, ParameterKind::GroundwaterLevel, ch);
    }

    const auto exterior = bldg(kExteriorFloor), outdoor = bldg(kOutdoorRoom), station = bldg(kWeatherStation);
    gb.insert({exterior, type, Iri{vocab::kFloor}});
    gb.insert({exterior, rel(vocab::kHasPart), outdoor});
    gb.insert({outdoor, type, Iri{vocab::kRoom}});
    gb.insert({station, type, Iri{vocab::kWeatherStation}});
    gb.insert({station, rel(vocab::kHasLocation), outdoor});
    for (auto p : kWeatherParameters) add_point(station, kOutdoorRoom, p, 0);
    return gb.build();
}

inline std::string case_study_topology_document() {
    return "# Sensor topology of the monitored castle (13 boxes, 84 sensors, outdoor weather station)\n" +
           graph::serialize_topology(case_study_topology());
}

} // namespace htwin::sim
