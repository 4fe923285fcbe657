#pragma once

#include <map>
#include <string>
#include <string_view>

namespace htwin::graph {

inline constexpr std::string_view kBldgNs = "urn:heritage-twin:bldg#";
inline constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";

// Prefix name (without colon) -> expansion.
using Namespaces = std::map<std::string, std::string, std::less<>>;

inline Namespaces default_namespaces() {
    return {{"bldg", std::string(kBldgNs)}, {"rdf", std::string(kRdfNs)}};
}

namespace vocab {

inline std::string bldg(std::string_view local) { return std::string(kBldgNs) + std::string(local); }

inline const std::string kType = std::string(kRdfNs) + "type";
inline const std::string kHasPart = bldg("hasPart");
inline const std::string kHasLocation = bldg("hasLocation");
inline const std::string kHasPoint = bldg("hasPoint");
inline const std::string kMeasures = bldg("measures");
inline const std::string kHasUnit = bldg("hasUnit");
inline const std::string kHasUuid = bldg("hasUUID");
inline const std::string kHasHeight = bldg("hasHeight");
inline const std::string kInstalledOn = bldg("installedOn");

inline const std::string kFloor = bldg("Floor");
inline const std::string kRoom = bldg("Room");
inline const std::string kSensorBox = bldg("SensorBox");
inline const std::string kPoint = bldg("Point");
inline const std::string kBuilding = bldg("Building");
inline const std::string kWeatherStation = bldg("WeatherStation");

} // namespace vocab
} // namespace htwin::graph
