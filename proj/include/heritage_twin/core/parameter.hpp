#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "heritage_twin/core/error.hpp"

namespace htwin {

enum class ParameterKind {
    Temperature,
    RelativeHumidity,
    CO2,
    Dust,
    Noise,
    Light,
    GroundwaterLevel,
    DewPoint,
    Precipitation,
    Pressure,
};

inline constexpr std::array kAllParameters = {
    ParameterKind::Temperature, ParameterKind::RelativeHumidity, ParameterKind::CO2,
    ParameterKind::Dust,        ParameterKind::Noise,            ParameterKind::Light,
    ParameterKind::GroundwaterLevel, ParameterKind::DewPoint,    ParameterKind::Precipitation,
    ParameterKind::Pressure,
};

// The six parameters every sensor box measures.
inline constexpr std::array kBoxParameters = {
    ParameterKind::Temperature, ParameterKind::RelativeHumidity, ParameterKind::CO2,
    ParameterKind::Dust,        ParameterKind::Noise,            ParameterKind::Light,
};

inline constexpr std::string_view name_of(ParameterKind p) {
    switch (p) {
    case ParameterKind::Temperature: return "Temperature";
    case ParameterKind::RelativeHumidity: return "RelativeHumidity";
    case ParameterKind::CO2: return "CO2";
    case ParameterKind::Dust: return "Dust";
    case ParameterKind::Noise: return "Noise";
    case ParameterKind::Light: return "Light";
    case ParameterKind::GroundwaterLevel: return "GroundwaterLevel";
    case ParameterKind::DewPoint: return "DewPoint";
    case ParameterKind::Precipitation: return "Precipitation";
    case ParameterKind::Pressure: return "Pressure";
    }
    return "?";
}

inline constexpr std::string_view unit_of(ParameterKind p) {
    switch (p) {
    case ParameterKind::Temperature: return "degC";
    case ParameterKind::RelativeHumidity: return "percent";
    case ParameterKind::CO2: return "ppm";
    case ParameterKind::Dust: return "count";
    case ParameterKind::Noise: return "relative";
    case ParameterKind::Light: return "lux";
    case ParameterKind::GroundwaterLevel: return "mm";
    case ParameterKind::DewPoint: return "degC";
    case ParameterKind::Precipitation: return "mm/h";
    case ParameterKind::Pressure: return "hPa";
    }
    return "?";
}

inline std::optional<ParameterKind> try_parameter_from_name(std::string_view s) {
    for (auto p : kAllParameters)
        if (name_of(p) == s) return p;
    // short aliases used on the command line
    if (s == "T" || s == "temp") return ParameterKind::Temperature;
    if (s == "RH" || s == "rh") return ParameterKind::RelativeHumidity;
    if (s == "GWL" || s == "gwl") return ParameterKind::GroundwaterLevel;
    return std::nullopt;
}

inline ParameterKind parameter_from_name(std::string_view s) {
    if (auto p = try_parameter_from_name(s)) return *p;
    throw ConfigError("unknown parameter '" + std::string(s) + "'");
}

// Physical plausibility range of a parameter.
struct Bounds {
    double lower;
    double upper;

    bool contains(double v) const { return v >= lower && v <= upper; }
};

inline constexpr Bounds default_bounds(ParameterKind p) {
    switch (p) {
    case ParameterKind::Temperature: return {-40.0, 60.0};
    case ParameterKind::RelativeHumidity: return {0.0, 100.0};
    case ParameterKind::CO2: return {300.0, 10000.0};
    case ParameterKind::Dust: return {0.0, 50000.0};
    case ParameterKind::Noise: return {0.0, 1024.0};
    case ParameterKind::Light: return {0.0, 88000.0};
    case ParameterKind::GroundwaterLevel: return {0.0, 2000.0};
    case ParameterKind::DewPoint: return {-60.0, 40.0};
    case ParameterKind::Precipitation: return {0.0, 200.0};
    case ParameterKind::Pressure: return {850.0, 1100.0};
    }
    return {0.0, 0.0};
}

} // namespace htwin
