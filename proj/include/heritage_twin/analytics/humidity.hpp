#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "heritage_twin/analytics/config.hpp"
#include "heritage_twin/analytics/series.hpp"

namespace htwin::analytics {

// Mixing ratio in g/kg of dry air from air temperature (degC), relative
// humidity (%) and pressure (hPa), using a Magnus-type saturation pressure.
inline double mixing_ratio(double t, double rh, double p) {
    if (!(t > -45.0 && t < 60.0)) throw DomainError("mixing ratio: temperature " + std::to_string(t) + " outside (-45, 60)");
    if (!(rh >= 0.0 && rh <= 100.0)) throw DomainError("mixing ratio: rh " + std::to_string(rh) + " outside [0, 100]");
    const double e = std::pow(10.0, 7.65 * t / (243.12 + t));
    const double denom = p - 0.06112 * e * rh;
    if (!(denom > 0.0)) throw DomainError("mixing ratio: pressure below vapour pressure");
    return 38.015 * e * rh / denom;
}

// Lowest isopleth for mould on substrate class I: RH above this at a given
// temperature supports growth.
inline double lim_curve(double t) { return std::cosh(0.128324 * (30.0 - t)) + 75.0; }

// MR at each common hour of (temperature, rh), at the configured standard
// pressure.
inline HourlySeries indoor_mr(const HourlySeries& temp, const HourlySeries& rh, const AnalysisConfig& cfg = {}) {
    const auto a = align(temp, rh);
    if (a.times.empty()) throw DomainError("indoor MR: temperature and RH share no hours");
    std::vector<HourlyPoint> out;
    out.reserve(a.times.size());
    for (std::size_t i = 0; i < a.times.size(); ++i)
        out.push_back({a.times[i], mixing_ratio(a.x[i], a.y[i], cfg.standard_pressure)});
    return HourlySeries(std::move(out), "g/kg");
}

// Outdoor MR uses the measured pressure series.
inline HourlySeries outdoor_mr(const HourlySeries& temp, const HourlySeries& rh, const HourlySeries& pressure) {
    const auto a = align(temp, rh);
    std::vector<HourlyPoint> out;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const auto k = pressure.find(a.times[i]);
        if (k == HourlySeries::npos) continue;
        out.push_back({a.times[i], mixing_ratio(a.x[i], a.y[i], pressure.points()[k].value)});
    }
    if (out.empty()) throw DomainError("outdoor MR: temperature, RH and pressure share no hours");
    return HourlySeries(std::move(out), "g/kg");
}

struct MoldPoint {
    Timestamp time;
    double temperature;
    double rh;
    double lim;
};

struct MoldRiskResult {
    std::vector<MoldPoint> flagged;
    std::size_t total = 0;

    double risky_fraction() const { return total ? static_cast<double>(flagged.size()) / static_cast<double>(total) : 0.0; }
};

inline MoldRiskResult mold_risk(const HourlySeries& temp, const HourlySeries& rh) {
    const auto a = align(temp, rh);
    if (a.times.empty()) throw DomainError("mold risk: temperature and RH share no hours");
    MoldRiskResult r;
    r.total = a.times.size();
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const double lim = lim_curve(a.x[i]);
        if (a.y[i] > lim) r.flagged.push_back({a.times[i], a.x[i], a.y[i], lim});
    }
    return r;
}

} // namespace htwin::analytics
