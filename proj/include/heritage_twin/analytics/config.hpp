#pragma once

#include <array>
#include <string>

#include "json.hpp"

#include "heritage_twin/core/error.hpp"
#include "heritage_twin/core/time.hpp"

namespace htwin::analytics {

struct AnalysisConfig {
    double standard_pressure = 1013.0;  // hPa
    int seasonal_window_days = 30;
    std::array<double, 2> fluct_percentiles = {7.0, 93.0};
    double min_band_halfwidth = 10.0;  // %RH
    double significance = 0.05;
    int ma_window_days = 7;
    double ccf_conf_z = 1.96;
    int ccf_max_lag_hours = 48;
    std::array<double, 4> r_class_bounds = {0.20, 0.40, 0.60, 0.80};
    double min_window_coverage = 0.5;  // fraction of a smoothing window that must be present

    Millis seasonal_window() const { return kDay * seasonal_window_days; }
    Millis ma_window() const { return kDay * ma_window_days; }

    void validate() const {
        if (!(standard_pressure > 0)) throw ConfigError("standard_pressure must be positive");
        if (seasonal_window_days < 2 || seasonal_window_days % 2) throw ConfigError("seasonal_window_days must be even and >= 2");
        const auto [lo, hi] = fluct_percentiles;
        if (!(lo >= 0 && lo < 50 && lo + hi == 100)) throw ConfigError("fluct_percentiles must be symmetric about 50");
        if (!(min_band_halfwidth >= 0)) throw ConfigError("min_band_halfwidth must be >= 0");
        if (!(significance > 0 && significance < 1)) throw ConfigError("significance must lie in (0, 1)");
        if (ma_window_days < 1) throw ConfigError("ma_window_days must be >= 1");
        if (!(ccf_conf_z > 0)) throw ConfigError("ccf_conf_z must be positive");
        if (ccf_max_lag_hours < 0) throw ConfigError("ccf_max_lag_hours must be >= 0");
        double prev = 0.0;
        for (double b : r_class_bounds) {
            if (!(b > prev && b < 1.0)) throw ConfigError("r_class_bounds must increase within (0, 1)");
            prev = b;
        }
        if (!(min_window_coverage > 0 && min_window_coverage <= 1)) throw ConfigError("min_window_coverage must lie in (0, 1]");
    }

    // Missing keys keep their defaults; unknown keys are rejected.
    static AnalysisConfig from_json(const nlohmann::json& j) {
        AnalysisConfig c;
        if (!j.is_object()) throw ConfigError("analysis config must be a JSON object");
        try {
            for (const auto& [key, v] : j.items()) {
                if (key == "standard_pressure") c.standard_pressure = v.get<double>();
                else if (key == "seasonal_window_days") c.seasonal_window_days = v.get<int>();
                else if (key == "fluct_percentiles") c.fluct_percentiles = v.get<std::array<double, 2>>();
                else if (key == "min_band_halfwidth") c.min_band_halfwidth = v.get<double>();
                else if (key == "significance") c.significance = v.get<double>();
                else if (key == "ma_window_days") c.ma_window_days = v.get<int>();
                else if (key == "ccf_conf_z") c.ccf_conf_z = v.get<double>();
                else if (key == "ccf_max_lag_hours") c.ccf_max_lag_hours = v.get<int>();
                else if (key == "r_class_bounds") c.r_class_bounds = v.get<std::array<double, 4>>();
                else if (key == "min_window_coverage") c.min_window_coverage = v.get<double>();
                else throw ConfigError("unknown analysis key '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("analysis config: ") + e.what());
        }
        c.validate();
        return c;
    }
};

} // namespace htwin::analytics
