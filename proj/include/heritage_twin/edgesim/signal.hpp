#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "heritage_twin/core/parameter.hpp"
#include "heritage_twin/core/time.hpp"

namespace htwin::sim {

// Transient additive offset, e.g. an occupancy event raising CO2.
struct EventOffset {
    Timestamp start;
    Millis duration{};
    double delta = 0.0;
};

// Groundwater level driven by an hourly precipitation record: each hour of
// rain raises the level by gain * mm after `lag`, and the rise decays
// exponentially with time constant `recession`.
struct PrecipitationCoupling {
    std::vector<std::pair<Timestamp, double>> hourly_precipitation;  // (hour, mm/h), ascending
    Millis lag{};
    double gain = 1.0;
    Millis recession = std::chrono::hours{48};

    double response(Timestamp t) const {
        double level = 0.0;
        const double tau = static_cast<double>(recession.count());
        for (const auto& [hour, mm] : hourly_precipitation) {
            const Timestamp arrive = hour + lag;
            if (arrive > t) break;
            level += gain * mm * std::exp(-static_cast<double>((t - arrive).count()) / tau);
        }
        return level;
    }
};

// base + daily cosine + annual cosine + events (+ optional coupling);
// noise is drawn by the simulator, quantization and clipping applied last.
struct SignalModel {
    double base = 0.0;
    double daily_amplitude = 0.0;
    double annual_amplitude = 0.0;
    double noise_sd = 0.0;
    std::vector<EventOffset> events;
    double daily_peak_hour = 15.0;    // UTC hour of the daily maximum
    double annual_peak_day = 200.0;   // day-of-year of the annual maximum
    double resolution = 0.01;         // reading quantum; <= 0 disables quantization
    std::optional<PrecipitationCoupling> coupling;

    // Noise-free ground truth.
    double expected(Timestamp t) const {
        using namespace std::chrono;
        constexpr double two_pi = 2.0 * std::numbers::pi;
        const double ms = static_cast<double>(to_unix_ms(t));
        const double day_ms = static_cast<double>(kDay.count());
        const double hour_of_day = std::fmod(ms, day_ms) / static_cast<double>(kHour.count());
        const double day_of_year = std::fmod(ms / day_ms, 365.2425);
        double v = base;
        v += daily_amplitude * std::cos(two_pi * (hour_of_day - daily_peak_hour) / 24.0);
        v += annual_amplitude * std::cos(two_pi * (day_of_year - annual_peak_day) / 365.2425);
        for (const auto& e : events)
            if (t >= e.start && t < e.start + e.duration) v += e.delta;
        if (coupling) v += coupling->response(t);
        return v;
    }

    double finish(double v, Bounds bounds) const {
        v = std::clamp(v, bounds.lower, bounds.upper);
        if (resolution > 0.0) {
            const double inv = std::round(1.0 / resolution);
            v = std::round(v * inv) / inv;
        }
        return v;
    }
};

inline SignalModel cosine_model(double base, double daily_amplitude, double annual_amplitude, double noise_sd) {
    SignalModel m;
    m.base = base;
    m.daily_amplitude = daily_amplitude;
    m.annual_amplitude = annual_amplitude;
    m.noise_sd = noise_sd;
    return m;
}

} // namespace htwin::sim
