#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "heritage_twin/analytics/config.hpp"
#include "heritage_twin/analytics/series.hpp"

namespace htwin::analytics {

class UndefinedCorrelation : public DomainError {
public:
    using DomainError::DomainError;
};

// Sample Pearson coefficient, two-pass about the means.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("pearson: inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("pearson: need at least two pairs");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

enum class Strength { VeryWeak, Weak, Moderate, Strong, VeryStrong };

inline std::string_view label(Strength s) {
    switch (s) {
    case Strength::VeryWeak: return "very weak";
    case Strength::Weak: return "weak";
    case Strength::Moderate: return "moderate";
    case Strength::Strong: return "strong";
    case Strength::VeryStrong: return "very strong";
    }
    return "?";
}

// Lower bounds are inclusive: |r| = 0.20 is weak, not very weak.
inline Strength classify_r(double r, const AnalysisConfig& cfg = {}) {
    const double m = std::abs(r);
    if (!(m <= 1.0)) throw DomainError("classify_r: |r| > 1");
    int k = 0;
    for (double b : cfg.r_class_bounds)
        if (m >= b) ++k;
    return static_cast<Strength>(k);
}

struct CcfResult {
    int max_lag = 0;
    std::vector<double> values;  // index lag + max_lag
    double conf_halfwidth = 0.0;
    int argmax_lag = 0;
    std::size_t n = 0;           // overlap length

    double at(int lag) const { return values.at(static_cast<std::size_t>(lag + max_lag)); }
    double max_value() const { return at(argmax_lag); }
};

// Cross-correlation of x and y over hourly lags -L..L. The value at lag k is
// the Pearson correlation of the pairs (x(t), y(t + k)) present in both
// series; a lag whose window is constant on either side scores 0.
inline CcfResult ccf(const HourlySeries& x, const HourlySeries& y, int max_lag, const AnalysisConfig& cfg = {}) {
    if (max_lag < 0) throw DomainError("ccf: negative max lag");
    const std::size_t n = align(x, y).times.size();
    if (n <= static_cast<std::size_t>(max_lag) + 2)
        throw DomainError("ccf: overlap of " + std::to_string(n) + " hours too short for max lag " + std::to_string(max_lag));
    CcfResult r;
    r.max_lag = max_lag;
    r.n = n;
    r.conf_halfwidth = cfg.ccf_conf_z / std::sqrt(static_cast<double>(n));
    r.values.reserve(2 * static_cast<std::size_t>(max_lag) + 1);
    std::vector<double> xs, ys;
    for (int k = -max_lag; k <= max_lag; ++k) {
        xs.clear();
        ys.clear();
        for (const auto& p : x.points()) {
            const auto j = y.find(p.time + k * kHour);
            if (j == HourlySeries::npos) continue;
            xs.push_back(p.value);
            ys.push_back(y.points()[j].value);
        }
        double v = 0.0;
        if (xs.size() >= 2) {
            try {
                v = pearson(xs, ys);
            } catch (const UndefinedCorrelation&) {
                v = 0.0;
            }
        }
        r.values.push_back(v);
    }
    // Largest value; ties go to the smaller |lag|, then the negative lag.
    int best = 0;
    for (int k = -max_lag; k <= max_lag; ++k) {
        const double v = r.at(k), b = r.at(best);
        if (v > b || (v == b && (std::abs(k) < std::abs(best) || (std::abs(k) == std::abs(best) && k < best)))) best = k;
    }
    r.argmax_lag = best;
    return r;
}

inline CcfResult ccf(const HourlySeries& x, const HourlySeries& y, const AnalysisConfig& cfg = {}) {
    return ccf(x, y, cfg.ccf_max_lag_hours, cfg);
}

// Symmetric matrix of pairwise Pearson coefficients over common hours. An
// entry is empty when the pair has fewer than two common hours or either
// side is constant there.
struct CorrelationMatrix {
    std::vector<std::vector<std::optional<double>>> r;

    std::size_t size() const { return r.size(); }
    const std::optional<double>& operator()(std::size_t i, std::size_t j) const { return r[i][j]; }
};

inline CorrelationMatrix correlation_matrix(const std::vector<HourlySeries>& series) {
    const std::size_t n = series.size();
    CorrelationMatrix m;
    m.r.assign(n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const auto a = align(series[i], series[j]);
            std::optional<double> v;
            if (a.times.size() >= 2) {
                try {
                    v = i == j ? (pearson(a.x, a.y), 1.0) : pearson(a.x, a.y);
                } catch (const UndefinedCorrelation&) {
                }
            }
            m.r[i][j] = m.r[j][i] = v;
        }
    return m;
}

} // namespace htwin::analytics
