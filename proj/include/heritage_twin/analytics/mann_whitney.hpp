#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "heritage_twin/analytics/config.hpp"

namespace htwin::analytics {

enum class MwuMethod { Exact, Normal };

inline std::string_view name_of(MwuMethod m) { return m == MwuMethod::Exact ? "exact" : "normal"; }

struct MannWhitneyResult {
    double u_x = 0.0;
    double u_y = 0.0;
    double p = 1.0;  // two-sided
    bool significant = false;
    MwuMethod method = MwuMethod::Normal;
    double mean = 0.0;  // of U under H0
    double sd = 0.0;    // of U under H0, tie-corrected
};

// Largest pooled size for which the exact null distribution is used.
inline constexpr std::size_t kMwuExactLimit = 12;

namespace detail {

// Number of arrangements of m x's and n y's giving each U_x = 0..m*n.
inline std::vector<double> u_counts(std::size_t m, std::size_t n) {
    // f[i][j][u] via rolling over i; f(i, j, u) = f(i-1, j, u-j) + f(i, j-1, u)
    std::vector<std::vector<std::vector<double>>> f(m + 1, std::vector<std::vector<double>>(n + 1));
    for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = 0; j <= n; ++j) {
            auto& cur = f[i][j];
            cur.assign(i * j + 1, 0.0);
            if (i == 0 || j == 0) {
                cur[0] = 1.0;
                continue;
            }
            for (std::size_t u = 0; u <= i * j; ++u) {
                double c = 0.0;
                if (u >= j && u - j < f[i - 1][j].size()) c += f[i - 1][j][u - j];
                if (u < f[i][j - 1].size()) c += f[i][j - 1][u];
                cur[u] = c;
            }
        }
    return f[m][n];
}

} // namespace detail

// Two-sided Mann-Whitney U test. Ties receive midranks. Without ties and
// with a pooled size of at most 12 the p-value comes from the exact null
// distribution; otherwise from the normal approximation with tie and
// continuity corrections.
inline MannWhitneyResult mann_whitney(std::span<const double> x, std::span<const double> y, const AnalysisConfig& cfg = {}) {
    if (x.empty() || y.empty()) throw DomainError("Mann-Whitney: empty group");
    const std::size_t nx = x.size(), ny = y.size(), n = nx + ny;
    for (double v : x)
        if (!std::isfinite(v)) throw DomainError("Mann-Whitney: non-finite value");
    for (double v : y)
        if (!std::isfinite(v)) throw DomainError("Mann-Whitney: non-finite value");

    std::vector<std::pair<double, bool>> pooled;  // (value, from x)
    pooled.reserve(n);
    for (double v : x) pooled.push_back({v, true});
    for (double v : y) pooled.push_back({v, false});
    std::sort(pooled.begin(), pooled.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    double rank_sum_x = 0.0, tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (pooled[k].second) rank_sum_x += midrank;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }

    MannWhitneyResult r;
    const double dnx = static_cast<double>(nx), dny = static_cast<double>(ny), dn = static_cast<double>(n);
    r.u_x = rank_sum_x - dnx * (dnx + 1.0) / 2.0;
    r.u_y = dnx * dny - r.u_x;
    r.mean = dnx * dny / 2.0;
    r.sd = std::sqrt(dnx * dny / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0))));
    if (n == 1) r.sd = 0.0;

    if (tie_term == 0.0 && n <= kMwuExactLimit) {
        r.method = MwuMethod::Exact;
        const auto counts = detail::u_counts(nx, ny);
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        const auto u = static_cast<std::size_t>(std::llround(r.u_x));
        double lower = 0.0, upper = 0.0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (k <= u) lower += counts[k];
            if (k >= u) upper += counts[k];
        }
        r.p = std::min(1.0, 2.0 * std::min(lower, upper) / total);
    } else {
        r.method = MwuMethod::Normal;
        if (r.sd == 0.0) {
            r.p = 1.0;
        } else {
            const double z = std::max(0.0, std::abs(r.u_x - r.mean) - 0.5) / r.sd;
            r.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
        }
    }
    r.significant = r.p < cfg.significance;
    return r;
}

} // namespace htwin::analytics
