#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "heritage_twin/analytics.hpp"

using namespace htwin;
using namespace htwin::analytics;
using namespace std::chrono_literals;

namespace {

const Timestamp kStart = make_time(2023, 1, 1);

HourlySeries constant(double v, std::size_t hours, Timestamp start = kStart) {
    return HourlySeries::from_values(start, std::vector<double>(hours, v));
}

// Reference values evaluated with 40-digit arithmetic (mpmath) directly from
// the mixing-ratio and isopleth formulas, then frozen here.
constexpr double kMr_0_100_1013 = 3.775494394609926824;
constexpr double kMr_20_50_1013 = 7.241465268838114064;
constexpr double kMr_10_80_990 = 6.222447350151880355;
constexpr double kLim20 = 76.94272482705730089;
constexpr double kLim0 = 98.50059635571471043;
constexpr double kLim10 = 81.54835950732963934;

} // namespace

// ---- humidity ---------------------------------------------------------------

TEST(MixingRatio, MatchesHighPrecisionOracle) {
    EXPECT_NEAR(mixing_ratio(0, 100, 1013), kMr_0_100_1013, 1e-12);
    EXPECT_NEAR(mixing_ratio(20, 50, 1013), kMr_20_50_1013, 1e-12);
    EXPECT_NEAR(mixing_ratio(10, 80, 990), kMr_10_80_990, 1e-12);
    EXPECT_NEAR(mixing_ratio(0, 100, 1013), 3.7755, 0.001);
    EXPECT_NEAR(mixing_ratio(20, 50, 1013), 7.242, 0.001);
}

TEST(MixingRatio, ZeroHumidityIsExactlyZero) {
    for (double t : {-44.0, -10.0, 0.0, 21.5, 59.0}) EXPECT_EQ(mixing_ratio(t, 0, 1013), 0.0);
}

TEST(MixingRatio, DomainErrors) {
    EXPECT_THROW(mixing_ratio(20, 100, 1), DomainError);    // denominator negative
    EXPECT_THROW(mixing_ratio(-45, 50, 1013), DomainError);
    EXPECT_THROW(mixing_ratio(60, 50, 1013), DomainError);
    EXPECT_THROW(mixing_ratio(20, 100.5, 1013), DomainError);
    EXPECT_THROW(mixing_ratio(20, -1, 1013), DomainError);
    EXPECT_THROW(mixing_ratio(20, std::nan(""), 1013), DomainError);
}

TEST(MixingRatio, MonotoneInHumidityAndTemperature) {
    for (double t = -20; t <= 40; t += 0.5)
        for (double rh = 5; rh <= 100; rh += 1) {
            const double m = mixing_ratio(t, rh, 1013);
            if (rh + 1 <= 100) {
                ASSERT_LT(m, mixing_ratio(t, rh + 1, 1013)) << t << " " << rh;
            }
            if (t + 0.5 <= 40) {
                ASSERT_LT(m, mixing_ratio(t + 0.5, rh, 1013)) << t << " " << rh;
            }
        }
}

TEST(LimCurve, OracleValues) {
    EXPECT_EQ(lim_curve(30), 76.0);
    EXPECT_NEAR(lim_curve(20), kLim20, 1e-12);
    EXPECT_NEAR(lim_curve(0), kLim0, 1e-12);
    EXPECT_NEAR(lim_curve(10), kLim10, 1e-12);
}

TEST(LimCurve, StrictlyDecreasingAndBoundedBelow) {
    for (int i = -100; i < 300; ++i) {
        const double t = i / 10.0, t2 = (i + 1) / 10.0;
        ASSERT_GT(lim_curve(t), lim_curve(t2)) << t;
        ASSERT_GT(lim_curve(t), 76.0);
    }
    for (double t : {30.5, 35.0, 45.0}) EXPECT_GT(lim_curve(t), 76.0);
}

TEST(IndoorMr, ConstantDay) {
    const auto mr = indoor_mr(constant(0, 24), constant(100, 24));
    ASSERT_EQ(mr.size(), 24u);
    for (const auto& p : mr.points()) EXPECT_NEAR(p.value, kMr_0_100_1013, 1e-12);
    EXPECT_EQ(mr.unit(), "g/kg");
}

TEST(IndoorMr, IntersectionOnly) {
    const auto t = constant(20, 48);
    const auto rh = constant(50, 48, kStart + 24h);
    EXPECT_EQ(indoor_mr(t, rh).size(), 24u);
    EXPECT_THROW(indoor_mr(constant(20, 24), constant(50, 24, kStart + 24h)), DomainError);
    AnalysisConfig cfg;
    cfg.standard_pressure = 990;
    EXPECT_NEAR(indoor_mr(constant(10, 3), constant(80, 3), cfg).points()[0].value, kMr_10_80_990, 1e-12);
}

TEST(OutdoorMr, PointwiseOracle) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> T(-15, 30), RH(20, 100), P(960, 1040);
    std::vector<HourlyPoint> t, rh, p;
    for (int i = 0; i < 200; ++i) {
        const auto h = kStart + i * kHour;
        if (i % 7 != 3) t.push_back({h, T(rng)});
        if (i % 11 != 5) rh.push_back({h, RH(rng)});
        if (i % 13 != 1) p.push_back({h, P(rng)});
    }
    const HourlySeries ts(t), rs(rh), ps(p);
    const auto mr = outdoor_mr(ts, rs, ps);
    std::size_t expected = 0;
    for (int i = 0; i < 200; ++i) expected += (i % 7 != 3) && (i % 11 != 5) && (i % 13 != 1);
    ASSERT_EQ(mr.size(), expected);
    for (const auto& pt : mr.points()) {
        const double tv = ts.points()[ts.find(pt.time)].value, rv = rs.points()[rs.find(pt.time)].value,
                     pv = ps.points()[ps.find(pt.time)].value;
        EXPECT_EQ(pt.value, mixing_ratio(tv, rv, pv));
    }
}

TEST(MoldRisk, Examples) {
    EXPECT_EQ(mold_risk(constant(10, 48), constant(100, 48)).risky_fraction(), 1.0);
    EXPECT_EQ(mold_risk(constant(-5, 48), constant(40, 48)).risky_fraction(), 0.0);
    EXPECT_EQ(mold_risk(constant(35, 48), constant(40, 48)).risky_fraction(), 0.0);
    const double t = 12.25;
    const auto r = mold_risk(constant(t, 1), constant(lim_curve(t), 1));
    EXPECT_EQ(r.total, 1u);
    EXPECT_TRUE(r.flagged.empty());
    EXPECT_THROW(mold_risk(constant(10, 2), constant(90, 2, kStart + 5h)), DomainError);
}

TEST(MoldRisk, FlagsExactlyPointsAboveCurve) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> T(0, 30), RH(60, 100);
    std::vector<double> tv(500), rv(500);
    for (int i = 0; i < 500; ++i) {
        tv[static_cast<std::size_t>(i)] = T(rng);
        rv[static_cast<std::size_t>(i)] = RH(rng);
    }
    const auto r = mold_risk(HourlySeries::from_values(kStart, tv), HourlySeries::from_values(kStart, rv));
    std::size_t expected = 0;
    for (std::size_t i = 0; i < 500; ++i) expected += rv[i] > lim_curve(tv[i]);
    EXPECT_EQ(r.flagged.size(), expected);
    for (const auto& f : r.flagged) EXPECT_GT(f.rh, f.lim);
    EXPECT_GT(expected, 50u);
    EXPECT_LT(expected, 450u);
}

// ---- smoothing --------------------------------------------------------------

TEST(SeasonalCma, ConstantAndDomain) {
    const auto cma = seasonal_cma(constant(55, 60 * 24 + 1));
    ASSERT_EQ(cma.size(), 30u * 24 + 1);  // hours 15 d .. 45 d
    EXPECT_EQ(cma.front_time(), kStart + 15 * kDay);
    EXPECT_EQ(cma.back_time(), kStart + 45 * kDay);
    for (const auto& p : cma.points()) EXPECT_NEAR(p.value, 55.0, 1e-12);
    EXPECT_THROW(seasonal_cma(constant(55, 30 * 24)), DomainError);
    EXPECT_EQ(seasonal_cma(constant(55, 30 * 24 + 1)).size(), 1u);
}

TEST(SeasonalCma, RampIsReproducedAtCentres) {
    std::vector<double> v(90 * 24);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 40.0 + 0.01 * static_cast<double>(i);
    const auto s = HourlySeries::from_values(kStart, v);
    const auto cma = seasonal_cma(s);
    for (const auto& p : cma.points()) EXPECT_NEAR(p.value, s.points()[s.find(p.time)].value, 1e-9);
}

// A boxcar of N = 721 hourly samples scales a cosine of period P hours by
// the Dirichlet kernel sin(pi N / P) / (N sin(pi / P)).
TEST(SeasonalCma, AnnualSinusoidAttenuation) {
    const double period = 365.0 * 24.0, amp = 12.0;
    std::vector<double> v(2 * 365 * 24);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 60.0 + amp * std::cos(2 * std::numbers::pi * static_cast<double>(i) / period);
    const auto s = HourlySeries::from_values(kStart, v);
    const auto cma = seasonal_cma(s);
    const long double pi = std::numbers::pi_v<long double>;
    const long double att = std::sin(pi * 721.0L / static_cast<long double>(period)) /
                            (721.0L * std::sin(pi / static_cast<long double>(period)));
    EXPECT_NEAR(static_cast<double>(att), 0.988893990624776506, 1e-15);
    for (const auto& p : cma.points()) {
        const double i = static_cast<double>((p.time - kStart) / kHour);
        ASSERT_NEAR(p.value, 60.0 + amp * static_cast<double>(att) * std::cos(2 * std::numbers::pi * i / period), 1e-8);
    }
}

TEST(SeasonalCma, GapsUseAvailablePointsAndCoverageRule) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(30, 90);
    std::vector<HourlyPoint> pts;
    for (int i = 0; i < 70 * 24; ++i) {
        const bool hole = (i >= 20 * 24 && i < 38 * 24);  // an 18-day outage
        if (!hole && rng() % 5) pts.push_back({kStart + i * kHour, U(rng)});
    }
    const HourlySeries s(pts);
    const auto cma = seasonal_cma(s);
    std::size_t checked = 0;
    for (const auto& p : s.points()) {
        if (p.time - 15 * kDay < s.front_time() || p.time + 15 * kDay > s.back_time()) continue;
        double sum = 0;
        std::size_t n = 0;
        for (const auto& q : s.points())
            if (q.time >= p.time - 15 * kDay && q.time <= p.time + 15 * kDay) {
                sum += q.value;
                ++n;
            }
        const auto k = cma.find(p.time);
        if (2 * n < 721) {
            EXPECT_EQ(k, HourlySeries::npos);
        } else {
            ASSERT_NE(k, HourlySeries::npos);
            EXPECT_NEAR(cma.points()[k].value, sum / static_cast<double>(n), 1e-9);
            ++checked;
        }
    }
    EXPECT_GT(checked, 100u);
    EXPECT_LT(cma.size(), s.size());
}

TEST(MovingAverage, ConstantAndStep) {
    const auto c = moving_average(constant(3.5, 10 * 24));
    EXPECT_EQ(c.size(), 10u * 24 - 167);
    for (const auto& p : c.points()) EXPECT_NEAR(p.value, 3.5, 1e-12);

    std::vector<double> step(21 * 24, 0.0);
    for (std::size_t i = 7 * 24; i < step.size(); ++i) step[i] = 1.0;
    const auto s = HourlySeries::from_values(kStart, step);
    const auto ma = moving_average(s);
    for (const auto& p : ma.points()) {
        const auto i = (p.time - kStart) / kHour;
        const double expected = std::clamp(static_cast<double>(i - 7 * 24 + 1) / 168.0, 0.0, 1.0);
        EXPECT_NEAR(p.value, expected, 1e-12) << i;
    }
    EXPECT_THROW(moving_average(constant(1, 167)), DomainError);
}

TEST(MovingAverage, MatchesNaiveWindowSum) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(10, 4);
    std::vector<HourlyPoint> pts;
    for (int i = 0; i < 60 * 24; ++i)
        if (rng() % 10) pts.push_back({kStart + i * kHour, N(rng)});
    const HourlySeries s(pts);
    const auto ma = moving_average(s);
    std::size_t matched = 0;
    for (const auto& p : s.points()) {
        if (p.time - 7 * kDay + kHour < s.front_time()) continue;
        double sum = 0;
        std::size_t n = 0;
        for (const auto& q : s.points())
            if (q.time > p.time - 7 * kDay && q.time <= p.time) {
                sum += q.value;
                ++n;
            }
        const auto k = ma.find(p.time);
        ASSERT_NE(k, HourlySeries::npos);
        EXPECT_NEAR(ma.points()[k].value, sum / static_cast<double>(n), 1e-9);
        ++matched;
    }
    EXPECT_EQ(matched, ma.size());
}

TEST(GwlChange, Examples) {
    const auto flat = gwl_hourly_change(constant(612, 48));
    for (const auto& p : flat.points()) EXPECT_EQ(p.value, 0.0);
    std::vector<double> ramp(48);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 600 + 5.0 * static_cast<double>(i);
    const auto d = gwl_hourly_change(HourlySeries::from_values(kStart, ramp));
    EXPECT_EQ(d.size(), 47u);
    for (const auto& p : d.points()) EXPECT_DOUBLE_EQ(p.value, 5.0);
    EXPECT_EQ(d.front_time(), kStart + 1h);

    std::vector<double> jump(48, 600.0);
    for (std::size_t i = 30; i < jump.size(); ++i) jump[i] = 620.0;
    const auto j = gwl_hourly_change(HourlySeries::from_values(kStart, jump));
    std::size_t spikes = 0;
    for (const auto& p : j.points())
        if (p.value != 0.0) {
            ++spikes;
            EXPECT_EQ(p.value, 20.0);
            EXPECT_EQ(p.time, kStart + 30h);
        }
    EXPECT_EQ(spikes, 1u);
    EXPECT_THROW(gwl_hourly_change(constant(1, 1)), DomainError);
}

TEST(GwlChange, GapsProduceNoPoint) {
    const HourlySeries s({{kStart, 1}, {kStart + 1h, 2}, {kStart + 3h, 10}, {kStart + 4h, 12}});
    const auto d = gwl_hourly_change(s);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.points()[0], (HourlyPoint{kStart + 1h, 1}));
    EXPECT_EQ(d.points()[1], (HourlyPoint{kStart + 4h, 2}));
}

// ---- EN 15757 -----------------------------------------------------------------

namespace {

// Annual sine plus noise drawn by `noise`.
template <class Noise>
HourlySeries seasonal_rh(Noise noise, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(365 * 24);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 55 + 15 * std::sin(2 * std::numbers::pi * static_cast<double>(i) / (365.0 * 24)) + noise(rng);
    return HourlySeries::from_values(kStart, v, "%");
}

HourlySeries seasonal_rh(double noise_lo, double noise_hi, std::uint64_t seed) {
    std::uniform_real_distribution<double> U(noise_lo, noise_hi);
    return seasonal_rh([&](std::mt19937_64& rng) { return U(rng); }, seed);
}

void expect_band_consistent(const SafeBandResult& r) {
    std::size_t risky = 0;
    for (const auto& p : r.points) {
        ASSERT_LE(p.lower, p.cma);
        ASSERT_LE(p.cma, p.upper);
        ASSERT_EQ(p.risky, p.rh < p.lower || p.rh > p.upper);
        risky += p.risky;
    }
    EXPECT_EQ(risky, r.risky_count);
}

} // namespace

TEST(En15757, ConstantSeriesHasNoRiskyPoints) {
    const auto r = en15757_band(constant(50, 365 * 24));
    EXPECT_EQ(r.risky_count, 0u);
    EXPECT_EQ(r.lower_offset, -10.0);
    EXPECT_EQ(r.upper_offset, 10.0);
    EXPECT_TRUE(r.lower_widened && r.upper_widened);
    EXPECT_NEAR(r.annual_mean, 50.0, 1e-12);
    expect_band_consistent(r);
}

TEST(En15757, WideNoiseFlagsFourteenPercent) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto r = en15757_band(seasonal_rh(-30, 30, seed));
        EXPECT_FALSE(r.lower_widened);
        EXPECT_FALSE(r.upper_widened);
        EXPECT_NEAR(r.risky_fraction(), 0.14, 0.01);
        // percentile interpolation granularity: within two points of 14 %
        EXPECT_NEAR(static_cast<double>(r.risky_count), 0.14 * static_cast<double>(r.points.size()), 2.0);
        expect_band_consistent(r);
        EXPECT_NEAR(r.coverage(), static_cast<double>(r.points.size()) / (365.0 * 24), 1e-15);
    }
}

TEST(En15757, WideningIsPerSide) {
    // Mostly small fluctuations with a 20 % tail of large upward excursions:
    // the 7th percentile sits inside -10, the 93rd far above +10.
    std::uniform_real_distribution<double> U(-3, 3);
    const auto r = en15757_band(seasonal_rh([&](std::mt19937_64& rng) { return U(rng) + (rng() % 5 == 0 ? 30.0 : 0.0); }, 8));
    EXPECT_TRUE(r.lower_widened);
    EXPECT_FALSE(r.upper_widened);
    EXPECT_EQ(r.lower_offset, -10.0);
    EXPECT_GT(r.upper_offset, 10.0);
    EXPECT_NEAR(r.risky_fraction(), 0.07, 0.01);
    for (const auto& p : r.points)
        if (p.risky) {
            EXPECT_GT(p.rh, p.upper);
        }
    expect_band_consistent(r);
}

TEST(En15757, NeedsSixtyDays) {
    EXPECT_THROW(en15757_band(constant(50, 59 * 24)), DomainError);
    EXPECT_NO_THROW(en15757_band(constant(50, 60 * 24 + 1)));
}

// ---- correlation --------------------------------------------------------------

namespace {

// Textbook single-pass formula in extended precision.
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = static_cast<long double>(x.size()), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double a = x[i], b = y[i];
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

} // namespace

TEST(Pearson, PerfectLines) {
    const std::vector<double> x = {1, 2, 3, 4, 5.5};
    std::vector<double> y, z;
    for (double v : x) {
        y.push_back(2 * v + 1);
        z.push_back(-v);
    }
    EXPECT_NEAR(pearson(x, y), 1.0, 1e-15);
    EXPECT_NEAR(pearson(x, z), -1.0, 1e-15);
    EXPECT_THROW(pearson(x, std::vector<double>(5, 2.0)), UndefinedCorrelation);
    EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{2}), DomainError);
    EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), DomainError);
}

TEST(Pearson, MatchesTextbookOracle) {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> N(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 200;
        const double rho = std::uniform_real_distribution<double>(-1, 1)(rng);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = 20 + 5 * N(rng);
            y[i] = 60 + 10 * (rho * (x[i] - 20) / 5 + std::sqrt(1 - rho * rho) * N(rng));
        }
        ASSERT_NEAR(pearson(x, y), pearson_oracle(x, y), 1e-12) << trial;
    }
}

TEST(Pearson, AffineInvariance) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(100), y(100), xa(100), ya(100);
        const double a = std::exp(N(rng)), b = 10 * N(rng), c = std::exp(N(rng)), d = 10 * N(rng);
        for (std::size_t i = 0; i < 100; ++i) {
            x[i] = N(rng);
            y[i] = 0.3 * x[i] + N(rng);
            xa[i] = a * x[i] + b;
            ya[i] = c * y[i] + d;
        }
        const double r = pearson(x, y), ra = pearson(xa, ya);
        ASSERT_NEAR(r, ra, 1e-12);
        ASSERT_EQ(classify_r(r), classify_r(ra));
    }
}

TEST(ClassifyR, Boundaries) {
    EXPECT_EQ(classify_r(0.64), Strength::Strong);
    EXPECT_EQ(classify_r(0.84), Strength::VeryStrong);
    EXPECT_EQ(classify_r(0.20), Strength::Weak);
    EXPECT_EQ(classify_r(0.1999), Strength::VeryWeak);
    EXPECT_EQ(classify_r(0.40), Strength::Moderate);
    EXPECT_EQ(classify_r(0.60), Strength::Strong);
    EXPECT_EQ(classify_r(0.80), Strength::VeryStrong);
    EXPECT_EQ(classify_r(-0.84), Strength::VeryStrong);
    EXPECT_EQ(classify_r(0.0), Strength::VeryWeak);
    EXPECT_EQ(classify_r(1.0), Strength::VeryStrong);
    EXPECT_EQ(label(classify_r(0.64)), "strong");
    EXPECT_EQ(label(classify_r(0.84)), "very strong");
    EXPECT_THROW(classify_r(1.0000001), DomainError);
    EXPECT_THROW(classify_r(std::nan("")), DomainError);
}

namespace {

HourlySeries white_noise(std::size_t n, std::uint64_t seed, Timestamp start = kStart) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0, 1);
    std::vector<double> v(n);
    for (auto& x : v) x = N(rng);
    return HourlySeries::from_values(start, v);
}

} // namespace

TEST(Ccf, LaggedCopyPeaksAtLag) {
    const auto x = white_noise(1000, 1);
    std::vector<HourlyPoint> yp;
    for (const auto& p : x.points()) yp.push_back({p.time + 3h, p.value});
    const HourlySeries y(yp);
    const auto r = ccf(x, y, 48);
    EXPECT_EQ(r.argmax_lag, 3);
    EXPECT_GT(r.max_value(), 0.99);
    EXPECT_EQ(r.values.size(), 97u);
    for (double v : r.values) EXPECT_LE(std::abs(v), 1 + 1e-9);
}

TEST(Ccf, IndependentSeriesStayInsideBand) {
    const auto x = white_noise(2000, 10), y = white_noise(2000, 11);
    const auto r = ccf(x, y, 24);
    for (double v : r.values) EXPECT_LT(std::abs(v), 3 * r.conf_halfwidth);
}

TEST(Ccf, ConfidenceHalfwidth) {
    const auto x = white_noise(1464, 2), y = white_noise(1464, 3);
    const auto r = ccf(x, y, 48);
    EXPECT_EQ(r.n, 1464u);
    EXPECT_NEAR(r.conf_halfwidth, 0.0512, 0.0005);
    EXPECT_NEAR(r.conf_halfwidth, 0.05122542060195303595, 1e-15);
}

TEST(Ccf, SelfAndReversal) {
    const auto x = white_noise(500, 4);
    std::vector<HourlyPoint> yp;
    std::mt19937_64 rng(6);
    std::normal_distribution<double> N(0, 1);
    for (std::size_t i = 5; i < x.size(); ++i) yp.push_back({x.points()[i].time, x.points()[i - 5].value + 0.5 * N(rng)});
    const HourlySeries y(yp);
    const auto self = ccf(x, x, 10);
    EXPECT_EQ(self.argmax_lag, 0);
    EXPECT_NEAR(self.max_value(), 1.0, 1e-15);
    const auto xy = ccf(x, y, 12), yx = ccf(y, x, 12);
    for (int k = -12; k <= 12; ++k) EXPECT_NEAR(xy.at(k), yx.at(-k), 1e-12) << k;
    EXPECT_EQ(xy.argmax_lag, 5);
    EXPECT_EQ(yx.argmax_lag, -5);
}

TEST(Ccf, TiesPreferSmallNegativeLag) {
    // Period-4 integer pattern, y(t) = x(t - 2): value exactly 1 at lags ±2, ±6, ...
    std::vector<double> xv(400), yv(400);
    for (std::size_t i = 0; i < 400; ++i) {
        xv[i] = static_cast<double>(i % 4);
        yv[i] = static_cast<double>((i + 2) % 4);
    }
    const auto r = ccf(HourlySeries::from_values(kStart, xv), HourlySeries::from_values(kStart, yv), 8);
    EXPECT_EQ(r.at(2), 1.0);
    EXPECT_EQ(r.at(-2), 1.0);
    EXPECT_EQ(r.argmax_lag, -2);
}

TEST(Ccf, NeedsOverlap) {
    EXPECT_THROW(ccf(white_noise(50, 1), white_noise(50, 2), 48), DomainError);
    EXPECT_THROW(ccf(white_noise(100, 1), white_noise(100, 2, kStart + 200h), 4), DomainError);
    EXPECT_NO_THROW(ccf(white_noise(51, 1), white_noise(51, 2), 48));
}

TEST(CorrelationMatrix, SelfSymmetryAndFlags) {
    const auto x = white_noise(100, 1);
    const auto one = correlation_matrix({x});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one(0, 0), 1.0);

    std::vector<HourlySeries> many;
    for (std::uint64_t s = 0; s < 6; ++s) many.push_back(white_noise(80 + 10 * s, s));
    many.push_back(constant(3, 100));
    const auto m = correlation_matrix(many);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) EXPECT_EQ(m(i, j), m(j, i));
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(m(i, i), 1.0);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_FALSE(m(6, i).has_value());
    EXPECT_EQ(*m(0, 1), pearson(align(many[0], many[1]).x, align(many[0], many[1]).y));
}

// Occupancy events drive CO2 and noise hard, temperature and light weakly,
// RH not at all.
TEST(CorrelationMatrix, OccupancyFixtureRanksCo2NoiseFirst) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> N(0, 1);
    const std::size_t n = 60 * 24;
    std::vector<double> occ(n), co2(n), noise(n), light(n), temp(n), rh(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hour = i % 24;
        occ[i] = (hour >= 9 && hour < 17 && rng() % 3 != 0) ? 1.0 : 0.0;
        const double day = std::cos(2 * std::numbers::pi * (static_cast<double>(hour) - 13) / 24);
        co2[i] = 420 + 600 * occ[i] + 40 * N(rng);
        noise[i] = 35 + 20 * occ[i] + 2 * N(rng);
        light[i] = 100 + 150 * day + 40 * occ[i] + 60 * N(rng);
        temp[i] = 18 + 0.8 * day + 0.4 * occ[i] + 0.5 * N(rng);
        rh[i] = 55 + 3 * N(rng);
    }
    const std::vector<HourlySeries> s = {HourlySeries::from_values(kStart, co2), HourlySeries::from_values(kStart, noise),
                                         HourlySeries::from_values(kStart, light), HourlySeries::from_values(kStart, temp),
                                         HourlySeries::from_values(kStart, rh)};
    const auto m = correlation_matrix(s);
    std::pair<std::size_t, std::size_t> best{0, 0};
    double best_r = -2;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j)
            if (*m(i, j) > best_r) {
                best_r = *m(i, j);
                best = {i, j};
            }
    EXPECT_EQ(best, (std::pair<std::size_t, std::size_t>{0, 1}));
    EXPECT_EQ(classify_r(best_r), Strength::VeryStrong);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(classify_r(*m(i, 4)), Strength::VeryWeak);
}

// ---- Mann-Whitney -------------------------------------------------------------

namespace {

double u_statistic(const std::vector<double>& x, const std::vector<double>& y) {
    double u = 0;
    for (double a : x)
        for (double b : y) u += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
    return u;
}

struct PermutationOracle {
    std::vector<double> us;  // U_x over every assignment of the pooled values
};

// Every way of choosing which pooled positions form x.
PermutationOracle enumerate(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> pooled = x;
    pooled.insert(pooled.end(), y.begin(), y.end());
    const std::size_t n = pooled.size(), m = x.size();
    PermutationOracle o;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != m) continue;
        std::vector<double> a, b;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? a : b).push_back(pooled[i]);
        o.us.push_back(u_statistic(a, b));
    }
    return o;
}

double two_sided_p(const PermutationOracle& o, double u) {
    double lo = 0, hi = 0;
    for (double v : o.us) {
        lo += v <= u;
        hi += v >= u;
    }
    return std::min(1.0, 2 * std::min(lo, hi) / static_cast<double>(o.us.size()));
}

// All multisets of size k over `alphabet` (non-decreasing sequences).
void multisets(const std::vector<double>& alphabet, std::size_t k, std::size_t from, std::vector<double>& cur,
               std::vector<std::vector<double>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = from; i < alphabet.size(); ++i) {
        cur.push_back(alphabet[i]);
        multisets(alphabet, k, i, cur, out);
        cur.pop_back();
    }
}

} // namespace

TEST(MannWhitney, Examples) {
    const auto r = mann_whitney(std::vector<double>{1, 2}, std::vector<double>{3, 4});
    EXPECT_EQ(r.u_x, 0.0);
    EXPECT_EQ(r.u_y, 4.0);
    EXPECT_EQ(r.method, MwuMethod::Exact);
    EXPECT_NEAR(r.p, 1.0 / 3.0, 1e-15);
    EXPECT_FALSE(r.significant);

    const std::vector<double> same = {3, 1, 4, 1, 5, 9, 2, 6};
    const auto s = mann_whitney(same, same);
    EXPECT_EQ(s.u_x, 32.0);
    EXPECT_EQ(s.u_y, 32.0);
    EXPECT_NEAR(s.p, 1.0, 1e-12);

    EXPECT_THROW(mann_whitney(std::vector<double>{}, same), DomainError);
}

TEST(MannWhitney, ShiftedSamplesAgreeWithPermutationTest) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> N(0, 1);
    std::vector<double> x(500), y(500);
    for (auto& v : x) v = N(rng);
    for (auto& v : y) v = N(rng) + 0.5;
    const auto r = mann_whitney(x, y);
    EXPECT_EQ(r.method, MwuMethod::Normal);
    EXPECT_LT(r.p, 0.001);
    EXPECT_TRUE(r.significant);
    // Monte Carlo permutation test: no relabelling reaches the observed |U - mean|.
    std::vector<double> pooled = x;
    pooled.insert(pooled.end(), y.begin(), y.end());
    const double observed = std::abs(u_statistic(x, y) - 125000.0);
    EXPECT_EQ(observed, std::abs(r.u_x - r.mean));
    int extreme = 0;
    for (int k = 0; k < 2000; ++k) {
        std::shuffle(pooled.begin(), pooled.end(), rng);
        const std::vector<double> a(pooled.begin(), pooled.begin() + 500), b(pooled.begin() + 500, pooled.end());
        extreme += std::abs(mann_whitney(a, b).u_x - 125000.0) >= observed;
    }
    EXPECT_EQ(extreme, 0);
}

TEST(MannWhitney, ExactPathMatchesEnumerationExhaustively) {
    // Without ties only the rank pattern matters, so ranks 1..n cover every input.
    for (std::size_t nx = 1; nx <= 5; ++nx)
        for (std::size_t ny = 1; ny <= 5; ++ny) {
            const std::size_t n = nx + ny;
            std::vector<double> ranks(n);
            std::iota(ranks.begin(), ranks.end(), 1.0);
            const auto oracle = enumerate(std::vector<double>(ranks.begin(), ranks.begin() + static_cast<long>(nx)),
                                          std::vector<double>(ranks.begin() + static_cast<long>(nx), ranks.end()));
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                if (static_cast<std::size_t>(std::popcount(mask)) != nx) continue;
                std::vector<double> x, y;
                for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? x : y).push_back(ranks[i]);
                const auto r = mann_whitney(x, y);
                ASSERT_EQ(r.method, MwuMethod::Exact);
                ASSERT_EQ(r.u_x, u_statistic(x, y));
                ASSERT_NEAR(r.p, two_sided_p(oracle, r.u_x), 1e-12) << nx << "," << ny << " mask " << mask;
            }
        }
}

// With ties the normal path's centre and tie-corrected spread must equal the
// mean and variance of U over all relabellings of the pooled sample.
TEST(MannWhitney, TiedPathMomentsMatchEnumeration) {
    const std::vector<double> alphabet = {1, 2, 3};
    std::size_t cases = 0;
    for (std::size_t nx = 1; nx <= 5; ++nx)
        for (std::size_t ny = 1; ny <= 5; ++ny) {
            std::vector<std::vector<double>> xs, ys;
            std::vector<double> cur;
            multisets(alphabet, nx, 0, cur, xs);
            multisets(alphabet, ny, 0, cur, ys);
            for (const auto& x : xs)
                for (const auto& y : ys) {
                    const auto r = mann_whitney(x, y);
                    ASSERT_EQ(r.u_x, u_statistic(x, y));
                    ASSERT_EQ(r.u_x + r.u_y, static_cast<double>(nx * ny));
                    const auto o = enumerate(x, y);
                    double mean = 0, var = 0;
                    for (double u : o.us) mean += u;
                    mean /= static_cast<double>(o.us.size());
                    for (double u : o.us) var += (u - mean) * (u - mean);
                    var /= static_cast<double>(o.us.size());
                    ASSERT_NEAR(r.mean, mean, 1e-9);
                    ASSERT_NEAR(r.sd * r.sd, var, 1e-9);
                    if (r.method == MwuMethod::Exact) {
                        ASSERT_NEAR(r.p, two_sided_p(o, r.u_x), 1e-12);
                    } else if (var > 0) {
                        const double z = std::max(0.0, std::abs(r.u_x - mean) - 0.5) / std::sqrt(var);
                        ASSERT_NEAR(r.p, std::min(1.0, std::erfc(z / std::sqrt(2.0))), 1e-12);
                    } else {
                        ASSERT_EQ(r.p, 1.0);
                    }
                    ++cases;
                }
        }
    EXPECT_GT(cases, 1000u);
}

TEST(MannWhitney, USumOnRandomCases) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t nx = 1 + rng() % 40, ny = 1 + rng() % 40;
        const int alphabet = 2 + static_cast<int>(rng() % 50);
        std::vector<double> x(nx), y(ny);
        for (auto& v : x) v = static_cast<double>(rng() % static_cast<unsigned>(alphabet));
        for (auto& v : y) v = static_cast<double>(rng() % static_cast<unsigned>(alphabet));
        const auto r = mann_whitney(x, y);
        ASSERT_EQ(r.u_x + r.u_y, static_cast<double>(nx * ny));
        ASSERT_GE(r.p, 0.0);
        ASSERT_LE(r.p, 1.0);
    }
}

// ---- MR difference ------------------------------------------------------------

TEST(MrDifference, Examples) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> N(6, 1.5);
    std::vector<double> out(30 * 24);
    for (auto& v : out) v = N(rng);
    const auto outdoor = HourlySeries::from_values(kStart, out);
    const auto zero = mr_difference_distribution(outdoor, outdoor);
    EXPECT_EQ(zero.n, 30u * 24 - 167);
    for (double v : {zero.min_whisker, zero.q1, zero.median, zero.q3, zero.max_whisker}) EXPECT_EQ(v, 0.0);

    std::vector<double> in = out;
    for (auto& v : in) v += 2.0;
    const auto shifted = mr_difference_distribution(HourlySeries::from_values(kStart, in), outdoor);
    EXPECT_NEAR(shifted.median, 2.0, 1e-9);
    EXPECT_NEAR(shifted.iqr(), 0.0, 1e-9);
    EXPECT_THROW(mr_difference_distribution(outdoor, constant(5, 30 * 24, kStart + 60 * kDay)), DomainError);
}

TEST(MrDifference, HumidBasementFixture) {
    // Indoor air carries a moisture source of ~1.2 g/kg on top of the outdoor
    // air; the weekly means stay above outdoor far more than 75 % of the time.
    std::mt19937_64 rng(12);
    std::normal_distribution<double> N(0, 1);
    std::vector<double> t(90 * 24), rh(90 * 24), p(90 * 24), ti(90 * 24), rhi(90 * 24);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = std::cos(2 * std::numbers::pi * (static_cast<double>(i % 24) - 15) / 24);
        t[i] = 8 + 5 * d + N(rng);
        rh[i] = std::clamp(75 - 12 * d + 5 * N(rng), 5.0, 100.0);
        p[i] = 1005 + 8 * N(rng);
    }
    const auto ts = HourlySeries::from_values(kStart, t), rs = HourlySeries::from_values(kStart, rh),
               ps = HourlySeries::from_values(kStart, p);
    const auto out_mr = outdoor_mr(ts, rs, ps);
    std::vector<double> in_mr = out_mr.values();
    for (auto& v : in_mr) v += 1.2 + 0.8 * N(rng);
    const auto box = mr_difference_distribution(HourlySeries::from_values(kStart, in_mr), out_mr);
    EXPECT_GT(box.q1, 0.0);
    EXPECT_NEAR(box.median, 1.2, 0.3);
}

// ---- canonicalisation and config ----------------------------------------------

TEST(HourlySeries, ConstructionOrderDoesNotMatter) {
    std::vector<HourlyPoint> pts;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> N(50, 10);
    for (int i = 0; i < 90 * 24; ++i) pts.push_back({kStart + i * kHour, N(rng)});
    auto shuffled = pts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const HourlySeries a(pts), b(shuffled);
    EXPECT_EQ(a, b);
    EXPECT_EQ(seasonal_cma(a), seasonal_cma(b));
    EXPECT_EQ(en15757_band(a).risky_count, en15757_band(b).risky_count);
    EXPECT_THROW(HourlySeries({{kStart + 1min, 1}}), InvariantError);
    EXPECT_THROW(HourlySeries({{kStart, 1}, {kStart, 2}}), InvariantError);
    EXPECT_THROW(HourlySeries({{kStart, std::nan("")}}), InvariantError);
}

TEST(AnalysisConfigJson, DefaultsOverridesAndErrors) {
    const auto d = AnalysisConfig::from_json(nlohmann::json::object());
    EXPECT_EQ(d.standard_pressure, 1013.0);
    EXPECT_EQ(d.seasonal_window_days, 30);
    EXPECT_EQ(d.fluct_percentiles, (std::array<double, 2>{7, 93}));
    EXPECT_EQ(d.min_band_halfwidth, 10.0);
    EXPECT_EQ(d.significance, 0.05);
    EXPECT_EQ(d.ma_window_days, 7);
    EXPECT_EQ(d.ccf_conf_z, 1.96);
    EXPECT_EQ(d.r_class_bounds, (std::array<double, 4>{0.2, 0.4, 0.6, 0.8}));
    const auto c = AnalysisConfig::from_json(nlohmann::json::parse(R"({"significance":0.01,"fluct_percentiles":[5,95]})"));
    EXPECT_EQ(c.significance, 0.01);
    EXPECT_EQ(c.fluct_percentiles[0], 5.0);
    EXPECT_THROW(AnalysisConfig::from_json(nlohmann::json::parse(R"({"fluct_percentiles":[7,90]})")), ConfigError);
    EXPECT_THROW(AnalysisConfig::from_json(nlohmann::json::parse(R"({"significance":1.5})")), ConfigError);
    EXPECT_THROW(AnalysisConfig::from_json(nlohmann::json::parse(R"({"signifcance":0.1})")), ConfigError);
    EXPECT_THROW(AnalysisConfig::from_json(nlohmann::json::parse(R"({"ma_window_days":"seven"})")), ConfigError);
}
