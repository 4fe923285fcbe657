#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <thread>

#include "heritage_twin/tstore/store.hpp"

using namespace htwin;
using namespace std::chrono_literals;

namespace {

const Uuid kA = Uuid::parse("00000000-0000-4000-8000-00000000000a");
const Uuid kB = Uuid::parse("00000000-0000-4000-8000-00000000000b");
const Timestamp kT0 = make_time(2023, 7, 1);

std::vector<Sample> cadence(const Uuid& id, Timestamp from, int n, Millis step, double value = 1.0) {
    std::vector<Sample> out;
    for (int i = 0; i < n; ++i) out.push_back({id, from + i * step, value});
    return out;
}

std::filesystem::path temp_path(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("htwin_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove(p);
    return p;
}

} // namespace

TEST(InsertBatch, FreshThenIdempotent) {
    Store s;
    const auto batch = cadence(kA, kT0, 120, 30s);
    EXPECT_EQ(s.insert_batch(batch), 120u);
    const auto digest = s.digest();
    const auto again = s.insert_batch_detailed(batch);
    EXPECT_EQ(again.inserted, 0u);
    EXPECT_EQ(again.duplicates, 120u);
    EXPECT_EQ(s.size(), 120u);
    EXPECT_EQ(s.digest(), digest);
}

TEST(InsertBatch, ConflictRejectsWholeBatch) {
    Store s;
    s.insert_batch(cadence(kB, kT0, 3, 30s));
    std::vector<Sample> batch = cadence(kA, kT0, 10, 30s);
    batch.push_back({kA, kT0 + 60s, 1.0});
    batch.push_back({kA, kT0 + 60s, 2.0});
    try {
        s.insert_batch(batch);
        FAIL();
    } catch (const InvariantError& e) {
        EXPECT_NE(std::string(e.what()).find(kA.str()), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("2023-07-01T00:01:00.000Z"), std::string::npos);
    }
    EXPECT_EQ(s.size(), 3u);
    EXPECT_FALSE(s.has_series(kA));

    // conflict against already stored data
    EXPECT_THROW(s.insert_batch(std::vector<Sample>{{kB, kT0, 5.0}}), InvariantError);
    EXPECT_EQ(s.size(), 3u);
}

TEST(InsertBatch, NonFiniteRejected) {
    Store s;
    EXPECT_THROW(s.insert_batch(std::vector<Sample>{{kA, kT0, 1.0}, {kA, kT0 + 1s, std::nan("")}}), InvariantError);
    EXPECT_THROW(s.insert_batch(std::vector<Sample>{{kA, kT0, std::numeric_limits<double>::infinity()}}),
                 InvariantError);
    EXPECT_EQ(s.size(), 0u);
}

TEST(RangeQuery, FullDayAtThirtySeconds) {
    Store s;
    s.insert_batch(cadence(kA, kT0 - 1h, 2880 + 240, 30s));
    EXPECT_EQ(s.range_query(kA, kT0, kT0 + 24h).size(), 2880u);
    EXPECT_TRUE(s.range_query(kA, kT0, kT0).empty());
    EXPECT_THROW(s.range_query(kB, kT0, kT0 + 1h), NotFoundError);
    EXPECT_THROW(s.range_query(kA, kT0 + 1h, kT0), DomainError);
}

TEST(RangeQuery, MatchesLinearScanOnRandomWorkloads) {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 20; ++round) {
        Store s;
        std::vector<Sample> all;
        for (int b = 0; b < 10; ++b) {
            std::vector<Sample> batch;
            for (int i = 0; i < 50; ++i) {
                const Uuid& id = rng() % 2 ? kA : kB;
                const Timestamp t = kT0 + Millis{static_cast<long>(rng() % 100'000) * 1000};
                batch.push_back({id, t, static_cast<double>(to_unix_ms(t) % 977)});  // value is a function of key
            }
            s.insert_batch(batch);
            all.insert(all.end(), batch.begin(), batch.end());
        }
        for (int q = 0; q < 20; ++q) {
            Timestamp a = kT0 + Millis{static_cast<long>(rng() % 100'000) * 1000};
            Timestamp b = kT0 + Millis{static_cast<long>(rng() % 100'000) * 1000};
            if (b < a) std::swap(a, b);
            std::vector<Sample> expected;
            for (const auto& x : all)
                if (x.series_id == kA && x.time >= a && x.time < b) expected.push_back(x);
            std::sort(expected.begin(), expected.end(), time_then_series);
            expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
            EXPECT_EQ(s.range_query(kA, a, b), expected);
        }
    }
}

TEST(Downsample, ConstantHour) {
    Store s;
    s.insert_batch(cadence(kA, kT0, 120, 30s, 2.0));
    const auto h = s.downsample_hourly(kA, kT0, kT0 + 1h);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_EQ(h[0].value, 2.0);
    EXPECT_EQ(h[0].time, kT0);
}

TEST(Downsample, MeanOfOneToOneTwenty) {
    Store s;
    std::vector<Sample> batch;
    for (int i = 0; i < 120; ++i) batch.push_back({kA, kT0 + i * 30s, static_cast<double>(i + 1)});
    s.insert_batch(batch);
    const auto h = s.downsample_hourly(kA, kT0, kT0 + 1h);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_DOUBLE_EQ(h[0].value, 60.5);  // (1 + 120) / 2
}

TEST(Downsample, EmptyHourAbsent) {
    Store s;
    s.insert_batch(cadence(kA, kT0, 120, 30s));
    s.insert_batch(cadence(kA, kT0 + 2h, 120, 30s));
    const auto h = s.downsample_hourly(kA, kT0, kT0 + 3h);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[1].time, kT0 + 2h);
    EXPECT_THROW(s.downsample_hourly(kA, kT0 + 1min, kT0 + 3h), DomainError);
}

TEST(Downsample, PreservesSums) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(50, 20);
    Store s;
    std::vector<Sample> batch;
    for (int i = 0; i < 20'000; ++i)
        if (rng() % 5) batch.push_back({kA, kT0 + i * 30s, noise(rng)});
    s.insert_batch(batch);
    double raw = 0.0;
    for (auto& x : s.range_query(kA, kT0, kT0 + 200h)) raw += x.value;
    double hourly = 0.0;
    for (auto& b : s.hourly_buckets(kA, kT0, kT0 + 200h)) hourly += b.mean * static_cast<double>(b.count);
    EXPECT_NEAR(hourly, raw, 1e-9 * std::abs(raw));
}

TEST(Clean, OutlierRemovedAndMidpointInterpolated) {
    const std::vector<Sample> in{{kA, kT0, 55}, {kA, kT0 + 30s, 254}, {kA, kT0 + 60s, 56}};
    const auto out = clean(in, {0, 100}, 30s, 10min);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[1].time, kT0 + 30s);
    EXPECT_DOUBLE_EQ(out[1].value, 55.5);
}

TEST(Clean, IdentityWhenNothingToDo) {
    const auto in = cadence(kA, kT0, 50, 30s, 42.0);
    EXPECT_EQ(clean(in, {0, 100}, 30s, 10min), in);
}

TEST(Clean, LongGapPreserved) {
    std::vector<Sample> in{{kA, kT0, 10}, {kA, kT0 + 3h, 13}};
    EXPECT_EQ(clean(in, {0, 100}, 1h, 1h), in);
}

TEST(Clean, NoExtrapolationAtEdges) {
    const std::vector<Sample> in{{kA, kT0, 500}, {kA, kT0 + 30s, 50}, {kA, kT0 + 60s, 51}, {kA, kT0 + 90s, -3}};
    const auto out = clean(in, {0, 100}, 30s, 10min);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out.front().time, kT0 + 30s);
    EXPECT_EQ(out.back().time, kT0 + 60s);
}

// Bounds respected, originals untouched, fills lie on the chord.
TEST(Clean, PropertiesOnRandomSeries) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> val(-50, 150);
    for (int round = 0; round < 200; ++round) {
        std::vector<Sample> in;
        Timestamp t = kT0;
        for (int i = 0; i < 200; ++i) {
            t += 30s * static_cast<int>(1 + (rng() % 10 == 0 ? rng() % 40 : 0));
            in.push_back({kA, t, val(rng)});
        }
        const Bounds bounds{0, 100};
        const auto out = clean(in, bounds, 30s, 10min);
        std::vector<Sample> originals;
        for (auto& s : in) {
            if (bounds.contains(s.value)) originals.push_back(s);
        }
        std::size_t oi = 0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            ASSERT_TRUE(bounds.contains(out[i].value));
            if (i) {
                ASSERT_LT(out[i - 1].time, out[i].time);
            }
            if (oi < originals.size() && out[i] == originals[oi]) {
                ++oi;
                continue;
            }
            // interpolated: bracketed by originals[oi-1] and originals[oi]
            ASSERT_GT(oi, 0u);
            ASSERT_LT(oi, originals.size());
            const auto& a = originals[oi - 1];
            const auto& b = originals[oi];
            const double f = static_cast<double>((out[i].time - a.time).count()) /
                             static_cast<double>((b.time - a.time).count());
            const double chord = a.value + (b.value - a.value) * f;
            ASSERT_NEAR(out[i].value, chord, 1e-12 * std::max(1.0, std::abs(chord)));
            ASSERT_LE(b.time - a.time, Millis{10min});
        }
        ASSERT_EQ(oi, originals.size());
    }
}

TEST(Latest, MaxTimeWins) {
    Store s;
    s.insert_batch(std::vector<Sample>{{kA, kT0 + 1s, 1}, {kA, kT0 + 2s, 2}, {kA, kT0 + 3s, 3}});
    EXPECT_EQ(s.latest(kA).time, kT0 + 3s);

    Store single;
    single.insert_batch(std::vector<Sample>{{kA, kT0, 9}});
    EXPECT_EQ(single.latest(kA), (Sample{kA, kT0, 9}));

    Store ooo;
    ooo.insert_batch(std::vector<Sample>{{kA, kT0 + 5s, 5}});
    ooo.insert_batch(std::vector<Sample>{{kA, kT0 + 4s, 4}});
    EXPECT_EQ(ooo.latest(kA).time, kT0 + 5s);
    EXPECT_THROW(ooo.latest(kB), NotFoundError);
}

TEST(DailyDistribution, DegenerateDay) {
    Store s;
    s.insert_batch(cadence(kA, kT0, 24, 1h, 10.0));
    const auto d = s.daily_distribution(kA, 2023, 7);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].day, kT0);
    EXPECT_EQ(d[0].stats.min_whisker, 10);
    EXPECT_EQ(d[0].stats.q1, 10);
    EXPECT_EQ(d[0].stats.median, 10);
    EXPECT_EQ(d[0].stats.q3, 10);
    EXPECT_EQ(d[0].stats.max_whisker, 10);
}

TEST(DailyDistribution, QuartilesOfOneToHundred) {
    Store s;
    std::vector<Sample> batch;
    for (int i = 0; i < 100; ++i) batch.push_back({kA, kT0 + 2h + i * 13min, static_cast<double>(i + 1)});
    s.insert_batch(batch);
    // sort-and-interpolate by hand: rank q*(n-1) over 1..100
    const auto d = s.daily_distribution(kA, 2023, 7);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_DOUBLE_EQ(d[0].stats.q1, 25.75);
    EXPECT_DOUBLE_EQ(d[0].stats.median, 50.5);
    EXPECT_DOUBLE_EQ(d[0].stats.q3, 75.25);
    EXPECT_EQ(d[0].stats.min_whisker, 1);
    EXPECT_EQ(d[0].stats.max_whisker, 100);
}

TEST(DailyDistribution, SparseDaysAndEmptyMonths) {
    Store s;
    s.insert_batch(cadence(kA, kT0, 3, 1h));
    s.insert_batch(cadence(kA, kT0 + 24h, 4, 1h));
    const auto d = s.daily_distribution(kA, 2023, 7);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].day, kT0 + 24h);
    EXPECT_TRUE(s.daily_distribution(kA, 2023, 8).empty());
}

TEST(ExportCsv, TwoSeriesTwoHours) {
    Store s;
    s.insert_batch(cadence(kA, kT0, 240, 30s, 1.5));
    s.insert_batch(cadence(kB, kT0, 240, 30s, 2.25));
    ExportSelection sel{{{kB, ParameterKind::Temperature}, {kA, ParameterKind::Temperature}},
                        kT0, kT0 + 2h, Resolution::Hourly, false};
    const auto csv = s.export_csv(sel, CleaningBounds::defaults());
    const std::string expected =
        "time,uuid,value\n"
        "2023-07-01T00:00:00.000Z,00000000-0000-4000-8000-00000000000a,1.5\n"
        "2023-07-01T00:00:00.000Z,00000000-0000-4000-8000-00000000000b,2.25\n"
        "2023-07-01T01:00:00.000Z,00000000-0000-4000-8000-00000000000a,1.5\n"
        "2023-07-01T01:00:00.000Z,00000000-0000-4000-8000-00000000000b,2.25\n";
    EXPECT_EQ(csv, expected);
}

TEST(ExportCsv, EmptySelectionIsHeaderOnly) {
    Store s;
    EXPECT_EQ(s.export_csv({{}, kT0, kT0 + 1h, Resolution::Raw, false}, CleaningBounds::defaults()),
              "time,uuid,value\n");
    EXPECT_THROW(s.export_csv({{{kA}}, kT0, kT0 + 1h, Resolution::Raw, false}, CleaningBounds::defaults()),
                 NotFoundError);
}

TEST(ExportCsv, ReimportReproducesSamplesAndBytes) {
    std::mt19937_64 rng(5);
    Store s;
    std::vector<Sample> batch;
    for (int i = 0; i < 500; ++i) {
        const double v = std::round(std::uniform_real_distribution<double>(-30, 120)(rng) * 100) / 100;
        batch.push_back({i % 2 ? kA : kB, kT0 + i * 17s + Millis{i % 1000}, v});
    }
    s.insert_batch(batch);
    const auto csv = s.export_csv({{{kA}, {kB}}, kT0, kT0 + 24h, Resolution::Raw, false}, CleaningBounds::defaults());
    auto parsed = parse_csv(csv);
    auto expected = batch;
    std::sort(expected.begin(), expected.end(), time_then_series);
    EXPECT_EQ(parsed, expected);
    EXPECT_EQ(write_csv(parsed), csv);

    Store reloaded;
    reloaded.insert_batch(parsed);
    EXPECT_EQ(reloaded.digest(), s.digest());
}

TEST(ExportCsv, CleanedHourlyFillsShortHourlyGap) {
    Store s;
    s.insert_batch(cadence(kA, kT0, 120, 30s, 50.0));
    s.insert_batch(cadence(kA, kT0 + 2h, 120, 30s, 60.0));
    s.insert_batch(std::vector<Sample>{{kA, kT0 + 2h + 15s, 999.0}});  // implausible RH
    ExportSelection sel{{{kA, ParameterKind::RelativeHumidity}}, kT0, kT0 + 3h, Resolution::Hourly, true};
    const auto rows = parse_csv(s.export_csv(sel, CleaningBounds::defaults()));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_DOUBLE_EQ(rows[1].value, 55.0);
    EXPECT_DOUBLE_EQ(rows[2].value, 60.0);
}

TEST(ParseCsv, RejectsBadInput) {
    EXPECT_THROW(parse_csv(""), ParseError);
    EXPECT_THROW(parse_csv("t,u,v\n"), ParseError);
    EXPECT_THROW(parse_csv("time,uuid,value\n2023-07-01T00:00:00.000Z,nope,1\n"), ParseError);
    EXPECT_THROW(parse_csv("time,uuid,value\n2023-07-01T00:00:00.000Z,00000000-0000-4000-8000-00000000000a,nan\n"),
                 ParseError);
    try {
        parse_csv("time,uuid,value\n2023-07-01T00:00:00.000Z,00000000-0000-4000-8000-00000000000a,1\nbad\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(StoreFile, ReopenReplaysLog) {
    const auto path = temp_path("reopen");
    std::string digest;
    {
        Store s(path);
        s.insert_batch(cadence(kA, kT0, 100, 30s, 3.0));
        s.insert_batch(cadence(kB, kT0, 50, 30s, 4.0));
        s.insert_batch(cadence(kA, kT0, 100, 30s, 3.0));  // all duplicates, nothing appended
        digest = s.digest();
    }
    Store again(path);
    EXPECT_EQ(again.size(), 150u);
    EXPECT_EQ(again.digest(), digest);
    std::filesystem::remove(path);
}

TEST(StoreFile, TornTailIsDropped) {
    const auto path = temp_path("torn");
    {
        Store s(path);
        s.insert_batch(cadence(kA, kT0, 10, 30s));
        s.insert_batch(cadence(kB, kT0, 10, 30s));
    }
    const auto full = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, full - 5);
    {
        Store s(path);
        EXPECT_EQ(s.size(), 10u);
        EXPECT_FALSE(s.has_series(kB));
        s.insert_batch(cadence(kB, kT0, 3, 30s));
    }
    Store s(path);
    EXPECT_EQ(s.size(), 13u);
    std::filesystem::remove(path);
}

TEST(StoreFile, RejectsForeignFile) {
    const auto path = temp_path("foreign");
    std::ofstream(path) << "definitely not a store";
    EXPECT_THROW(Store{path}, IoError);
    std::filesystem::remove(path);
}

TEST(Concurrency, ReadersNeverSeePartialBatch) {
    Store s;
    std::atomic<bool> done{false};
    std::atomic<int> bad{0};
    std::thread reader([&] {
        while (!done) {
            const auto n = s.size();
            if (n % 100 != 0) ++bad;
        }
    });
    for (int b = 0; b < 200; ++b) s.insert_batch(cadence(kA, kT0 + b * 1h, 100, 30s));
    done = true;
    reader.join();
    EXPECT_EQ(bad.load(), 0);
    EXPECT_EQ(s.size(), 20'000u);
}
