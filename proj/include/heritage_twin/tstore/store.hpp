#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

#include "heritage_twin/core/error.hpp"
#include "heritage_twin/core/stats.hpp"
#include "heritage_twin/tstore/clean.hpp"
#include "heritage_twin/tstore/csv.hpp"
#include "heritage_twin/tstore/sample.hpp"
#include "heritage_twin/tstore/store_file.hpp"

namespace htwin {

struct InsertResult {
    std::size_t inserted = 0;
    std::size_t duplicates = 0;
};

struct HourlyBucket {
    Timestamp hour;
    double mean = 0.0;
    std::size_t count = 0;
    double sum = 0.0;
};

struct DailyBox {
    Timestamp day;
    BoxplotStats stats;
};

enum class Resolution { Raw, Hourly };

struct ExportSeries {
    Uuid id;
    ParameterKind parameter = ParameterKind::Temperature;
};

struct ExportSelection {
    std::vector<ExportSeries> series;
    Timestamp from;
    Timestamp to;
    Resolution resolution = Resolution::Raw;
    bool cleaned = false;
};

// Single logical (TIME, UUID, VALUE) table keyed by (time, uuid).
//
// Readers share a lock and always see whole batches; writers are serialized.
// When opened on a path, every accepted batch is appended to the store file
// before it becomes visible in memory.
class Store {
public:
    Store() = default;

    // ReadWrite creates a missing file and cuts a torn tail off an existing
    // one. ReadOnly requires the file, leaves it untouched and refuses inserts.
    enum class Mode { ReadWrite, ReadOnly };

    explicit Store(std::filesystem::path path, Mode mode = Mode::ReadWrite)
        : path_(std::move(path)), read_only_(mode == Mode::ReadOnly) {
        std::error_code ec;
        const bool missing = !std::filesystem::exists(path_, ec) || std::filesystem::file_size(path_, ec) == 0;
        if (missing && read_only_) throw IoError("store '" + path_.string() + "' does not exist");
        if (missing) {
            storefile::write_header(path_);
            return;
        }
        const auto good = storefile::replay(path_, [&](const std::vector<Sample>& batch) {
            for (const auto& s : batch) apply(s);
        });
        if (!read_only_ && good != std::filesystem::file_size(path_)) std::filesystem::resize_file(path_, good);
    }

    bool read_only() const { return read_only_; }

    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    // Atomic: either the whole batch is applied or nothing is.
    InsertResult insert_batch_detailed(std::span<const Sample> samples) {
        if (read_only_) throw IoError("store '" + path_.string() + "' is open read-only");
        std::unique_lock lock(mutex_);
        std::vector<Sample> fresh;
        fresh.reserve(samples.size());
        std::map<std::pair<Uuid, Timestamp>, double> pending;
        InsertResult r;
        for (const auto& s : samples) {
            if (!std::isfinite(s.value))
                throw InvariantError("non-finite value for " + s.series_id.str() + " at " + format_iso(s.time));
            if (auto existing = lookup(s.series_id, s.time)) {
                if (*existing != s.value) throw conflict(s, *existing);
                ++r.duplicates;
                continue;
            }
            auto [it, inserted] = pending.emplace(std::pair{s.series_id, s.time}, s.value);
            if (!inserted) {
                if (it->second != s.value) throw conflict(s, it->second);
                ++r.duplicates;
                continue;
            }
            fresh.push_back(s);
        }
        if (!fresh.empty() && !path_.empty()) {
            const auto bytes = storefile::encode_batch(fresh);
            std::ofstream out(path_, std::ios::binary | std::ios::app);
            out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
            out.flush();
            if (!out) throw IoError("append to store file '" + path_.string() + "' failed");
        }
        for (const auto& s : fresh) apply(s);
        r.inserted = fresh.size();
        return r;
    }

    std::size_t insert_batch(std::span<const Sample> samples) { return insert_batch_detailed(samples).inserted; }

    bool has_series(const Uuid& id) const {
        std::shared_lock lock(mutex_);
        return series_.count(id) != 0;
    }

    std::vector<Uuid> series_ids() const {
        std::shared_lock lock(mutex_);
        std::vector<Uuid> out;
        for (const auto& [id, _] : series_) out.push_back(id);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return total_;
    }

    std::size_t count(const Uuid& id) const {
        std::shared_lock lock(mutex_);
        auto it = series_.find(id);
        return it == series_.end() ? 0 : it->second.size();
    }

    // Samples with from <= time < to, ascending.
    std::vector<Sample> range_query(const Uuid& id, Timestamp from, Timestamp to) const {
        if (to < from) throw DomainError("range_query needs from <= to");
        std::shared_lock lock(mutex_);
        const auto& rows = rows_of(id);
        std::vector<Sample> out;
        auto lo = std::lower_bound(rows.begin(), rows.end(), from, [](const Row& r, Timestamp t) { return r.time < t; });
        for (; lo != rows.end() && lo->time < to; ++lo) out.push_back(Sample{id, lo->time, lo->value});
        return out;
    }

    std::vector<HourlyBucket> hourly_buckets(const Uuid& id, Timestamp from, Timestamp to) const {
        return bucket_hourly(range_query(id, from, to));
    }

    // Mean per hour [h, h+1h) stamped at h; empty hours are absent.
    std::vector<Sample> downsample_hourly(const Uuid& id, Timestamp from, Timestamp to) const {
        if (!is_hour_aligned(from) || !is_hour_aligned(to))
            throw DomainError("downsample_hourly needs hour-aligned bounds");
        std::vector<Sample> out;
        for (const auto& b : hourly_buckets(id, from, to)) out.push_back(Sample{id, b.hour, b.mean});
        return out;
    }

    Sample latest(const Uuid& id) const {
        std::shared_lock lock(mutex_);
        const auto& rows = rows_of(id);
        if (rows.empty()) throw DomainError("series " + id.str() + " is empty");
        return Sample{id, rows.back().time, rows.back().value};
    }

    // Boxplot per UTC calendar day of the month; days with < 4 samples skipped.
    std::vector<DailyBox> daily_distribution(const Uuid& id, int year, unsigned month) const {
        using namespace std::chrono;
        const sys_days first{std::chrono::year{year} / std::chrono::month{month} / 1};
        const sys_days last = sys_days{(std::chrono::year{year} / std::chrono::month{month} / 1) + months{1}};
        std::vector<DailyBox> out;
        const auto rows = range_query(id, Timestamp{first}, Timestamp{last});
        std::size_t i = 0;
        while (i < rows.size()) {
            const Timestamp day = floor_day(rows[i].time);
            std::vector<double> values;
            while (i < rows.size() && floor_day(rows[i].time) == day) values.push_back(rows[i++].value);
            if (values.size() >= 4) out.push_back(DailyBox{day, boxplot(std::move(values))});
        }
        return out;
    }

    std::vector<Sample> select(const ExportSeries& s, Timestamp from, Timestamp to, Resolution res, bool cleaned,
                               const CleaningBounds& bounds) const {
        auto raw = range_query(s.id, from, to);
        if (cleaned) raw = clean(raw, bounds.for_parameter(s.parameter), bounds.raw_cadence, bounds.raw_max_gap);
        if (res == Resolution::Raw) return raw;
        std::vector<Sample> hourly;
        for (const auto& b : bucket_hourly(raw)) hourly.push_back(Sample{s.id, b.hour, b.mean});
        if (cleaned)
            hourly = clean(hourly, bounds.for_parameter(s.parameter), std::chrono::hours{1}, bounds.hourly_max_gap);
        return hourly;
    }

    std::string export_csv(const ExportSelection& sel, const CleaningBounds& bounds) const {
        if (sel.to < sel.from) throw DomainError("export needs from <= to");
        std::vector<Sample> rows;
        for (const auto& s : sel.series) {
            if (!has_series(s.id)) throw NotFoundError("unknown series " + s.id.str());
            auto part = select(s, sel.from, sel.to, sel.resolution, sel.cleaned, bounds);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        return write_csv(std::move(rows));
    }

    // Content hash over (uuid, time, value) in key order.
    std::string digest() const {
        std::shared_lock lock(mutex_);
        std::vector<Uuid> ids;
        for (const auto& [id, _] : series_) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&](const void* p, std::size_t n) {
            const auto* c = static_cast<const unsigned char*>(p);
            for (std::size_t i = 0; i < n; ++i) h = (h ^ c[i]) * 0x100000001b3ULL;
        };
        for (const auto& id : ids) {
            mix(id.bytes().data(), 16);
            for (const auto& r : series_.at(id)) {
                const auto ms = to_unix_ms(r.time);
                mix(&ms, sizeof ms);
                mix(&r.value, sizeof r.value);
            }
        }
        return fmt::format("{:016x}", h);
    }

    static std::vector<HourlyBucket> bucket_hourly(std::span<const Sample> sorted) {
        std::vector<HourlyBucket> out;
        for (const auto& s : sorted) {
            const auto h = floor_hour(s.time);
            if (out.empty() || out.back().hour != h) out.push_back(HourlyBucket{h, 0.0, 0, 0.0});
            out.back().sum += s.value;
            ++out.back().count;
        }
        for (auto& b : out) b.mean = b.sum / static_cast<double>(b.count);
        return out;
    }

private:
    struct Row {
        Timestamp time;
        double value;
    };

    const std::vector<Row>& rows_of(const Uuid& id) const {
        auto it = series_.find(id);
        if (it == series_.end()) throw NotFoundError("unknown series " + id.str());
        return it->second;
    }

    std::optional<double> lookup(const Uuid& id, Timestamp t) const {
        auto it = series_.find(id);
        if (it == series_.end()) return std::nullopt;
        const auto& rows = it->second;
        auto r = std::lower_bound(rows.begin(), rows.end(), t, [](const Row& row, Timestamp x) { return row.time < x; });
        if (r != rows.end() && r->time == t) return r->value;
        return std::nullopt;
    }

    void apply(const Sample& s) {
        auto& rows = series_[s.series_id];
        if (rows.empty() || rows.back().time < s.time) {
            rows.push_back(Row{s.time, s.value});
        } else {
            auto pos = std::lower_bound(rows.begin(), rows.end(), s.time,
                                        [](const Row& row, Timestamp x) { return row.time < x; });
            if (pos != rows.end() && pos->time == s.time) return;
            rows.insert(pos, Row{s.time, s.value});
        }
        ++total_;
    }

    static InvariantError conflict(const Sample& s, double existing) {
        return InvariantError(fmt::format("conflicting duplicate for ({}, {}): {} vs {}", format_iso(s.time),
                                          s.series_id.str(), format_value(existing), format_value(s.value)));
    }

    std::filesystem::path path_;
    bool read_only_ = false;
    mutable std::shared_mutex mutex_;
    std::unordered_map<Uuid, std::vector<Row>> series_;
    std::size_t total_ = 0;
};

} // namespace htwin
