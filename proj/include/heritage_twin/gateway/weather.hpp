#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "heritage_twin/contextgraph/graph.hpp"
#include "heritage_twin/core/parameter.hpp"
#include "heritage_twin/tstore/store.hpp"

namespace htwin {

// One hourly observation from the external weather service.
struct WeatherRecord {
    Timestamp time;
    double dry_bulb = 0.0;       // degC
    double rh = 0.0;             // %
    double dew_point = 0.0;      // degC
    double precipitation = 0.0;  // mm/h
    double pressure = 0.0;       // hPa

    friend bool operator==(const WeatherRecord&, const WeatherRecord&) = default;
};

// Empty string when the record is acceptable, otherwise the reason.
inline std::string weather_violation(const WeatherRecord& r) {
    for (double v : {r.dry_bulb, r.rh, r.dew_point, r.precipitation, r.pressure})
        if (!std::isfinite(v)) return "non-finite field";
    if (!is_hour_aligned(r.time)) return "time not on the hour";
    if (r.rh < 0.0 || r.rh > 100.0) return "rh outside [0, 100]";
    if (r.precipitation < 0.0) return "negative precipitation";
    if (r.pressure < 850.0 || r.pressure > 1100.0) return "pressure outside [850, 1100]";
    return {};
}

struct WeatherFetch {
    std::vector<WeatherRecord> records;  // ascending, one per hour
    std::size_t skipped = 0;
    std::vector<std::string> problems;   // one entry per skipped record
};

class WeatherSource {
public:
    virtual ~WeatherSource() = default;
    // Records with from <= time < to. Throws IoError when the source is unavailable.
    virtual WeatherFetch fetch(Timestamp from, Timestamp to) = 0;
};

namespace detail {

inline void finalize(WeatherFetch& f, std::vector<WeatherRecord> candidates, Timestamp from, Timestamp to) {
    std::map<Timestamp, WeatherRecord> by_hour;
    for (auto& r : candidates) {
        if (r.time < from || r.time >= to) continue;
        if (auto why = weather_violation(r); !why.empty()) {
            ++f.skipped;
            f.problems.push_back(format_iso(r.time) + ": " + why);
            continue;
        }
        if (!by_hour.emplace(r.time, r).second) {
            ++f.skipped;
            f.problems.push_back(format_iso(r.time) + ": duplicate hour");
        }
    }
    for (auto& [_, r] : by_hour) f.records.push_back(r);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto p = s.find(sep, start);
        out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) return out;
        start = p + 1;
    }
}

} // namespace detail

inline constexpr std::string_view kWeatherCsvHeader = "time,temp,rh,dewpoint,precip,pressure";

// CSV fixture `time,temp,rh,dewpoint,precip,pressure`, ISO 8601 hours.
// Rows that fail to parse are skipped and counted like invalid records.
class FixtureWeatherSource : public WeatherSource {
public:
    static FixtureWeatherSource from_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("weather fixture '" + path + "' not found");
        std::ostringstream ss;
        ss << in.rdbuf();
        return FixtureWeatherSource(ss.str());
    }

    explicit FixtureWeatherSource(std::string text) : text_(std::move(text)) {}

    WeatherFetch fetch(Timestamp from, Timestamp to) override {
        WeatherFetch f;
        std::vector<WeatherRecord> rows;
        std::size_t lineno = 0;
        for (auto line : detail::split(text_, '\n')) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (lineno == 1) {
                if (line != kWeatherCsvHeader)
                    throw ParseError("weather fixture header must be '" + std::string(kWeatherCsvHeader) + "'", 1);
                continue;
            }
            if (line.empty()) continue;
            const auto cols = detail::split(line, ',');
            try {
                if (cols.size() != 6) throw ParseError("expected 6 columns");
                WeatherRecord r;
                r.time = parse_iso(cols[0]);
                double* fields[] = {&r.dry_bulb, &r.rh, &r.dew_point, &r.precipitation, &r.pressure};
                for (int i = 0; i < 5; ++i) {
                    const auto c = cols[i + 1];
                    auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), *fields[i]);
                    if (ec != std::errc{} || p != c.data() + c.size()) throw ParseError("bad number '" + std::string(c) + "'");
                }
                rows.push_back(r);
            } catch (const ParseError& e) {
                ++f.skipped;
                f.problems.push_back("line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        if (lineno == 0 || text_.empty()) throw ParseError("empty weather fixture");
        detail::finalize(f, std::move(rows), from, to);
        return f;
    }

private:
    std::string text_;
};

// Generic HTTP+JSON endpoint. `path_template` may contain `{from}` and `{to}`
// (replaced by ISO times); `records_pointer` is a JSON pointer to the array
// of observations and `fields` maps our field names (time, temp, rh,
// dewpoint, precip, pressure) to the service's keys.
struct HttpWeatherMapping {
    std::string records_pointer = "/records";
    std::map<std::string, std::string> fields = {{"time", "time"},     {"temp", "temp"},     {"rh", "rh"},
                                                 {"dewpoint", "dewpoint"}, {"precip", "precip"}, {"pressure", "pressure"}};

    static HttpWeatherMapping from_json(const nlohmann::json& j) {
        HttpWeatherMapping m;
        if (j.contains("records")) m.records_pointer = j.at("records").get<std::string>();
        if (j.contains("fields"))
            for (auto& [k, v] : j.at("fields").items()) {
                if (!m.fields.count(k)) throw ConfigError("unknown weather field '" + k + "'");
                m.fields[k] = v.get<std::string>();
            }
        return m;
    }
};

class HttpWeatherSource : public WeatherSource {
public:
    HttpWeatherSource(std::string base_url, std::string path_template, HttpWeatherMapping mapping = {})
        : base_url_(std::move(base_url)), path_template_(std::move(path_template)), mapping_(std::move(mapping)) {}

    WeatherFetch fetch(Timestamp from, Timestamp to) override {
        std::string path = path_template_;
        auto substitute = [&](const std::string& key, const std::string& value) {
            for (auto p = path.find(key); p != std::string::npos; p = path.find(key, p + value.size()))
                path.replace(p, key.size(), value);
        };
        substitute("{from}", format_iso(from));
        substitute("{to}", format_iso(to));

        httplib::Client cli(base_url_);
        cli.set_connection_timeout(5);
        cli.set_read_timeout(15);
        auto res = cli.Get(path);
        if (!res) throw IoError("weather source unavailable: " + httplib::to_string(res.error()));
        if (res->status != 200) throw IoError("weather source returned HTTP " + std::to_string(res->status));

        WeatherFetch f;
        std::vector<WeatherRecord> rows;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw IoError(std::string("weather source sent invalid JSON: ") + e.what());
        }
        const nlohmann::json* arr = nullptr;
        try {
            arr = &doc.at(nlohmann::json::json_pointer(mapping_.records_pointer));
        } catch (const nlohmann::json::exception&) {
            throw IoError("weather response has no array at " + mapping_.records_pointer);
        }
        if (!arr->is_array()) throw IoError("weather response has no array at " + mapping_.records_pointer);
        for (const auto& item : *arr) {
            try {
                WeatherRecord r;
                r.time = parse_iso(item.at(mapping_.fields.at("time")).get<std::string>());
                r.dry_bulb = item.at(mapping_.fields.at("temp")).get<double>();
                r.rh = item.at(mapping_.fields.at("rh")).get<double>();
                r.dew_point = item.at(mapping_.fields.at("dewpoint")).get<double>();
                r.precipitation = item.at(mapping_.fields.at("precip")).get<double>();
                r.pressure = item.at(mapping_.fields.at("pressure")).get<double>();
                rows.push_back(r);
            } catch (const std::exception& e) {
                ++f.skipped;
                f.problems.push_back(std::string("record: ") + e.what());
            }
        }
        detail::finalize(f, std::move(rows), from, to);
        return f;
    }

private:
    std::string base_url_;
    std::string path_template_;
    HttpWeatherMapping mapping_;
};

inline std::string write_weather_csv(const std::vector<WeatherRecord>& records) {
    std::string out(kWeatherCsvHeader);
    out.push_back('\n');
    for (const auto& r : records)
        out += fmt::format("{},{},{},{},{},{}\n", format_iso(r.time), format_value(r.dry_bulb), format_value(r.rh),
                           format_value(r.dew_point), format_value(r.precipitation), format_value(r.pressure));
    return out;
}

// Writes records into the five outdoor series the graph declares for `room`.
inline std::size_t store_weather(const std::vector<WeatherRecord>& records, const graph::Graph& g, Store& store,
                                 const graph::Iri& room) {
    auto series_for = [&](ParameterKind p) {
        const auto found = g.resolve_series(room, p);
        if (found.size() != 1)
            throw ConfigError("expected exactly one outdoor " + std::string(name_of(p)) + " series in " + g.compact(room));
        return found.front().series_id;
    };
    const Uuid t = series_for(ParameterKind::Temperature), rh = series_for(ParameterKind::RelativeHumidity),
               dp = series_for(ParameterKind::DewPoint), pr = series_for(ParameterKind::Precipitation),
               pa = series_for(ParameterKind::Pressure);
    std::vector<Sample> batch;
    batch.reserve(records.size() * 5);
    for (const auto& r : records) {
        batch.push_back({t, r.time, r.dry_bulb});
        batch.push_back({rh, r.time, r.rh});
        batch.push_back({dp, r.time, r.dew_point});
        batch.push_back({pr, r.time, r.precipitation});
        batch.push_back({pa, r.time, r.pressure});
    }
    return store.insert_batch(batch);
}

} // namespace htwin
