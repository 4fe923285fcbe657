#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"

#include "heritage_twin/analytics/config.hpp"
#include "heritage_twin/analytics/series.hpp"
#include "heritage_twin/contextgraph/topology.hpp"
#include "heritage_twin/edgesim/case_study.hpp"
#include "heritage_twin/gateway/telemetry.hpp"
#include "heritage_twin/tstore/clean.hpp"
#include "heritage_twin/tstore/csv.hpp"
#include "heritage_twin/tstore/store.hpp"

namespace htwin::cli {

enum ExitCode : int { kOk = 0, kAnalysisError = 1, kUsageError = 2, kIoError = 3 };

// Bad flags or a selection that names nothing in the graph.
class UsageError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Writes through a sibling temp file and renames it into place.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += fmt::format(".tmp{}", std::random_device{}());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Everything --config can set. The file is JSON with optional sections
// "analysis", "cleaning" and "gateway".
struct Settings {
    analytics::AnalysisConfig analysis;
    CleaningBounds cleaning = CleaningBounds::defaults();
    FrameOptions frames;

    static Settings from_json(const nlohmann::json& j) {
        Settings s;
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        try {
            for (const auto& [key, v] : j.items()) {
                if (key == "analysis") {
                    s.analysis = analytics::AnalysisConfig::from_json(v);
                } else if (key == "cleaning") {
                    for (const auto& [ck, cv] : v.items()) {
                        auto millis = [&] { return Millis{static_cast<long>(cv.get<double>() * 1000.0)}; };
                        if (ck == "raw_cadence_s") s.cleaning.raw_cadence = millis();
                        else if (ck == "raw_max_gap_s") s.cleaning.raw_max_gap = millis();
                        else if (ck == "hourly_max_gap_s") s.cleaning.hourly_max_gap = millis();
                        else if (ck == "bounds") {
                            for (const auto& [pk, pv] : cv.items()) {
                                const auto b = pv.get<std::array<double, 2>>();
                                s.cleaning.bounds[parameter_from_name(pk)] = Bounds{b[0], b[1]};
                            }
                        } else {
                            throw ConfigError("unknown cleaning key '" + ck + "'");
                        }
                    }
                    s.cleaning.validate();
                } else if (key == "gateway") {
                    for (const auto& [gk, gv] : v.items()) {
                        if (gk == "lenient") s.frames.lenient = gv.get<bool>();
                        else if (gk == "allowed_skew_ms") s.frames.allowed_skew = Millis{gv.get<long>()};
                        else throw ConfigError("unknown gateway key '" + gk + "'");
                    }
                } else {
                    throw ConfigError("unknown config section '" + key + "'");
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        } catch (const ParseError& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        return s;
    }

    static Settings load(const std::string& path) {
        if (path.empty()) return {};
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config '" + path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config '" + path + "': " + e.what());
        }
        return from_json(j);
    }
};

// --graph FILE, or the built-in case-study topology when no file is given.
inline graph::Graph load_graph(const std::string& path) {
    if (path.empty()) return sim::case_study_topology();
    std::ifstream probe(path);
    if (!probe) throw ConfigError("cannot open graph '" + path + "'");
    try {
        return graph::load_topology_file(path);
    } catch (const ParseError& e) {
        throw ConfigError("graph '" + path + "': " + e.what());
    } catch (const InvariantError& e) {
        throw ConfigError("graph '" + path + "': " + e.what());
    }
}

// Times on the command line are ISO 8601 with an explicit zone.
inline Timestamp parse_time_flag(const std::string& flag, const std::string& value) {
    try {
        return parse_iso(value);
    } catch (const ParseError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

struct TimeRange {
    Timestamp from = make_time(1970, 1, 1);
    Timestamp to = make_time(9999, 1, 1);
};

inline TimeRange parse_range(const std::string& from, const std::string& to) {
    TimeRange r;
    if (!from.empty()) r.from = parse_time_flag("--from", from);
    if (!to.empty()) r.to = parse_time_flag("--to", to);
    if (!(r.from < r.to)) throw UsageError("--from must be earlier than --to");
    return r;
}

// A series named on the command line: a UUID, or ROOM:PARAMETER with an
// optional :ChN suffix for multi-channel points (Room014:GWL:Ch1).
inline graph::SeriesMeta resolve_series_ref(const graph::Graph& g, const std::string& ref) {
    if (auto id = Uuid::try_parse(ref)) {
        if (const auto* m = g.find_series(*id)) return *m;
        throw UsageError("series " + ref + " is not declared in the graph");
    }
    std::vector<std::string> parts;
    std::stringstream ss(ref);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("series reference '" + ref + "' is not ROOM:PARAMETER[:ChN]");
    const auto param = try_parameter_from_name(parts[1]);
    if (!param) throw UsageError("unknown parameter '" + parts[1] + "'");
    const auto room = g.expand(parts[0]);
    std::vector<graph::SeriesMeta> found;
    try {
        found = g.resolve_series(room, *param);
    } catch (const NotFoundError&) {
        throw UsageError("unknown room '" + parts[0] + "'");
    }
    if (parts.size() == 3) {
        std::erase_if(found, [&](const graph::SeriesMeta& m) {
            const auto local = g.local_name(m.point);
            return local.size() < parts[2].size() + 1 ||
                   local.compare(local.size() - parts[2].size() - 1, std::string::npos, "_" + parts[2]) != 0;
        });
    }
    if (found.empty()) throw UsageError("no " + parts[1] + " series in " + parts[0] + (parts.size() == 3 ? " " + parts[2] : ""));
    if (found.size() > 1)
        throw UsageError("'" + ref + "' is ambiguous (" + std::to_string(found.size()) + " channels); add :ChN");
    return found.front();
}

inline std::vector<graph::Iri> rooms_selected(const graph::Graph& g, const std::vector<std::string>& rooms,
                                              const std::vector<std::string>& floors) {
    std::vector<graph::Iri> out;
    for (const auto& r : rooms) {
        const auto iri = g.expand(r);
        if (!g.has_type(iri, graph::vocab::kRoom)) throw UsageError("unknown room '" + r + "'");
        out.push_back(iri);
    }
    for (const auto& f : floors) {
        try {
            for (auto& r : g.rooms_on_floor(g.expand(f))) out.push_back(r);
        } catch (const NotFoundError&) {
            throw UsageError("unknown floor '" + f + "'");
        }
    }
    return out;
}

inline std::string series_label(const graph::Graph& g, const graph::SeriesMeta& m) { return g.local_name(m.point); }

// Hourly means over [from, to); cleaned (outlier filter + gap filling) unless raw.
inline analytics::HourlySeries load_hourly(const Store& store, const graph::SeriesMeta& m, const TimeRange& range,
                                           const Settings& settings, bool cleaned = true) {
    if (!store.has_series(m.series_id)) return analytics::HourlySeries({}, std::string(unit_of(m.parameter)), m.series_id);
    const auto rows = store.select(ExportSeries{m.series_id, m.parameter}, range.from, range.to, Resolution::Hourly, cleaned,
                                   settings.cleaning);
    std::vector<analytics::HourlyPoint> pts;
    pts.reserve(rows.size());
    for (const auto& r : rows) pts.push_back({r.time, r.value});
    return analytics::HourlySeries(std::move(pts), std::string(unit_of(m.parameter)), m.series_id);
}

// Derived series keep a stable id of their own so they can share the
// store's CSV dialect.
inline Uuid derived_id(const Uuid& source, std::string_view tag) { return Uuid::from_name(source.str() + "/" + std::string(tag)); }

inline std::string series_csv(const analytics::HourlySeries& s, const Uuid& id) {
    std::vector<Sample> rows;
    rows.reserve(s.size());
    for (const auto& p : s.points()) rows.push_back({id, p.time, p.value});
    return write_csv(std::move(rows));
}

inline std::string num(double v) { return fmt::format("{:.6g}", v); }

} // namespace htwin::cli
