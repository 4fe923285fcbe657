#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heritage_twin/analytics.hpp"
#include "heritage_twin/cli/support.hpp"
#include "heritage_twin/cli/svg.hpp"

namespace htwin::cli {

inline constexpr std::array<std::string_view, 10> kReportKinds = {
    "timeplot", "floor-latest", "daily-distribution", "mr-compare", "mold-risk",
    "en15757",  "ccf",          "corr-matrix",        "mwu",        "gwl-change",
};

struct ReportOptions {
    std::string kind;
    std::filesystem::path out_dir = "report";
    std::string from, to;
    std::vector<std::string> series;  // ROOM:PARAM[:ChN] or uuid
    std::vector<std::string> rooms;
    std::vector<std::string> floors;
    std::string parameter;
    std::string month;                // YYYY-MM
    std::string x, y;
    std::string x_from, x_to, y_from, y_to;
    std::string outdoor = std::string(sim::kOutdoorRoom);
    int max_lag = -1;                 // -1: from config
    bool hourly = false;              // timeplot resolution
    std::optional<bool> cleaned;      // default: timeplot raw, analyses cleaned
    bool svg = false;
};

// Files are collected first and written together at the end, so a failing
// analysis leaves no half-written report behind.
struct ReportOutput {
    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::string> summary;

    void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
    void line(std::string s) { summary.push_back(std::move(s)); }

    std::string summary_text() const {
        std::string s;
        for (const auto& l : summary) s += l + "\n";
        return s;
    }

    void write(const std::filesystem::path& dir) const {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create report directory '" + dir.string() + "': " + ec.message());
        for (const auto& [name, content] : files) atomic_write(dir / name, content);
        atomic_write(dir / "summary.txt", summary_text());
    }
};

namespace detail {

struct ReportEnv {
    const graph::Graph& g;
    const Store& store;
    const Settings& settings;
    const ReportOptions& opt;
    TimeRange range;
};

inline SvgLine svg_series(const std::string& label, const analytics::HourlySeries& s, Timestamp origin) {
    SvgLine l{label, {}, {}};
    for (const auto& p : s.points()) {
        l.x.push_back(static_cast<double>((p.time - origin).count()) / static_cast<double>(kHour.count()));
        l.y.push_back(p.value);
    }
    return l;
}

inline std::vector<graph::SeriesMeta> series_selection(const ReportEnv& e, bool allow_rooms = true) {
    std::vector<graph::SeriesMeta> out;
    for (const auto& ref : e.opt.series) out.push_back(resolve_series_ref(e.g, ref));
    if (allow_rooms) {
        std::optional<ParameterKind> only;
        if (!e.opt.parameter.empty()) {
            only = try_parameter_from_name(e.opt.parameter);
            if (!only) throw UsageError("unknown parameter '" + e.opt.parameter + "'");
        }
        for (const auto& room : rooms_selected(e.g, e.opt.rooms, e.opt.floors))
            for (const auto& m : e.g.series_in_room(room))
                if (!only || m.parameter == *only) out.push_back(m);
    }
    if (out.empty()) throw UsageError("report " + e.opt.kind + ": the selection names no series (use --series, --room or --floor)");
    return out;
}

inline graph::SeriesMeta single_room_series(const ReportEnv& e, ParameterKind p, const std::string& room) {
    return resolve_series_ref(e.g, room + ":" + std::string(name_of(p)));
}

inline std::string single_room(const ReportEnv& e) {
    if (e.opt.rooms.size() != 1) throw UsageError("report " + e.opt.kind + " needs exactly one --room");
    return e.opt.rooms.front();
}

inline bool cleaned(const ReportEnv& e) { return e.opt.cleaned.value_or(true); }

// ---------------------------------------------------------------------------

inline ReportOutput timeplot(const ReportEnv& e) {
    const auto sel = series_selection(e);
    const bool clean = e.opt.cleaned.value_or(false);
    ReportOutput out;
    out.line(fmt::format("timeplot: {} series, {} .. {}, {} {}", sel.size(), format_iso(e.range.from), format_iso(e.range.to),
                         e.opt.hourly ? "hourly" : "raw", clean ? "cleaned" : "as stored"));
    for (const auto& m : sel) {
        const auto rows = e.store.has_series(m.series_id)
                              ? e.store.select(ExportSeries{m.series_id, m.parameter}, e.range.from, e.range.to,
                                               e.opt.hourly ? Resolution::Hourly : Resolution::Raw, clean, e.settings.cleaning)
                              : std::vector<Sample>{};
        const auto label = series_label(e.g, m);
        out.add(label + ".csv", write_csv(rows));
        if (rows.empty()) {
            out.line(fmt::format("  {}: no data", label));
            continue;
        }
        double lo = rows[0].value, hi = rows[0].value, sum = 0;
        for (const auto& r : rows) {
            lo = std::min(lo, r.value);
            hi = std::max(hi, r.value);
            sum += r.value;
        }
        out.line(fmt::format("  {} [{}]: n={} min={} mean={} max={}", label, unit_of(m.parameter), rows.size(), num(lo),
                             num(sum / static_cast<double>(rows.size())), num(hi)));
        if (e.opt.svg) {
            SvgLine l{label, {}, {}};
            for (const auto& r : rows) {
                l.x.push_back(static_cast<double>((r.time - rows.front().time).count()) / static_cast<double>(kHour.count()));
                l.y.push_back(r.value);
            }
            out.add(label + ".svg", render_svg({label, "hours since " + format_iso(rows.front().time),
                                                std::string(unit_of(m.parameter)), {l}, {}}));
        }
    }
    return out;
}

inline ReportOutput floor_latest(const ReportEnv& e) {
    if (e.opt.floors.size() != 1) throw UsageError("report floor-latest needs exactly one --floor");
    if (e.opt.parameter.empty()) throw UsageError("report floor-latest needs --parameter");
    const auto p = try_parameter_from_name(e.opt.parameter);
    if (!p) throw UsageError("unknown parameter '" + e.opt.parameter + "'");
    const auto rooms = rooms_selected(e.g, {}, e.opt.floors);
    ReportOutput out;
    out.line(fmt::format("floor-latest: {} on {} ({} rooms)", name_of(*p), e.opt.floors[0], rooms.size()));
    std::string table = "room\tpoint\ttime\tvalue\n";
    std::vector<Sample> latest;
    for (const auto& room : rooms) {
        const auto series = e.g.resolve_series(room, *p);
        if (series.empty()) {
            out.line(fmt::format("  {}: no {} sensor", e.g.local_name(room), name_of(*p)));
            continue;
        }
        for (const auto& m : series) {
            if (!e.store.has_series(m.series_id) || e.store.count(m.series_id) == 0) {
                out.line(fmt::format("  {}: no data", series_label(e.g, m)));
                continue;
            }
            const auto s = e.store.latest(m.series_id);
            latest.push_back(s);
            table += fmt::format("{}\t{}\t{}\t{}\n", e.g.local_name(room), series_label(e.g, m), format_iso(s.time), format_value(s.value));
            out.line(fmt::format("  {}: {} {} at {}", series_label(e.g, m), num(s.value), unit_of(*p), format_iso(s.time)));
        }
    }
    out.add("floor_latest.tsv", table);
    out.add("floor_latest.csv", write_csv(latest));
    return out;
}

inline ReportOutput daily_distribution(const ReportEnv& e) {
    const auto sel = series_selection(e);
    if (sel.size() != 1) throw UsageError("report daily-distribution needs exactly one series");
    int year = 0;
    unsigned month = 0;
    if (e.opt.month.size() != 7 || e.opt.month[4] != '-' ||
        std::sscanf(e.opt.month.c_str(), "%4d-%2u", &year, &month) != 2 || month < 1 || month > 12)
        throw UsageError("--month must be YYYY-MM");
    const auto& m = sel.front();
    const auto days = e.store.has_series(m.series_id) ? e.store.daily_distribution(m.series_id, year, month) : std::vector<DailyBox>{};
    ReportOutput out;
    out.line(fmt::format("daily-distribution: {} in {} ({} days with data)", series_label(e.g, m), e.opt.month, days.size()));
    std::string table = "day\tn\tmin_whisker\tq1\tmedian\tq3\tmax_whisker\n";
    for (const auto& d : days) {
        const auto& b = d.stats;
        table += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", format_date(d.day), b.n, format_value(b.min_whisker), format_value(b.q1),
                             format_value(b.median), format_value(b.q3), format_value(b.max_whisker));
        out.line(fmt::format("  {}: median {} IQR [{}, {}] whiskers [{}, {}] n={}", format_date(d.day), num(b.median), num(b.q1),
                             num(b.q3), num(b.min_whisker), num(b.max_whisker), b.n));
    }
    out.add("daily_distribution.tsv", table);
    return out;
}

inline int floor_rank(const graph::Graph& g, const graph::Iri& room) {
    const auto f = g.floor_of(room);
    if (!f) return 99;
    const auto name = g.local_name(*f);
    for (std::size_t i = 0; i < sim::kFloors.size(); ++i)
        if (sim::kFloors[i] == name) return static_cast<int>(i);
    return 50;
}

inline ReportOutput mr_compare(const ReportEnv& e) {
    const std::string outdoor = e.opt.outdoor;
    const auto ot = single_room_series(e, ParameterKind::Temperature, outdoor);
    const auto orh = single_room_series(e, ParameterKind::RelativeHumidity, outdoor);
    const auto op = single_room_series(e, ParameterKind::Pressure, outdoor);
    std::vector<graph::Iri> rooms = rooms_selected(e.g, e.opt.rooms, e.opt.floors);
    if (rooms.empty())
        for (const auto& r : e.g.instances_of(graph::vocab::kRoom))
            if (r != e.g.expand(outdoor)) rooms.push_back(r);
    std::vector<std::pair<graph::Iri, std::pair<graph::SeriesMeta, graph::SeriesMeta>>> indoor;
    for (const auto& r : rooms) {
        const auto t = e.g.resolve_series(r, ParameterKind::Temperature);
        const auto rh = e.g.resolve_series(r, ParameterKind::RelativeHumidity);
        if (t.size() == 1 && rh.size() == 1) indoor.push_back({r, {t[0], rh[0]}});
        else if (!e.opt.rooms.empty()) throw UsageError("room " + e.g.local_name(r) + " lacks a single temperature and RH series");
    }
    std::stable_sort(indoor.begin(), indoor.end(),
                     [&](const auto& a, const auto& b) { return floor_rank(e.g, a.first) < floor_rank(e.g, b.first); });
    if (indoor.empty()) throw UsageError("mr-compare: no indoor room with temperature and RH");

    const bool clean = cleaned(e);
    const auto out_mr = analytics::outdoor_mr(load_hourly(e.store, ot, e.range, e.settings, clean),
                                              load_hourly(e.store, orh, e.range, e.settings, clean),
                                              load_hourly(e.store, op, e.range, e.settings, clean));
    ReportOutput out;
    out.line(fmt::format("mr-compare: 7-day MA indoor MR minus outdoor MR (g/kg), {} rooms", indoor.size()));
    std::string table = "floor\troom\tn\tmin_whisker\tq1\tmedian\tq3\tmax_whisker\tshare_positive\n";
    std::map<int, std::pair<std::string, std::vector<double>>> per_floor;
    SvgChart chart{"7-day MA indoor - outdoor MR", "hours", "g/kg", {}, {0.0}};
    auto row = [&](const std::string& floor, const std::string& room, const std::vector<double>& v) {
        const auto b = boxplot(v);
        const double share = static_cast<double>(std::count_if(v.begin(), v.end(), [](double d) { return d > 0; })) /
                             static_cast<double>(v.size());
        table += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", floor, room, b.n, format_value(b.min_whisker), format_value(b.q1),
                             format_value(b.median), format_value(b.q3), format_value(b.max_whisker), format_value(share));
        out.line(fmt::format("  {:>8} {:<10} median {:>8} IQR [{}, {}] above outdoor {}% of hours", floor, room, num(b.median), num(b.q1),
                             num(b.q3), num(100 * share)));
    };
    for (const auto& [room, tr] : indoor) {
        const auto in_mr = analytics::indoor_mr(load_hourly(e.store, tr.first, e.range, e.settings, clean),
                                                load_hourly(e.store, tr.second, e.range, e.settings, clean), e.settings.analysis);
        const auto diff = analytics::mr_difference(in_mr, out_mr, e.settings.analysis);
        const auto floor = e.g.floor_of(room);
        const std::string floor_name = floor ? e.g.local_name(*floor) : "?";
        const auto v = diff.values();
        row(floor_name, e.g.local_name(room), v);
        auto& pf = per_floor[floor_rank(e.g, room)];
        pf.first = floor_name;
        pf.second.insert(pf.second.end(), v.begin(), v.end());
        out.add(e.g.local_name(room) + "_mr_diff.csv", series_csv(diff, derived_id(tr.second.series_id, "mr-diff")));
        if (e.opt.svg) chart.lines.push_back(svg_series(e.g.local_name(room), diff, diff.front_time()));
    }
    out.line("  per floor:");
    for (const auto& [_, pf] : per_floor) row(pf.first, "*", pf.second);
    out.add("mr_compare.tsv", table);
    if (e.opt.svg) out.add("mr_compare.svg", render_svg(chart));
    return out;
}

inline ReportOutput mold_risk(const ReportEnv& e) {
    const auto room = single_room(e);
    const auto t = single_room_series(e, ParameterKind::Temperature, room);
    const auto rh = single_room_series(e, ParameterKind::RelativeHumidity, room);
    const auto ts = load_hourly(e.store, t, e.range, e.settings, cleaned(e));
    const auto rs = load_hourly(e.store, rh, e.range, e.settings, cleaned(e));
    const auto r = analytics::mold_risk(ts, rs);
    ReportOutput out;
    out.line(fmt::format("mold-risk: {} risky fraction {} ({} of {} hours above the LIM curve)", room, num(r.risky_fraction()),
                         r.flagged.size(), r.total));
    std::string table = "time\ttemperature\trh\tlim\n";
    std::vector<analytics::HourlyPoint> risky;
    for (const auto& f : r.flagged) {
        table += fmt::format("{}\t{}\t{}\t{}\n", format_iso(f.time), format_value(f.temperature), format_value(f.rh), format_value(f.lim));
        risky.push_back({f.time, f.rh});
    }
    out.add(room + "_mold_flagged.tsv", table);
    out.add(room + "_mold_risky_rh.csv", series_csv(analytics::HourlySeries(risky), derived_id(rh.series_id, "mold-risky")));
    if (e.opt.svg) {
        std::vector<analytics::HourlyPoint> lim;
        const auto a = analytics::align(ts, rs);
        for (std::size_t i = 0; i < a.times.size(); ++i) lim.push_back({a.times[i], analytics::lim_curve(a.x[i])});
        const analytics::HourlySeries ls(lim);
        out.add(room + "_mold.svg", render_svg({"RH vs LIM curve, " + room, "hours", "%RH",
                                                {svg_series("RH", rs, a.times.front()), svg_series("LIM", ls, a.times.front())}, {}}));
    }
    return out;
}

inline ReportOutput en15757(const ReportEnv& e) {
    graph::SeriesMeta m;
    if (!e.opt.series.empty()) {
        if (e.opt.series.size() != 1) throw UsageError("report en15757 takes one --series");
        m = resolve_series_ref(e.g, e.opt.series[0]);
    } else {
        m = single_room_series(e, ParameterKind::RelativeHumidity, single_room(e));
    }
    const auto rh = load_hourly(e.store, m, e.range, e.settings, cleaned(e));
    const auto band = analytics::en15757_band(rh, e.settings.analysis);
    const auto label = series_label(e.g, m);
    std::vector<analytics::HourlyPoint> cma, lo, hi, risky;
    for (const auto& p : band.points) {
        cma.push_back({p.time, p.cma});
        lo.push_back({p.time, p.lower});
        hi.push_back({p.time, p.upper});
        if (p.risky) risky.push_back({p.time, p.rh});
    }
    ReportOutput out;
    out.line(fmt::format("en15757: {}", label));
    out.line(fmt::format("  annual mean RH {} %", num(band.annual_mean)));
    out.line(fmt::format("  fluctuation offsets: lower {}{} upper {}{} (percentiles {} / {})", num(band.lower_offset),
                         band.lower_widened ? " (widened)" : "", num(band.upper_offset), band.upper_widened ? " (widened)" : "",
                         num(e.settings.analysis.fluct_percentiles[0]), num(e.settings.analysis.fluct_percentiles[1])));
    out.line(fmt::format("  band coverage {} % of {} hours", num(100 * band.coverage()), band.input_points));
    out.line(fmt::format("  {} risky points ({} %)", band.risky_count, num(100 * band.risky_fraction())));
    out.add(label + "_rh.csv", series_csv(rh, m.series_id));
    out.add(label + "_cma.csv", series_csv(analytics::HourlySeries(cma), derived_id(m.series_id, "cma")));
    out.add(label + "_lower.csv", series_csv(analytics::HourlySeries(lo), derived_id(m.series_id, "band-lower")));
    out.add(label + "_upper.csv", series_csv(analytics::HourlySeries(hi), derived_id(m.series_id, "band-upper")));
    out.add(label + "_risky.csv", series_csv(analytics::HourlySeries(risky), derived_id(m.series_id, "band-risky")));
    if (e.opt.svg) {
        const auto origin = rh.front_time();
        out.add(label + "_en15757.svg",
                render_svg({"EN 15757 safe band, " + label, "hours", "%RH",
                            {svg_series("RH", rh, origin), svg_series("CMA", analytics::HourlySeries(cma), origin),
                             svg_series("lower", analytics::HourlySeries(lo), origin), svg_series("upper", analytics::HourlySeries(hi), origin)},
                            {}}));
    }
    return out;
}

inline TimeRange side_range(const ReportEnv& e, const std::string& from, const std::string& to) {
    TimeRange r = e.range;
    if (!from.empty()) r.from = parse_time_flag("--x-from/--y-from", from);
    if (!to.empty()) r.to = parse_time_flag("--x-to/--y-to", to);
    if (!(r.from < r.to)) throw UsageError("empty time range");
    return r;
}

inline std::pair<graph::SeriesMeta, graph::SeriesMeta> xy(const ReportEnv& e) {
    if (e.opt.x.empty() || e.opt.y.empty()) throw UsageError("report " + e.opt.kind + " needs --x and --y series");
    return {resolve_series_ref(e.g, e.opt.x), resolve_series_ref(e.g, e.opt.y)};
}

inline ReportOutput ccf(const ReportEnv& e) {
    const auto [mx, my] = xy(e);
    const int max_lag = e.opt.max_lag >= 0 ? e.opt.max_lag : e.settings.analysis.ccf_max_lag_hours;
    const auto x = load_hourly(e.store, mx, e.range, e.settings, cleaned(e));
    const auto y = load_hourly(e.store, my, e.range, e.settings, cleaned(e));
    const auto r = analytics::ccf(x, y, max_lag, e.settings.analysis);
    ReportOutput out;
    out.line(fmt::format("ccf: x={} y={} (value at lag k correlates x(t) with y(t+k))", series_label(e.g, mx), series_label(e.g, my)));
    out.line(fmt::format("  argmax lag {} h, value {}, confidence half-width {} (N={})", r.argmax_lag, num(r.max_value()),
                         num(r.conf_halfwidth), r.n));
    std::string table = "lag_h\tvalue\n";
    SvgLine l{"ccf", {}, {}};
    for (int k = -max_lag; k <= max_lag; ++k) {
        table += fmt::format("{}\t{}\n", k, format_value(r.at(k)));
        l.x.push_back(k);
        l.y.push_back(r.at(k));
    }
    out.add("ccf.tsv", table);
    if (e.opt.svg)
        out.add("ccf.svg", render_svg({"CCF " + series_label(e.g, mx) + " vs " + series_label(e.g, my), "lag (h)", "r", {l},
                                       {r.conf_halfwidth, -r.conf_halfwidth, 0.0}}));
    return out;
}

inline ReportOutput corr_matrix(const ReportEnv& e) {
    const auto sel = series_selection(e);
    std::vector<analytics::HourlySeries> data;
    for (const auto& m : sel) data.push_back(load_hourly(e.store, m, e.range, e.settings, cleaned(e)));
    const auto mat = analytics::correlation_matrix(data);
    ReportOutput out;
    out.line(fmt::format("corr-matrix: {} series", sel.size()));
    std::string table;
    for (const auto& m : sel) table += "\t" + series_label(e.g, m);
    table += "\n";
    std::optional<std::pair<std::size_t, std::size_t>> best;
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < sel.size(); ++i) {
        table += series_label(e.g, sel[i]);
        for (std::size_t j = 0; j < sel.size(); ++j) {
            const auto& v = mat(i, j);
            table += "\t" + (v ? format_value(*v) : std::string("NA"));
            if (j > i) {
                if (!v) ++flagged;
                else if (!best || std::abs(*v) > std::abs(*mat(best->first, best->second))) best = {i, j};
            }
        }
        table += "\n";
    }
    if (best) {
        const double r = *mat(best->first, best->second);
        out.line(fmt::format("  strongest pair {} / {}: r = {} ({})", series_label(e.g, sel[best->first]),
                             series_label(e.g, sel[best->second]), num(r), analytics::label(analytics::classify_r(r, e.settings.analysis))));
    }
    out.line(fmt::format("  {} undefined entries (constant series or < 2 common hours)", flagged));
    out.add("corr_matrix.tsv", table);
    return out;
}

inline ReportOutput mwu(const ReportEnv& e) {
    const auto [mx, my] = xy(e);
    const auto x = load_hourly(e.store, mx, side_range(e, e.opt.x_from, e.opt.x_to), e.settings, cleaned(e));
    const auto y = load_hourly(e.store, my, side_range(e, e.opt.y_from, e.opt.y_to), e.settings, cleaned(e));
    const auto r = analytics::mann_whitney(x.values(), y.values(), e.settings.analysis);
    ReportOutput out;
    out.line(fmt::format("mwu: x={} (n={}) y={} (n={})", series_label(e.g, mx), x.size(), series_label(e.g, my), y.size()));
    out.line(fmt::format("  U_x {} U_y {} p {} ({}) -> {} at alpha {}", num(r.u_x), num(r.u_y), num(r.p), name_of(r.method),
                         r.significant ? "significant" : "not significant", num(e.settings.analysis.significance)));
    out.add("mwu.tsv", fmt::format("u_x\tu_y\tp\tmethod\tsignificant\n{}\t{}\t{}\t{}\t{}\n", format_value(r.u_x), format_value(r.u_y),
                                   format_value(r.p), name_of(r.method), r.significant));
    return out;
}

inline ReportOutput gwl_change(const ReportEnv& e) {
    std::vector<graph::SeriesMeta> sel;
    for (const auto& m : series_selection(e))
        if (m.parameter == ParameterKind::GroundwaterLevel) sel.push_back(m);
    if (sel.empty()) throw UsageError("gwl-change: the selection has no groundwater-level series");
    ReportOutput out;
    out.line(fmt::format("gwl-change: {} series (mm/h)", sel.size()));
    SvgChart chart{"Hourly GWL change", "hours", "mm/h", {}, {0.0}};
    for (const auto& m : sel) {
        const auto d = analytics::gwl_hourly_change(load_hourly(e.store, m, e.range, e.settings, cleaned(e)));
        const auto label = series_label(e.g, m);
        out.add(label + "_change.csv", series_csv(d, derived_id(m.series_id, "hourly-change")));
        if (d.empty()) {
            out.line(fmt::format("  {}: no consecutive hours", label));
            continue;
        }
        const auto it = std::max_element(d.points().begin(), d.points().end(),
                                          [](const auto& a, const auto& b) { return std::abs(a.value) < std::abs(b.value); });
        out.line(fmt::format("  {}: largest change {} mm/h at {}", label, num(it->value), format_iso(it->time)));
        if (e.opt.svg) chart.lines.push_back(svg_series(label, d, d.front_time()));
    }
    if (e.opt.svg) out.add("gwl_change.svg", render_svg(chart));
    return out;
}

} // namespace detail

inline ReportOutput build_report(const graph::Graph& g, const Store& store, const Settings& settings, const ReportOptions& opt) {
    const detail::ReportEnv e{g, store, settings, opt, parse_range(opt.from, opt.to)};
    const auto& k = opt.kind;
    if (k == "timeplot") return detail::timeplot(e);
    if (k == "floor-latest") return detail::floor_latest(e);
    if (k == "daily-distribution") return detail::daily_distribution(e);
    if (k == "mr-compare") return detail::mr_compare(e);
    if (k == "mold-risk") return detail::mold_risk(e);
    if (k == "en15757") return detail::en15757(e);
    if (k == "ccf") return detail::ccf(e);
    if (k == "corr-matrix") return detail::corr_matrix(e);
    if (k == "mwu") return detail::mwu(e);
    if (k == "gwl-change") return detail::gwl_change(e);
    throw UsageError("unknown report kind '" + k + "'");
}

} // namespace htwin::cli
