#pragma once

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <istream>
#include <ostream>
#include <thread>

#include "CLI11.hpp"

#include "heritage_twin/cli/reports.hpp"
#include "heritage_twin/edgesim/fleet_config.hpp"
#include "heritage_twin/edgesim/simulator.hpp"
#include "heritage_twin/gateway/gateway.hpp"
#include "heritage_twin/gateway/tcp_ingest.hpp"
#include "heritage_twin/gateway/weather.hpp"

namespace htwin::cli {

namespace detail {

inline std::atomic<bool> g_interrupted{false};

extern "C" inline void on_signal(int) { g_interrupted = true; }

struct Globals {
    std::string store;
    std::string graph;
    std::string config;
};

inline std::string require_store(const Globals& g) {
    if (g.store.empty()) throw UsageError("this command needs --store PATH");
    return g.store;
}

inline void write_or_print(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") out << content;
    else atomic_write(path, content);
}

} // namespace detail

// Runs one command line. Output goes to `out`, diagnostics to `err`; the
// return value is the process exit code.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Digital-twin data platform for heritage building monitoring", "heritage-twin"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    detail::Globals gl;
    app.add_option("--store", gl.store, "Time-series store file");
    app.add_option("--graph", gl.graph, "Topology file (default: built-in case study)");
    app.add_option("--config", gl.config, "JSON settings (analysis, cleaning, gateway)");

    // topology
    std::string topo_out;
    auto* topology = app.add_subcommand("topology", "Print the context graph in topology syntax");
    topology->add_option("--out", topo_out, "Write to FILE instead of stdout");

    // simulate
    struct {
        std::string from, to, fleet, emit;
        std::uint64_t seed = 1;
        std::optional<double> dropout;
        std::optional<double> cadence_s;
    } sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate the sensor fleet through the gateway into the store");
    simulate->add_option("--from", sim.from, "Start (ISO 8601 with zone)")->required();
    simulate->add_option("--to", sim.to, "End, exclusive")->required();
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_option("--dropout", sim.dropout, "Message dropout probability for every device")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--cadence", sim.cadence_s, "Sampling cadence in seconds for every device")->check(CLI::PositiveNumber);
    simulate->add_option("--fleet", sim.fleet, "Fleet JSON (default: case-study fleet)");
    simulate->add_option("--emit", sim.emit, "Also write the telemetry frames, one per line, to FILE");

    // ingest
    std::string ingest_input;
    std::optional<std::uint16_t> listen;
    double listen_seconds = 0;
    bool lenient = false;
    auto* ingest = app.add_subcommand("ingest", "Ingest telemetry frames (one JSON object per line)");
    ingest->add_option("--input", ingest_input, "Frame file, or - for stdin")->default_str("-");
    ingest->add_option("--listen", listen, "Serve line-delimited TCP on 127.0.0.1:PORT instead");
    ingest->add_option("--duration", listen_seconds, "With --listen: stop after SECONDS (default: until SIGINT/SIGTERM)");
    ingest->add_flag("--lenient", lenient, "Ignore unknown fields in frames");

    // weather
    struct {
        std::string from, to, fixture, url, path, mapping, room = std::string(sim::kOutdoorRoom), save;
    } wx;
    auto* weather = app.add_subcommand("weather", "Load hourly outdoor weather into the store");
    weather->add_option("--from", wx.from, "Start")->required();
    weather->add_option("--to", wx.to, "End, exclusive")->required();
    auto* wx_fixture = weather->add_option("--fixture", wx.fixture, "Weather CSV file");
    auto* wx_url = weather->add_option("--url", wx.url, "HTTP base URL, e.g. http://host:8080");
    weather->add_option("--path", wx.path, "Request path; {from} and {to} are substituted")->needs(wx_url);
    weather->add_option("--mapping", wx.mapping, "JSON file mapping the response layout")->needs(wx_url);
    weather->add_option("--room", wx.room, "Room holding the outdoor series")->capture_default_str();
    weather->add_option("--save-csv", wx.save, "Also write the fetched records as weather CSV");
    wx_fixture->excludes(wx_url);

    // query
    struct {
        std::vector<std::string> series;
        std::string from, to, out;
        bool hourly = false, clean = false, list = false;
    } q;
    auto* query = app.add_subcommand("query", "Print samples of one or more series as CSV");
    query->add_option("--series", q.series, "ROOM:PARAMETER[:ChN] or UUID (repeatable)");
    query->add_option("--from", q.from, "Start");
    query->add_option("--to", q.to, "End, exclusive");
    query->add_flag("--hourly", q.hourly, "Hourly means instead of raw samples");
    query->add_flag("--clean", q.clean, "Outlier filter and gap filling");
    query->add_flag("--list", q.list, "List the graph's series and their sample counts");
    query->add_option("--out", q.out, "Write to FILE");

    // export
    struct {
        std::vector<std::string> series, rooms, floors, parameters;
        std::string from, to, out, resolution = "raw";
        bool clean = false;
    } ex;
    auto* exp = app.add_subcommand("export", "Export a selection in the store's CSV dialect");
    exp->add_option("--series", ex.series, "ROOM:PARAMETER[:ChN] or UUID (repeatable)");
    exp->add_option("--room", ex.rooms, "Room (repeatable)");
    exp->add_option("--floor", ex.floors, "Floor (repeatable)");
    exp->add_option("--parameter", ex.parameters, "Restrict rooms/floors to these parameters (repeatable)");
    exp->add_option("--from", ex.from, "Start");
    exp->add_option("--to", ex.to, "End, exclusive");
    exp->add_option("--resolution", ex.resolution, "raw or hourly")->check(CLI::IsMember({"raw", "hourly"}))->capture_default_str();
    exp->add_flag("--clean", ex.clean, "Outlier filter and gap filling");
    exp->add_option("--out", ex.out, "Write to FILE instead of stdout");

    // import
    std::string import_input;
    auto* imp = app.add_subcommand("import", "Insert a CSV export into the store");
    imp->add_option("--input", import_input, "CSV file, or - for stdin")->required();

    // report
    ReportOptions ro;
    std::string out_dir = "report";
    bool raw_flag = false, clean_flag = false;
    auto* report = app.add_subcommand("report", "Run an analysis and write data files plus summary.txt");
    report->add_option("kind", ro.kind, "Report kind")->required()->check(CLI::IsMember(std::vector<std::string>(kReportKinds.begin(), kReportKinds.end())));
    report->add_option("--out", out_dir, "Output directory")->capture_default_str();
    report->add_option("--from", ro.from, "Start");
    report->add_option("--to", ro.to, "End, exclusive");
    report->add_option("--series", ro.series, "ROOM:PARAMETER[:ChN] or UUID (repeatable)");
    report->add_option("--room", ro.rooms, "Room (repeatable)");
    report->add_option("--floor", ro.floors, "Floor (repeatable)");
    report->add_option("--parameter", ro.parameter, "Parameter filter");
    report->add_option("--month", ro.month, "YYYY-MM (daily-distribution)");
    report->add_option("--x", ro.x, "First series (ccf, mwu)");
    report->add_option("--y", ro.y, "Second series (ccf, mwu)");
    report->add_option("--x-from", ro.x_from, "mwu: start for x");
    report->add_option("--x-to", ro.x_to, "mwu: end for x");
    report->add_option("--y-from", ro.y_from, "mwu: start for y");
    report->add_option("--y-to", ro.y_to, "mwu: end for y");
    report->add_option("--outdoor", ro.outdoor, "Room with the outdoor series (mr-compare)")->capture_default_str();
    report->add_option("--max-lag", ro.max_lag, "ccf: largest lag in hours")->check(CLI::NonNegativeNumber);
    report->add_flag("--hourly", ro.hourly, "timeplot: hourly means");
    report->add_flag("--clean", clean_flag, "Use cleaned data (default for analyses)");
    report->add_flag("--raw", raw_flag, "Use uncleaned data (default for timeplot)");
    report->add_flag("--svg", ro.svg, "Also render SVG charts");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        const auto settings = Settings::load(gl.config);
        const auto g = load_graph(gl.graph);

        if (*topology) {
            const auto doc = gl.graph.empty() ? sim::case_study_topology_document() : graph::serialize_topology(g);
            detail::write_or_print(topo_out, doc, out);
            return kOk;
        }

        if (*simulate) {
            const auto range = parse_range(sim.from, sim.to);
            auto fleet = sim.fleet.empty() ? sim::case_study_fleet() : [&] {
                try {
                    return sim::load_fleet_file(sim.fleet, g);
                } catch (const IoError& e) {
                    throw ConfigError(e.what());
                }
            }();
            for (auto& d : fleet) {
                if (sim.dropout) d.dropout = *sim.dropout;
                if (sim.cadence_s) d.cadence = Millis{static_cast<long>(*sim.cadence_s * 1000.0)};
            }
            const sim::FleetSimulator simulator(std::move(fleet), sim.seed, &g);
            if (gl.store.empty() && sim.emit.empty()) throw UsageError("simulate needs --store, --emit or both");
            std::optional<Store> store;
            std::optional<Gateway> gw;
            if (!gl.store.empty()) {
                store.emplace(gl.store);
                gw.emplace(g, *store, settings.frames);
            }
            std::string frames;
            std::size_t failed = 0;
            const auto summary = simulator.run(range.from, range.to, [&](const TelemetryMessage& m) {
                const auto frame = encode_frame(m);
                if (!sim.emit.empty()) (frames += frame) += '\n';
                if (gw) {
                    try {
                        gw->handle_frame(frame);
                    } catch (const Error& e) {
                        if (++failed <= 5) err << "gateway: " << e.what() << "\n";
                    }
                }
            });
            if (!sim.emit.empty()) atomic_write(sim.emit, frames);
            out << fmt::format("simulated {} devices: {} messages, {} readings, {} messages dropped", summary.devices.size(),
                               summary.messages, summary.readings, summary.dropped);
            if (gw) {
                const auto t = gw->totals();
                out << fmt::format("; stored {} accepted, {} duplicates, {} rejected, {} frames failed; store {} samples, digest {}",
                                   t.readings.accepted, t.readings.duplicates, t.readings.rejected, t.failed_frames, store->size(), store->digest());
            }
            out << "\n";
            return failed ? kIoError : kOk;
        }

        if (*ingest) {
            Store store(detail::require_store(gl));
            auto frames = settings.frames;
            if (lenient) frames.lenient = true;
            Gateway gw(g, store, frames);
            if (listen) {
                TcpIngestServer server(gw, *listen);
                out << "listening on 127.0.0.1:" << server.port() << std::endl;
                detail::g_interrupted = false;
                auto prev_int = std::signal(SIGINT, detail::on_signal);
                auto prev_term = std::signal(SIGTERM, detail::on_signal);
                std::thread watcher([&] {
                    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(listen_seconds);
                    while (!detail::g_interrupted && (listen_seconds <= 0 || std::chrono::steady_clock::now() < deadline))
                        std::this_thread::sleep_for(std::chrono::milliseconds(50));
                    server.stop();
                });
                server.serve();
                watcher.join();
                std::signal(SIGINT, prev_int);
                std::signal(SIGTERM, prev_term);
            } else {
                std::ifstream file;
                std::istream* src = &in;
                if (ingest_input != "-" && !ingest_input.empty()) {
                    file.open(ingest_input);
                    if (!file) throw IoError("cannot read '" + ingest_input + "'");
                    src = &file;
                }
                for (std::string line; std::getline(*src, line);) {
                    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                    out << respond_line(gw, line) << "\n";
                }
            }
            const auto t = gw.totals();
            err << fmt::format("ingest: {} messages, {} failed frames; {} accepted, {} duplicates, {} rejected\n", t.messages, t.failed_frames,
                               t.readings.accepted, t.readings.duplicates, t.readings.rejected);
            return kOk;
        }

        if (*weather) {
            const auto range = parse_range(wx.from, wx.to);
            std::unique_ptr<WeatherSource> source;
            if (!wx.fixture.empty()) {
                source = std::make_unique<FixtureWeatherSource>(FixtureWeatherSource::from_file(wx.fixture));
            } else if (!wx.url.empty()) {
                HttpWeatherMapping mapping;
                if (!wx.mapping.empty()) {
                    try {
                        mapping = HttpWeatherMapping::from_json(nlohmann::json::parse(read_file(wx.mapping)));
                    } catch (const nlohmann::json::exception& e) {
                        throw ConfigError("mapping '" + wx.mapping + "': " + e.what());
                    }
                }
                source = std::make_unique<HttpWeatherSource>(wx.url, wx.path.empty() ? "/" : wx.path, mapping);
            } else {
                throw UsageError("weather needs --fixture or --url");
            }
            const auto room = g.expand(wx.room);
            if (!g.has_type(room, graph::vocab::kRoom)) throw UsageError("unknown room '" + wx.room + "'");
            const auto fetched = source->fetch(range.from, range.to);
            for (const auto& p : fetched.problems) err << "weather: skipped " << p << "\n";
            Store store(detail::require_store(gl));
            const auto stored = store_weather(fetched.records, g, store, room);
            if (!wx.save.empty()) atomic_write(wx.save, write_weather_csv(fetched.records));
            out << fmt::format("weather: {} hourly records, {} skipped, {} new samples in {}\n", fetched.records.size(), fetched.skipped,
                               stored, wx.room);
            return kOk;
        }

        if (*imp) {
            std::string text;
            if (import_input == "-") {
                std::ostringstream ss;
                ss << in.rdbuf();
                text = ss.str();
            } else {
                text = read_file(import_input);
            }
            auto rows = parse_csv(text);
            const auto before = rows.size();
            std::erase_if(rows, [&](const Sample& s) { return g.find_series(s.series_id) == nullptr; });
            Store store(detail::require_store(gl));
            const auto res = store.insert_batch_detailed(rows);
            out << fmt::format("import: {} rows, {} inserted, {} duplicates, {} not in the graph\n", before, res.inserted,
                               res.duplicates, before - rows.size());
            return kOk;
        }

        // Everything below only reads.
        const Store store(detail::require_store(gl), Store::Mode::ReadOnly);

        if (*query) {
            if (q.list) {
                std::string s = "label\troom\tparameter\tuuid\tsamples\n";
                for (const auto& m : g.all_series())
                    s += fmt::format("{}\t{}\t{}\t{}\t{}\n", series_label(g, m), g.local_name(m.room), name_of(m.parameter), m.series_id.str(),
                                     store.has_series(m.series_id) ? store.count(m.series_id) : 0);
                detail::write_or_print(q.out, s, out);
                return kOk;
            }
            if (q.series.empty()) throw UsageError("query needs --series or --list");
            const auto range = parse_range(q.from, q.to);
            std::vector<Sample> rows;
            for (const auto& ref : q.series) {
                const auto m = resolve_series_ref(g, ref);
                if (!store.has_series(m.series_id)) continue;
                auto part = store.select(ExportSeries{m.series_id, m.parameter}, range.from, range.to,
                                         q.hourly ? Resolution::Hourly : Resolution::Raw, q.clean, settings.cleaning);
                rows.insert(rows.end(), part.begin(), part.end());
            }
            detail::write_or_print(q.out, write_csv(std::move(rows)), out);
            return kOk;
        }

        if (*exp) {
            const auto range = parse_range(ex.from, ex.to);
            std::vector<ParameterKind> params;
            for (const auto& p : ex.parameters) {
                const auto k = try_parameter_from_name(p);
                if (!k) throw UsageError("unknown parameter '" + p + "'");
                params.push_back(*k);
            }
            ExportSelection sel{{}, range.from, range.to, ex.resolution == "hourly" ? Resolution::Hourly : Resolution::Raw, ex.clean};
            auto add = [&](const graph::SeriesMeta& m) {
                if (!store.has_series(m.series_id)) return;
                for (const auto& s : sel.series)
                    if (s.id == m.series_id) return;
                sel.series.push_back({m.series_id, m.parameter});
            };
            for (const auto& ref : ex.series) add(resolve_series_ref(g, ref));
            for (const auto& room : rooms_selected(g, ex.rooms, ex.floors))
                for (const auto& m : g.series_in_room(room))
                    if (params.empty() || std::find(params.begin(), params.end(), m.parameter) != params.end()) add(m);
            if (ex.series.empty() && ex.rooms.empty() && ex.floors.empty()) throw UsageError("export needs --series, --room or --floor");
            detail::write_or_print(ex.out, store.export_csv(sel, settings.cleaning), out);
            return kOk;
        }

        if (*report) {
            if (raw_flag && clean_flag) throw UsageError("--raw and --clean are exclusive");
            if (raw_flag) ro.cleaned = false;
            if (clean_flag) ro.cleaned = true;
            ro.out_dir = out_dir;
            const auto result = build_report(g, store, settings, ro);
            result.write(ro.out_dir);
            out << result.summary_text();
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kUsageError;
    } catch (const NotFoundError& e) {
        err << "not found: " << e.what() << "\n";
        return kUsageError;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const DomainError& e) {
        err << "analysis error: " << e.what() << "\n";
        return kAnalysisError;
    } catch (const InvariantError& e) {
        err << "analysis error: " << e.what() << "\n";
        return kAnalysisError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kAnalysisError;
    }

    return kOk;
}

} // namespace htwin::cli
