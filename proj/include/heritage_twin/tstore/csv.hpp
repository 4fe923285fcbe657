#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "heritage_twin/tstore/sample.hpp"

namespace htwin {

// Shared CSV dialect: header `time,uuid,value`, ISO 8601 UTC millisecond
// times with `Z`, values in shortest round-trip form, `\n` endings.
inline constexpr std::string_view kCsvHeader = "time,uuid,value";

inline std::string format_value(double v) { return fmt::format("{}", v); }

inline std::string write_csv(std::vector<Sample> rows) {
    std::sort(rows.begin(), rows.end(), time_then_series);
    std::string out(kCsvHeader);
    out.push_back('\n');
    for (const auto& r : rows) {
        out += format_iso(r.time);
        out.push_back(',');
        out += r.series_id.str();
        out.push_back(',');
        out += format_value(r.value);
        out.push_back('\n');
    }
    return out;
}

inline std::vector<Sample> parse_csv(std::string_view doc) {
    std::vector<Sample> rows;
    std::size_t pos = 0, lineno = 0;
    bool header = true;
    while (pos < doc.size()) {
        auto nl = doc.find('\n', pos);
        if (nl == std::string_view::npos) nl = doc.size();
        auto line = doc.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (header) {
            if (line != kCsvHeader) throw ParseError("expected CSV header '" + std::string(kCsvHeader) + "'", lineno);
            header = false;
            continue;
        }
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos)
            throw ParseError("expected 3 CSV fields", lineno);
        Sample s;
        try {
            s.time = parse_iso(line.substr(0, c1));
            s.series_id = Uuid::parse(line.substr(c1 + 1, c2 - c1 - 1));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
        const auto v = line.substr(c2 + 1);
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s.value);
        if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(s.value))
            throw ParseError("bad value '" + std::string(v) + "'", lineno);
        rows.push_back(s);
    }
    if (header) throw ParseError("empty CSV document (missing header)");
    return rows;
}

} // namespace htwin
