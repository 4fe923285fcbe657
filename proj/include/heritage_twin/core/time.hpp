#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "heritage_twin/core/error.hpp"

namespace htwin {

using Millis = std::chrono::milliseconds;
using Timestamp = std::chrono::sys_time<Millis>;

inline constexpr Millis kHour = std::chrono::hours{1};
inline constexpr Millis kDay = std::chrono::hours{24};

inline Timestamp from_unix_ms(std::int64_t ms) { return Timestamp{Millis{ms}}; }
inline std::int64_t to_unix_ms(Timestamp t) { return t.time_since_epoch().count(); }

// Largest hour boundary <= t (also correct before the epoch).
inline Timestamp floor_hour(Timestamp t) { return std::chrono::floor<std::chrono::hours>(t); }
inline Timestamp floor_day(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }
inline bool is_hour_aligned(Timestamp t) { return floor_hour(t) == t; }

inline Timestamp make_time(int y, unsigned mo, unsigned d, int h = 0, int mi = 0, int s = 0) {
    using namespace std::chrono;
    const sys_days date{year{y} / month{mo} / std::chrono::day{d}};
    return Timestamp{date} + hours{h} + minutes{mi} + seconds{s};
}

// `YYYY-MM-DDTHH:MM:SS.mmmZ`
inline std::string format_iso(Timestamp t) {
    using namespace std::chrono;
    const auto date = floor<days>(t);
    const year_month_day ymd{date};
    auto rem = t - date;
    const auto h = duration_cast<hours>(rem);
    rem -= h;
    const auto m = duration_cast<minutes>(rem);
    rem -= m;
    const auto s = duration_cast<seconds>(rem);
    rem -= s;
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}.{:03d}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h.count(),
                       m.count(), s.count(), rem.count());
}

inline std::string format_date(Timestamp t) {
    const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(t)};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                       static_cast<unsigned>(ymd.day()));
}

namespace detail {

inline int take_digits(std::string_view s, std::size_t& pos, std::size_t n) {
    if (pos + n > s.size()) throw ParseError("truncated timestamp '" + std::string(s) + "'");
    int v = 0;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + n, v);
    if (ec != std::errc{} || p != s.data() + pos + n)
        throw ParseError("bad digits in timestamp '" + std::string(s) + "'");
    pos += n;
    return v;
}

inline void expect(std::string_view s, std::size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c)
        throw ParseError(fmt::format("expected '{}' in timestamp '{}'", c, s));
    ++pos;
}

} // namespace detail

// ISO 8601 / RFC 3339 instant: `YYYY-MM-DDTHH[:MM[:SS[.fff]]]` followed by `Z`
// or a `+HH:MM` / `-HH:MM` offset. Naive times (no zone) are rejected.
inline Timestamp parse_iso(std::string_view s) {
    using namespace std::chrono;
    std::size_t pos = 0;
    const int y = detail::take_digits(s, pos, 4);
    detail::expect(s, pos, '-');
    const int mo = detail::take_digits(s, pos, 2);
    detail::expect(s, pos, '-');
    const int d = detail::take_digits(s, pos, 2);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw ParseError("invalid calendar date in '" + std::string(s) + "'");
    if (pos >= s.size() || (s[pos] != 'T' && s[pos] != 't'))
        throw ParseError("timestamp needs a time and UTC designator: '" + std::string(s) + "'");
    ++pos;
    int h = detail::take_digits(s, pos, 2), mi = 0, sec = 0;
    long frac_ms = 0;
    if (pos < s.size() && s[pos] == ':') {
        ++pos;
        mi = detail::take_digits(s, pos, 2);
        if (pos < s.size() && s[pos] == ':') {
            ++pos;
            sec = detail::take_digits(s, pos, 2);
            if (pos < s.size() && s[pos] == '.') {
                ++pos;
                long scale = 100;
                std::size_t ndig = 0;
                while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                    frac_ms += (s[pos] - '0') * scale;
                    scale /= 10;
                    ++pos;
                    ++ndig;
                }
                if (ndig == 0) throw ParseError("empty fraction in '" + std::string(s) + "'");
            }
        }
    }
    if (h > 23 || mi > 59 || sec > 60) throw ParseError("time of day out of range in '" + std::string(s) + "'");
    Timestamp t = Timestamp{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{sec} + Millis{frac_ms};
    if (pos >= s.size()) throw ParseError("naive timestamp (no zone) rejected: '" + std::string(s) + "'");
    if (s[pos] == 'Z' || s[pos] == 'z') {
        ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
        const int sign = s[pos] == '+' ? 1 : -1;
        ++pos;
        const int oh = detail::take_digits(s, pos, 2);
        if (pos < s.size() && s[pos] == ':') ++pos;
        const int om = detail::take_digits(s, pos, 2);
        t -= sign * (hours{oh} + minutes{om});
    } else {
        throw ParseError("bad zone designator in '" + std::string(s) + "'");
    }
    if (pos != s.size()) throw ParseError("trailing characters in timestamp '" + std::string(s) + "'");
    return t;
}

} // namespace htwin
