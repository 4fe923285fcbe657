#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "heritage_twin/core/error.hpp"
#include "heritage_twin/core/time.hpp"
#include "heritage_twin/core/uuid.hpp"

namespace htwin {

struct Reading {
    Uuid series_id;
    Timestamp time;
    double value = 0.0;

    friend bool operator==(const Reading&, const Reading&) = default;
};

// One edge upload batch.
struct TelemetryMessage {
    std::string device_id;
    Timestamp sent_at;
    std::vector<Reading> readings;

    friend bool operator==(const TelemetryMessage&, const TelemetryMessage&) = default;
};

enum class TelemetryErrc {
    Malformed,
    MissingField,
    UnknownField,
    BadUuid,
    BadTimestamp,
    NonFinite,
    EmptyReadings,
    FutureReading,
};

inline std::string_view errc_name(TelemetryErrc e) {
    switch (e) {
    case TelemetryErrc::Malformed: return "MALFORMED";
    case TelemetryErrc::MissingField: return "MISSING_FIELD";
    case TelemetryErrc::UnknownField: return "UNKNOWN_FIELD";
    case TelemetryErrc::BadUuid: return "BAD_UUID";
    case TelemetryErrc::BadTimestamp: return "BAD_TIMESTAMP";
    case TelemetryErrc::NonFinite: return "NON_FINITE";
    case TelemetryErrc::EmptyReadings: return "EMPTY_READINGS";
    case TelemetryErrc::FutureReading: return "FUTURE_READING";
    }
    return "?";
}

class TelemetryError : public ParseError {
public:
    TelemetryError(TelemetryErrc code, const std::string& detail)
        : ParseError(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    TelemetryErrc code() const noexcept { return code_; }

private:
    TelemetryErrc code_;
};

struct FrameOptions {
    bool lenient = false;                  // ignore unknown top-level fields instead of rejecting
    Millis allowed_skew = std::chrono::seconds{5};
};

namespace wire {

inline void append_string(std::string& out, std::string_view s) {
    out.push_back('"');
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
}

inline std::string format_number(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

class Parser {
public:
    Parser(std::string_view text, const FrameOptions& opt) : s_(text), opt_(opt) {}

    TelemetryMessage frame() {
        TelemetryMessage m;
        bool have_d = false, have_ts = false, have_r = false;
        ws();
        expect('{');
        ws();
        if (peek() != '}') {
            for (;;) {
                ws();
                const std::string key = string();
                ws();
                expect(':');
                ws();
                if (key == "d") {
                    if (have_d) fail(TelemetryErrc::Malformed, "duplicate field d");
                    m.device_id = string();
                    if (m.device_id.empty()) fail(TelemetryErrc::Malformed, "empty device id");
                    have_d = true;
                } else if (key == "ts") {
                    if (have_ts) fail(TelemetryErrc::Malformed, "duplicate field ts");
                    m.sent_at = timestamp();
                    have_ts = true;
                } else if (key == "r") {
                    if (have_r) fail(TelemetryErrc::Malformed, "duplicate field r");
                    m.readings = readings();
                    have_r = true;
                } else if (opt_.lenient) {
                    skip_value(0);
                } else {
                    fail(TelemetryErrc::UnknownField, "field '" + key + "'");
                }
                ws();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
        }
        expect('}');
        ws();
        if (pos_ != s_.size()) fail(TelemetryErrc::Malformed, "trailing bytes after frame");
        if (!have_d) fail(TelemetryErrc::MissingField, "d");
        if (!have_ts) fail(TelemetryErrc::MissingField, "ts");
        if (!have_r) fail(TelemetryErrc::MissingField, "r");
        if (m.readings.empty()) fail(TelemetryErrc::EmptyReadings, "message has no readings");
        for (const auto& r : m.readings)
            if (r.time > m.sent_at + opt_.allowed_skew)
                fail(TelemetryErrc::FutureReading, "reading at " + format_iso(r.time) + " after sent_at");
        return m;
    }

private:
    [[noreturn]] void fail(TelemetryErrc c, const std::string& what) const {
        throw TelemetryError(c, what + " (byte " + std::to_string(pos_) + ")");
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }

    void expect(char c) {
        if (peek() != c || pos_ >= s_.size()) fail(TelemetryErrc::Malformed, std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string string() {
        expect('"');
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (static_cast<unsigned char>(c) < 0x20) fail(TelemetryErrc::Malformed, "control character in string");
            if (c == '\\') {
                if (pos_ >= s_.size()) break;
                c = s_[pos_++];
                if (c != '"' && c != '\\') fail(TelemetryErrc::Malformed, "unsupported escape");
            }
            out.push_back(c);
        }
        expect('"');
        return out;
    }

    Timestamp timestamp() {
        const auto text = string();
        try {
            return parse_iso(text);
        } catch (const ParseError& e) {
            fail(TelemetryErrc::BadTimestamp, e.what());
        }
    }

    double number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if ((c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.' || c == 'e' || c == 'E' ||
                (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))
                ++pos_;
            else
                break;
        }
        const auto tok = s_.substr(start, pos_ - start);
        if (tok.empty()) fail(TelemetryErrc::Malformed, "expected number");
        for (std::string_view bad : {"NaN", "nan", "-NaN", "-nan", "Infinity", "-Infinity", "inf", "-inf"})
            if (tok == bad) fail(TelemetryErrc::NonFinite, "value " + std::string(tok));
        // JSON number grammar: -?(0|[1-9]\d*)(\.\d+)?([eE][+-]?\d+)?
        std::size_t i = 0;
        auto digits = [&] {
            const std::size_t b = i;
            while (i < tok.size() && tok[i] >= '0' && tok[i] <= '9') ++i;
            return i - b;
        };
        if (i < tok.size() && tok[i] == '-') ++i;
        const std::size_t int_start = i;
        const std::size_t nint = digits();
        if (nint == 0 || (nint > 1 && tok[int_start] == '0')) fail(TelemetryErrc::Malformed, "bad number " + std::string(tok));
        if (i < tok.size() && tok[i] == '.') {
            ++i;
            if (digits() == 0) fail(TelemetryErrc::Malformed, "bad number " + std::string(tok));
        }
        if (i < tok.size() && (tok[i] == 'e' || tok[i] == 'E')) {
            ++i;
            if (i < tok.size() && (tok[i] == '+' || tok[i] == '-')) ++i;
            if (digits() == 0) fail(TelemetryErrc::Malformed, "bad number " + std::string(tok));
        }
        if (i != tok.size()) fail(TelemetryErrc::Malformed, "bad number " + std::string(tok));
        double v = 0.0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec == std::errc::result_out_of_range) {
            // from_chars leaves v untouched here; strtod tells overflow (inf)
            // from underflow (zero or subnormal) apart.
            v = std::strtod(std::string(tok).c_str(), nullptr);
        } else if (ec != std::errc{}) {
            fail(TelemetryErrc::Malformed, "bad number");
        }
        if (!std::isfinite(v)) fail(TelemetryErrc::NonFinite, "value");
        return v;
    }

    std::vector<Reading> readings() {
        std::vector<Reading> out;
        expect('[');
        ws();
        if (peek() == ']') {
            ++pos_;
            return out;
        }
        for (;;) {
            ws();
            expect('[');
            ws();
            Reading r;
            const auto id = string();
            auto u = Uuid::try_parse(id);
            if (!u) fail(TelemetryErrc::BadUuid, "'" + id + "'");
            r.series_id = *u;
            ws();
            expect(',');
            ws();
            r.time = timestamp();
            ws();
            expect(',');
            ws();
            r.value = number();
            ws();
            expect(']');
            out.push_back(r);
            ws();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            break;
        }
        expect(']');
        return out;
    }

    void skip_value(int depth) {
        if (depth > 32) fail(TelemetryErrc::Malformed, "nesting too deep");
        ws();
        const char c = peek();
        if (c == '"') {
            string();
        } else if (c == '[' || c == '{') {
            const char close = c == '[' ? ']' : '}';
            ++pos_;
            ws();
            if (peek() == close) {
                ++pos_;
                return;
            }
            for (;;) {
                if (close == '}') {
                    ws();
                    string();
                    ws();
                    expect(':');
                }
                skip_value(depth + 1);
                ws();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
            expect(close);
        } else if (s_.substr(pos_, 4) == "true" || s_.substr(pos_, 4) == "null") {
            pos_ += 4;
        } else if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
        } else {
            number();
        }
    }

    std::string_view s_;
    const FrameOptions& opt_;
    std::size_t pos_ = 0;
};

} // namespace wire

// Canonical frame: no whitespace, fields in order d, ts, r; times as
// `YYYY-MM-DDTHH:MM:SS.mmmZ`; numbers in shortest round-trip form. No
// trailing newline (the transport adds one per frame).
inline std::string encode_frame(const TelemetryMessage& m) {
    std::string out = "{\"d\":";
    wire::append_string(out, m.device_id);
    out += ",\"ts\":\"";
    out += format_iso(m.sent_at);
    out += "\",\"r\":[";
    for (std::size_t i = 0; i < m.readings.size(); ++i) {
        if (i) out.push_back(',');
        out += "[\"";
        out += m.readings[i].series_id.str();
        out += "\",\"";
        out += format_iso(m.readings[i].time);
        out += "\",";
        out += wire::format_number(m.readings[i].value);
        out.push_back(']');
    }
    out += "]}";
    return out;
}

inline TelemetryMessage parse_telemetry(std::string_view frame, const FrameOptions& opt = {}) {
    if (!frame.empty() && frame.back() == '\n') frame.remove_suffix(1);
    return wire::Parser(frame, opt).frame();
}

} // namespace htwin
