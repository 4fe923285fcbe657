#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "heritage_twin/core/error.hpp"

namespace htwin {

// 128-bit series identifier, printed in canonical RFC 4122 lowercase form
// `xxxxxxxx-xxxx-xxxx-xxxx-xxxxxxxxxxxx`.
class Uuid {
public:
    using Bytes = std::array<std::uint8_t, 16>;

    constexpr Uuid() = default;
    explicit constexpr Uuid(const Bytes& b) : bytes_(b) {}

    static std::optional<Uuid> try_parse(std::string_view s) {
        if (s.size() != 36) return std::nullopt;
        Bytes b{};
        std::size_t bi = 0;
        for (std::size_t i = 0; i < 36;) {
            if (i == 8 || i == 13 || i == 18 || i == 23) {
                if (s[i] != '-') return std::nullopt;
                ++i;
                continue;
            }
            const int hi = hex_value(s[i]), lo = hex_value(s[i + 1]);
            if (hi < 0 || lo < 0) return std::nullopt;
            b[bi++] = static_cast<std::uint8_t>(hi << 4 | lo);
            i += 2;
        }
        return Uuid{b};
    }

    static Uuid parse(std::string_view s) {
        if (auto u = try_parse(s)) return *u;
        throw ParseError("malformed uuid '" + std::string(s) + "'");
    }

    // Deterministic name-based id (two seeded FNV-1a passes, version 4 and
    // RFC 4122 variant bits set so the result is a well-formed uuid).
    static Uuid from_name(std::string_view name) {
        auto fnv = [&](std::uint64_t h) {
            for (unsigned char c : name) {
                h ^= c;
                h *= 0x100000001b3ULL;
            }
            return h;
        };
        const std::uint64_t a = fnv(0xcbf29ce484222325ULL), b = fnv(0x84222325cbf29ce4ULL ^ a);
        Bytes out{};
        for (int i = 0; i < 8; ++i) {
            out[i] = static_cast<std::uint8_t>(a >> (56 - 8 * i));
            out[8 + i] = static_cast<std::uint8_t>(b >> (56 - 8 * i));
        }
        out[6] = static_cast<std::uint8_t>((out[6] & 0x0F) | 0x40);
        out[8] = static_cast<std::uint8_t>((out[8] & 0x3F) | 0x80);
        return Uuid{out};
    }

    std::string str() const {
        static constexpr char kHex[] = "0123456789abcdef";
        std::string s;
        s.reserve(36);
        for (std::size_t i = 0; i < 16; ++i) {
            if (i == 4 || i == 6 || i == 8 || i == 10) s.push_back('-');
            s.push_back(kHex[bytes_[i] >> 4]);
            s.push_back(kHex[bytes_[i] & 0xF]);
        }
        return s;
    }

    const Bytes& bytes() const noexcept { return bytes_; }

    friend constexpr auto operator<=>(const Uuid&, const Uuid&) = default;

private:
    static constexpr int hex_value(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    }

    Bytes bytes_{};
};

} // namespace htwin

template <>
struct std::hash<htwin::Uuid> {
    std::size_t operator()(const htwin::Uuid& u) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (auto b : u.bytes()) h = (h ^ b) * 1099511628211ULL;
        return h;
    }
};
