#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "heritage_twin/core/error.hpp"
#include "heritage_twin/tstore/sample.hpp"

namespace htwin::storefile {

// On-disk layout (all integers little-endian):
//
//   header  : "HTWINTS\0" (8 bytes) | u32 format version (= 1)
//   batch*  : u32 batch magic 0x31425448 ("HTB1") | u32 record count |
//             count x record | u64 FNV-1a of the record bytes
//   record  : i64 unix ms | 16 bytes uuid | u64 IEEE-754 bits of the value
//
// A batch is applied only when fully present with a valid checksum; a torn
// trailing batch is dropped and truncated away on open.
inline constexpr std::array<char, 8> kMagic = {'H', 'T', 'W', 'I', 'N', 'T', 'S', '\0'};
inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::uint32_t kBatchMagic = 0x31425448;
inline constexpr std::size_t kHeaderSize = 12;
inline constexpr std::size_t kRecordSize = 32;

namespace detail {

inline void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
inline void put_u64(std::vector<unsigned char>& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
inline std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}
inline std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}
inline std::uint64_t fnv1a(const unsigned char* p, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) h = (h ^ p[i]) * 0x100000001b3ULL;
    return h;
}

} // namespace detail

inline std::vector<unsigned char> encode_batch(std::span<const Sample> samples) {
    std::vector<unsigned char> b;
    b.reserve(8 + samples.size() * kRecordSize + 8);
    detail::put_u32(b, kBatchMagic);
    detail::put_u32(b, static_cast<std::uint32_t>(samples.size()));
    const std::size_t body = b.size();
    for (const auto& s : samples) {
        detail::put_u64(b, static_cast<std::uint64_t>(to_unix_ms(s.time)));
        b.insert(b.end(), s.series_id.bytes().begin(), s.series_id.bytes().end());
        std::uint64_t bits;
        std::memcpy(&bits, &s.value, sizeof bits);
        detail::put_u64(b, bits);
    }
    detail::put_u64(b, detail::fnv1a(b.data() + body, b.size() - body));
    return b;
}

// Reads every complete batch. Returns the byte offset just past the last
// good batch so the caller can truncate a torn tail.
template <class Apply>
std::uintmax_t replay(const std::filesystem::path& path, Apply&& apply) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read store file '" + path.string() + "'");
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() < kHeaderSize || std::memcmp(data.data(), kMagic.data(), kMagic.size()) != 0)
        throw IoError("'" + path.string() + "' is not a store file (bad magic)");
    if (detail::get_u32(data.data() + 8) != kVersion)
        throw IoError("unsupported store file version in '" + path.string() + "'");

    std::size_t pos = kHeaderSize;
    while (pos + 8 <= data.size()) {
        if (detail::get_u32(data.data() + pos) != kBatchMagic) break;
        const std::size_t count = detail::get_u32(data.data() + pos + 4);
        const std::size_t body = pos + 8;
        const std::size_t end = body + count * kRecordSize + 8;
        if (end > data.size()) break;
        if (detail::fnv1a(data.data() + body, count * kRecordSize) != detail::get_u64(data.data() + end - 8)) break;
        std::vector<Sample> batch(count);
        for (std::size_t i = 0; i < count; ++i) {
            const unsigned char* r = data.data() + body + i * kRecordSize;
            batch[i].time = from_unix_ms(static_cast<std::int64_t>(detail::get_u64(r)));
            Uuid::Bytes ub;
            std::memcpy(ub.data(), r + 8, 16);
            batch[i].series_id = Uuid{ub};
            const std::uint64_t bits = detail::get_u64(r + 24);
            std::memcpy(&batch[i].value, &bits, sizeof bits);
        }
        apply(batch);
        pos = end;
    }
    return pos;
}

inline void write_header(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create store file '" + path.string() + "'");
    std::vector<unsigned char> h(kMagic.begin(), kMagic.end());
    detail::put_u32(h, kVersion);
    out.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size()));
    if (!out) throw IoError("cannot write store file '" + path.string() + "'");
}

} // namespace htwin::storefile
