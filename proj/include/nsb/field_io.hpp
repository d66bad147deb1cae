#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "nsb/field.hpp"

namespace nsb {

/// Binary field file ("BNSF"), little-endian:
///
///   offset  size  content
///        0     4  magic "BNSF"
///        4     2  version (u16, = 1)
///        6     2  components (u16, 1 or 3)
///        8     4  n (u32)
///       12     4  reserved, zero (aligns the next field)
///       16     8  box_length (f64)
///       24     .  components * n^3 f64 samples, component-major, z fastest
namespace bnsf {
inline constexpr std::array<char, 4> magic{'B', 'N', 'S', 'F'};
inline constexpr std::uint16_t version = 1;
inline constexpr std::size_t header_size = 24;
}  // namespace bnsf

namespace detail {

template <class T>
void put_le(std::vector<unsigned char>& out, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.insert(out.end(), bytes, bytes + sizeof(T));
}

template <class T>
T get_le(const unsigned char* p) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace detail

inline std::vector<unsigned char> encode_field(const RealField& f) {
    std::vector<unsigned char> out;
    out.reserve(bnsf::header_size + f.samples().size() * 8);
    out.insert(out.end(), bnsf::magic.begin(), bnsf::magic.end());
    detail::put_le<std::uint16_t>(out, bnsf::version);
    detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(f.components()));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid().n()));
    detail::put_le<std::uint32_t>(out, 0);
    detail::put_le<double>(out, f.grid().box_length());
    for (double v : f.samples()) detail::put_le<double>(out, v);
    return out;
}

/// Decodes a field; every failure reports the byte offset it was detected at.
inline RealField decode_field(std::span<const unsigned char> bytes) {
    if (bytes.size() < bnsf::header_size)
        throw FormatError("truncated header: expected " + std::to_string(bnsf::header_size) + " bytes, got " +
                              std::to_string(bytes.size()),
                          bytes.size());
    const unsigned char* p = bytes.data();
    if (std::memcmp(p, bnsf::magic.data(), 4) != 0) throw FormatError("bad magic, expected \"BNSF\"", 0);
    const auto ver = detail::get_le<std::uint16_t>(p + 4);
    if (ver != bnsf::version) throw FormatError("unsupported version " + std::to_string(ver), 4);
    const auto comps = detail::get_le<std::uint16_t>(p + 6);
    if (comps != 1 && comps != 3) throw FormatError("component count must be 1 or 3, got " + std::to_string(comps), 6);
    const auto n = detail::get_le<std::uint32_t>(p + 8);
    if (n < 8 || (n & (n - 1)) != 0) throw FormatError("grid size must be a power of two >= 8, got " + std::to_string(n), 8);
    const auto box = detail::get_le<double>(p + 16);
    if (!std::isfinite(box) || box <= 0.0) throw FormatError("box length must be finite and positive", 16);

    const std::uint64_t count = std::uint64_t{comps} * n * n * n;
    const std::uint64_t expected = bnsf::header_size + 8 * count;
    if (bytes.size() != expected)
        throw FormatError("expected " + std::to_string(expected) + " bytes, got " + std::to_string(bytes.size()),
                          std::min<std::uint64_t>(bytes.size(), expected));
    std::vector<double> samples(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t off = bnsf::header_size + 8 * i;
        samples[i] = detail::get_le<double>(p + off);
        if (!std::isfinite(samples[i])) throw FormatError("non-finite sample", off);
    }
    return RealField(Grid(n, box), comps, std::move(samples));
}

inline void write_field(const std::string& path, const RealField& f) {
    const auto bytes = encode_field(f);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing " + path);
}

inline RealField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_field(bytes);
}

}  // namespace nsb
