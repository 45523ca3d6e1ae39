#pragma once

// Internal little-endian binary helpers shared by the fixture and
// checkpoint readers. Not installed.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "stainlab/errors.hpp"

namespace stainlab::binio {

static_assert(std::endian::native == std::endian::little,
              "big-endian hosts need byte swaps here");

inline void write_u16(std::ostream& os, std::uint16_t v) {
    os.write(reinterpret_cast<const char*>(&v), 2);
}

inline void write_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}

inline void write_f32(std::ostream& os, float v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}

inline std::uint16_t read_u16(std::istream& is, const char* what) {
    std::uint16_t v;
    if (!is.read(reinterpret_cast<char*>(&v), 2))
        throw FormatError(std::string(what) + ": truncated file");
    return v;
}

inline std::uint32_t read_u32(std::istream& is, const char* what) {
    std::uint32_t v;
    if (!is.read(reinterpret_cast<char*>(&v), 4))
        throw FormatError(std::string(what) + ": truncated file");
    return v;
}

inline float read_f32(std::istream& is, const char* what) {
    float v;
    if (!is.read(reinterpret_cast<char*>(&v), 4))
        throw FormatError(std::string(what) + ": truncated file");
    return v;
}

inline void expect_magic(std::istream& is, const char* magic, const char* what) {
    char buf[4];
    if (!is.read(buf, 4) || std::memcmp(buf, magic, 4) != 0)
        throw FormatError(std::string(what) + ": bad magic, expected '" + magic + "'");
}

inline std::vector<float> read_f32_block(std::istream& is, std::size_t count,
                                         const char* what) {
    std::vector<float> data(count);
    if (count > 0 &&
        !is.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(count * sizeof(float))))
        throw FormatError(std::string(what) + ": truncated payload");
    return data;
}

}  // namespace stainlab::binio
