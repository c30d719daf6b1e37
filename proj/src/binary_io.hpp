#pragma once

// Little-endian binary encoding helpers shared by the index and model files.
// All multi-byte integers are written LSB first regardless of host order.

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace srf::detail {

inline void write_u8(std::ostream& out, std::uint8_t v) {
    out.put(static_cast<char>(v));
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

inline void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    write_u64(out, bits);
}

inline void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

[[noreturn]] inline void truncated(const std::string& what) {
    throw std::runtime_error("truncated file while reading " + what);
}

inline std::uint8_t read_u8(std::istream& in, const char* what) {
    int c = in.get();
    if (c == std::char_traits<char>::eof()) truncated(what);
    return static_cast<std::uint8_t>(c);
}

inline std::uint32_t read_u32(std::istream& in, const char* what) {
    char buf[4];
    in.read(buf, 4);
    if (in.gcount() != 4) truncated(what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream& in, const char* what) {
    char buf[8];
    in.read(buf, 8);
    if (in.gcount() != 8) truncated(what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

inline double read_f64(std::istream& in, const char* what) {
    std::uint64_t bits = read_u64(in, what);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

inline std::string read_string(std::istream& in, const char* what) {
    std::uint32_t len = read_u32(in, what);
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (in.gcount() != static_cast<std::streamsize>(len)) truncated(what);
    return s;
}

}  // namespace srf::detail
