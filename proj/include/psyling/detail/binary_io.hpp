#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "psyling/error.hpp"

// Little-endian primitives for the on-disk formats. All multi-byte values are
// written byte by byte so the files are identical on any host.
namespace psyling::detail {

template <class UInt>
void write_le(std::ostream& out, UInt value) {
  char bytes[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes, sizeof(UInt));
}

inline void write_f32(std::ostream& out, float v) { write_le(out, std::bit_cast<std::uint32_t>(v)); }
inline void write_f64(std::ostream& out, double v) { write_le(out, std::bit_cast<std::uint64_t>(v)); }

inline void write_string(std::ostream& out, const std::string& s) {
  write_le(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

/// Reader that tracks its byte offset so corrupt files can be reported precisely.
class LeReader {
 public:
  LeReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::uint64_t offset() const { return offset_; }

  bool at_eof() {
    return in_.peek() == std::char_traits<char>::eof();
  }

  void read_bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw FormatError(source_ + ": truncated at byte offset " + std::to_string(offset_ + in_.gcount()));
    offset_ += n;
  }

  template <class UInt>
  UInt read_le() {
    unsigned char bytes[sizeof(UInt)];
    read_bytes(reinterpret_cast<char*>(bytes), sizeof(UInt));
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(bytes[i]) << (8 * i);
    return v;
  }

  float read_f32() { return std::bit_cast<float>(read_le<std::uint32_t>()); }
  double read_f64() { return std::bit_cast<double>(read_le<std::uint64_t>()); }

  std::string read_string(std::size_t max_len = 1u << 20) {
    auto n = read_le<std::uint32_t>();
    if (n > max_len) throw FormatError(source_ + ": string length " + std::to_string(n) + " at offset " + std::to_string(offset_ - 4));
    std::string s(n, '\0');
    if (n) read_bytes(s.data(), n);
    return s;
  }

  void expect_magic(std::string_view magic) {
    std::string got(magic.size(), '\0');
    read_bytes(got.data(), got.size());
    if (got != magic) throw FormatError(source_ + ": bad magic, expected " + std::string(magic));
  }

  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::uint64_t offset_ = 0;
};

/// FNV-1a, 64 bit. Used for manifest and input fingerprints.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return s;
}

}  // namespace psyling::detail
