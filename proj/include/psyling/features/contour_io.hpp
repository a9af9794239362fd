#pragma once

// PSYC1 contour files: "PSYC1", u32 feature count, u64 manifest hash, then
// records of (u32 id length, id bytes, u32 N, N x F float32) until EOF.
// All integers and floats little-endian.

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "psyling/detail/binary_io.hpp"
#include "psyling/features/contour.hpp"

namespace psyling {

inline constexpr std::string_view kContourMagic = "PSYC1";

struct ContourRecord {
  std::string id;
  Matrix values;  // N x F, widened from float32
};

struct ContourFile {
  std::uint32_t feature_count = 0;
  std::uint64_t manifest_hash = 0;
  std::vector<ContourRecord> records;

  const ContourRecord* find(const std::string& id) const {
    for (const auto& r : records)
      if (r.id == id) return &r;
    return nullptr;
  }

  std::map<std::string, const Matrix*> by_id() const {
    std::map<std::string, const Matrix*> m;
    for (const auto& r : records) m[r.id] = &r.values;
    return m;
  }
};

inline void write_contours(std::ostream& out, const ContourFile& file) {
  out.write(kContourMagic.data(), static_cast<std::streamsize>(kContourMagic.size()));
  detail::write_le(out, file.feature_count);
  detail::write_le(out, file.manifest_hash);
  for (const auto& r : file.records) {
    if (r.values.cols() != file.feature_count) throw ShapeError("contour '" + r.id + "' has wrong width");
    detail::write_string(out, r.id);
    detail::write_le(out, static_cast<std::uint32_t>(r.values.rows()));
    for (double v : r.values.data()) detail::write_f32(out, static_cast<float>(v));
  }
}

inline void write_contours(const std::string& path, const ContourFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write '" + path + "'");
  write_contours(out, file);
}

inline ContourFile read_contours(std::istream& in, const std::string& source) {
  detail::LeReader rd(in, source);
  rd.expect_magic(kContourMagic);
  ContourFile f;
  f.feature_count = rd.read_le<std::uint32_t>();
  f.manifest_hash = rd.read_le<std::uint64_t>();
  while (!rd.at_eof()) {
    ContourRecord r;
    r.id = rd.read_string();
    const auto n = rd.read_le<std::uint32_t>();
    if (n == 0) throw FormatError(source + ": record '" + r.id + "' has N=0");
    std::vector<double> data(static_cast<std::size_t>(n) * f.feature_count);
    for (double& v : data) v = rd.read_f32();
    r.values = Matrix(n, f.feature_count, std::move(data));
    f.records.push_back(std::move(r));
  }
  return f;
}

inline ContourFile read_contours(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  return read_contours(in, path);
}

}  // namespace psyling
