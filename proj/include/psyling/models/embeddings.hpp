#pragma once

// EMBV1 transformer hidden-state files:
//   "EMBV1" | u32 record count | u16 dim | u16 layer id |
//   per record: u32 len + UTF-8 id, u32 T, T*dim f32 row-major
// Little-endian throughout.

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "psyling/detail/binary_io.hpp"
#include "psyling/nn/tensor.hpp"

namespace psyling {

inline constexpr std::string_view kEmbeddingMagic = "EMBV1";

struct EmbeddingSequence {
  std::string id;
  Matrix states;  // T x dim
};

struct EmbeddingFile {
  std::uint16_t dim = 0;
  std::uint16_t layer_id = 0;
  std::vector<EmbeddingSequence> records;

  const EmbeddingSequence* find(const std::string& id) const {
    for (const auto& r : records)
      if (r.id == id) return &r;
    return nullptr;
  }

  std::map<std::string, const Matrix*> by_id() const {
    std::map<std::string, const Matrix*> m;
    for (const auto& r : records) m[r.id] = &r.states;
    return m;
  }
};

inline EmbeddingFile read_embeddings(std::istream& in, const std::string& source) {
  detail::LeReader rd(in, source);
  rd.expect_magic(kEmbeddingMagic);
  EmbeddingFile f;
  const auto count = rd.read_le<std::uint32_t>();
  f.dim = rd.read_le<std::uint16_t>();
  f.layer_id = rd.read_le<std::uint16_t>();
  if (f.dim == 0) throw FormatError(source + ": embedding dim is 0");
  std::map<std::string, bool> seen;
  for (std::uint32_t i = 0; i < count; ++i) {
    EmbeddingSequence r;
    r.id = rd.read_string();
    if (!seen.emplace(r.id, true).second) throw FormatError(source + ": duplicate record id '" + r.id + "'");
    const auto t = rd.read_le<std::uint32_t>();
    if (t == 0) throw FormatError(source + ": record '" + r.id + "' has T=0");
    std::vector<double> data(static_cast<std::size_t>(t) * f.dim);
    for (double& v : data) {
      v = rd.read_f32();
      if (!std::isfinite(v)) throw FormatError(source + ": record '" + r.id + "' has a non-finite value");
    }
    r.states = Matrix(t, f.dim, std::move(data));
    f.records.push_back(std::move(r));
  }
  if (!rd.at_eof()) throw FormatError(source + ": trailing bytes after " + std::to_string(count) + " records");
  return f;
}

inline EmbeddingFile read_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open embedding file '" + path + "'");
  return read_embeddings(in, path);
}

inline void write_embeddings(std::ostream& out, const EmbeddingFile& f) {
  out.write(kEmbeddingMagic.data(), static_cast<std::streamsize>(kEmbeddingMagic.size()));
  detail::write_le(out, static_cast<std::uint32_t>(f.records.size()));
  detail::write_le(out, f.dim);
  detail::write_le(out, f.layer_id);
  for (const auto& r : f.records) {
    if (r.states.cols() != f.dim) throw ShapeError("embedding record '" + r.id + "' has wrong width");
    detail::write_string(out, r.id);
    detail::write_le(out, static_cast<std::uint32_t>(r.states.rows()));
    for (double v : r.states.data()) detail::write_f32(out, static_cast<float>(v));
  }
}

inline void write_embeddings(const std::string& path, const EmbeddingFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write '" + path + "'");
  write_embeddings(out, f);
}

}  // namespace psyling
