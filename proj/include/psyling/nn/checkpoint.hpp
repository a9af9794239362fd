#pragma once

// PSYN1 checkpoints:
//   "PSYN1" | u64 manifest hash | u32 len + config JSON | u32 tensor count |
//   per tensor: u32 len + name, u32 rows, u32 cols, rows*cols f64 |
//   u8 has_optimizer [ | u64 step | per tensor (same order): m then v ]
// All integers and floats little-endian.

#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "psyling/detail/binary_io.hpp"
#include "psyling/nn/adamw.hpp"

namespace psyling::nn {

inline constexpr std::string_view kCheckpointMagic = "PSYN1";

struct Checkpoint {
  std::uint64_t manifest_hash = 0;
  nlohmann::json config;
  std::vector<std::pair<std::string, Matrix>> tensors;
  std::optional<std::uint64_t> optimizer_step;
  std::map<std::string, AdamW::Moments> moments;

  const Matrix* tensor(const std::string& name) const {
    for (const auto& [n, m] : tensors)
      if (n == name) return &m;
    return nullptr;
  }
};

inline Checkpoint make_checkpoint(const ParamList& ps, std::uint64_t manifest_hash, nlohmann::json config,
                                  const AdamW* opt = nullptr) {
  Checkpoint c;
  c.manifest_hash = manifest_hash;
  c.config = std::move(config);
  for (const auto* p : ps) c.tensors.emplace_back(p->name, p->value);
  if (opt) {
    c.optimizer_step = opt->step_count();
    c.moments = opt->moments();
  }
  return c;
}

namespace detail_ckpt {

inline void write_matrix(std::ostream& out, const Matrix& m) {
  for (double v : m.data()) psyling::detail::write_f64(out, v);
}

inline Matrix read_matrix(psyling::detail::LeReader& rd, std::size_t rows, std::size_t cols) {
  std::vector<double> d(rows * cols);
  for (double& v : d) v = rd.read_f64();
  return Matrix(rows, cols, std::move(d));
}

}  // namespace detail_ckpt

inline void write_checkpoint(std::ostream& out, const Checkpoint& c) {
  using namespace psyling::detail;
  out.write(kCheckpointMagic.data(), static_cast<std::streamsize>(kCheckpointMagic.size()));
  write_le(out, c.manifest_hash);
  write_string(out, c.config.dump());
  write_le(out, static_cast<std::uint32_t>(c.tensors.size()));
  for (const auto& [name, m] : c.tensors) {
    write_string(out, name);
    write_le(out, static_cast<std::uint32_t>(m.rows()));
    write_le(out, static_cast<std::uint32_t>(m.cols()));
    detail_ckpt::write_matrix(out, m);
  }
  write_le(out, static_cast<std::uint8_t>(c.optimizer_step ? 1 : 0));
  if (c.optimizer_step) {
    write_le(out, *c.optimizer_step);
    for (const auto& [name, m] : c.tensors) {
      auto it = c.moments.find(name);
      const Matrix zeros(m.rows(), m.cols());
      detail_ckpt::write_matrix(out, it == c.moments.end() ? zeros : it->second.m);
      detail_ckpt::write_matrix(out, it == c.moments.end() ? zeros : it->second.v);
    }
  }
}

inline void write_checkpoint(const std::string& path, const Checkpoint& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write checkpoint '" + path + "'");
  write_checkpoint(out, c);
}

inline Checkpoint read_checkpoint(std::istream& in, const std::string& source) {
  psyling::detail::LeReader rd(in, source);
  rd.expect_magic(kCheckpointMagic);
  Checkpoint c;
  c.manifest_hash = rd.read_le<std::uint64_t>();
  try {
    c.config = nlohmann::json::parse(rd.read_string(1u << 26));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(source + ": bad config JSON: " + e.what());
  }
  const auto n = rd.read_le<std::uint32_t>();
  for (std::uint32_t i = 0; i < n; ++i) {
    auto name = rd.read_string();
    const auto rows = rd.read_le<std::uint32_t>();
    const auto cols = rd.read_le<std::uint32_t>();
    c.tensors.emplace_back(std::move(name), detail_ckpt::read_matrix(rd, rows, cols));
  }
  const auto has_opt = rd.read_le<std::uint8_t>();
  if (has_opt > 1) throw FormatError(source + ": bad optimizer flag");
  if (has_opt) {
    c.optimizer_step = rd.read_le<std::uint64_t>();
    for (const auto& [name, m] : c.tensors) {
      AdamW::Moments mo;
      mo.m = detail_ckpt::read_matrix(rd, m.rows(), m.cols());
      mo.v = detail_ckpt::read_matrix(rd, m.rows(), m.cols());
      c.moments.emplace(name, std::move(mo));
    }
  }
  if (!rd.at_eof()) throw FormatError(source + ": trailing bytes after checkpoint");
  return c;
}

inline Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open checkpoint '" + path + "'");
  return read_checkpoint(in, path);
}

/// Copies tensors into parameters by name; every parameter must be present
/// with a matching shape.
inline void load_parameters(const Checkpoint& c, const ParamList& ps) {
  for (auto* p : ps) {
    const Matrix* m = c.tensor(p->name);
    if (!m) throw FormatError("checkpoint has no tensor '" + p->name + "'");
    if (!m->same_shape(p->value))
      throw ShapeError("checkpoint tensor '" + p->name + "' is " + std::to_string(m->rows()) + "x" +
                       std::to_string(m->cols()) + ", model expects " + std::to_string(p->value.rows()) + "x" +
                       std::to_string(p->value.cols()));
    p->value = *m;
  }
}

}  // namespace psyling::nn
