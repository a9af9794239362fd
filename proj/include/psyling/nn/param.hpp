#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "psyling/detail/rng.hpp"
#include "psyling/nn/tensor.hpp"

namespace psyling::nn {

/// A trainable tensor and its accumulated gradient.
struct Param {
  std::string name;
  Matrix value;
  Matrix grad;
  bool frozen = false;

  Param() = default;
  Param(std::string n, std::size_t rows, std::size_t cols)
      : name(std::move(n)), value(rows, cols), grad(rows, cols) {}

  void zero_grad() { grad.fill(0.0); }
};

using ParamList = std::vector<Param*>;

inline void init_uniform(Param& p, double bound, detail::Rng& rng) {
  for (double& v : p.value.data()) v = rng.uniform(-bound, bound);
}

inline void zero_grads(const ParamList& ps) {
  for (auto* p : ps) p->zero_grad();
}

inline std::size_t parameter_count(const ParamList& ps) {
  std::size_t n = 0;
  for (const auto* p : ps) n += p->value.size();
  return n;
}

inline double global_grad_norm(const ParamList& ps) {
  double s = 0.0;
  for (const auto* p : ps)
    if (!p->frozen)
      for (double g : p->grad.data()) s += g * g;
  return std::sqrt(s);
}

/// Rescales all gradients so their global L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
inline double clip_grad_norm(const ParamList& ps, double max_norm) {
  const double norm = global_grad_norm(ps);
  if (norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (auto* p : ps) p->grad *= s;
  }
  return norm;
}

inline void scale_grads(const ParamList& ps, double s) {
  for (auto* p : ps) p->grad *= s;
}

inline ParamList concat(ParamList a, const ParamList& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace psyling::nn
