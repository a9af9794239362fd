#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "psyling/error.hpp"

namespace psyling::nn {

inline constexpr double kBceEpsilon = 1e-7;

struct LossResult {
  double loss = 0.0;
  std::vector<double> grad;  // dL/dp
};

/// Mean over labels of -[y ln p + (1-y) ln(1-p)] with p clamped to
/// [1e-7, 1-1e-7]. Clamped entries get zero gradient.
inline LossResult bce_loss(std::span<const double> p, std::span<const std::uint8_t> y) {
  if (p.size() != y.size() || p.empty()) throw ShapeError("bce: probability/target length mismatch");
  const double k = static_cast<double>(p.size());
  LossResult r{0.0, std::vector<double>(p.size(), 0.0)};
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (y[i] > 1) throw DataError("bce: target " + std::to_string(y[i]) + " is not 0/1");
    const bool clamped = p[i] < kBceEpsilon || p[i] > 1.0 - kBceEpsilon;
    const double q = std::min(std::max(p[i], kBceEpsilon), 1.0 - kBceEpsilon);
    if (y[i]) {
      r.loss -= std::log(q);
      if (!clamped) r.grad[i] = -1.0 / (q * k);
    } else {
      r.loss -= std::log(1.0 - q);
      if (!clamped) r.grad[i] = 1.0 / ((1.0 - q) * k);
    }
  }
  r.loss /= k;
  return r;
}

inline LossResult bce_loss(std::span<const double> p, std::span<const double> y) {
  std::vector<std::uint8_t> t(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) throw DataError("bce: target is not 0/1");
    t[i] = y[i] == 1.0 ? 1 : 0;
  }
  return bce_loss(p, std::span<const std::uint8_t>(t));
}

}  // namespace psyling::nn
