#pragma once

// Affine and elementwise layers operating on single vectors. Each layer keeps
// the activations of its last forward call for the matching backward call.

#include <cmath>
#include <optional>
#include <vector>

#include "psyling/detail/rng.hpp"
#include "psyling/error.hpp"
#include "psyling/nn/param.hpp"

namespace psyling::nn {

using Vec = std::vector<double>;

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline Vec sigmoid(const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = sigmoid(x[i]);
  return y;
}

/// dL/dx given y = sigmoid(x) and dL/dy.
inline Vec sigmoid_backward(const Vec& y, const Vec& dy) {
  Vec dx(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) dx[i] = dy[i] * y[i] * (1.0 - y[i]);
  return dx;
}

inline Vec relu(const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] < 0 ? 0.0 : x[i];  // NaN passes through
  return y;
}

class Linear {
 public:
  Linear() = default;
  Linear(const std::string& name, std::size_t in, std::size_t out)
      : w_(name + ".W", out, in), b_(name + ".b", out, 1) {}

  /// Uniform in +-1/sqrt(in) for weights and bias.
  void init(detail::Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in()));
    init_uniform(w_, bound, rng);
    init_uniform(b_, bound, rng);
  }

  std::size_t in() const { return w_.value.cols(); }
  std::size_t out() const { return w_.value.rows(); }

  Vec forward(const Vec& x) {
    if (x.size() != in()) throw ShapeError(w_.name + ": input width " + std::to_string(x.size()) + " != " + std::to_string(in()));
    x_ = x;
    Vec y(b_.value.data());
    matvec(w_.value, x, y, true);
    return y;
  }

  Vec backward(const Vec& dy) {
    if (!x_) throw UsageError(w_.name + ": backward without forward");
    if (dy.size() != out()) throw ShapeError(w_.name + ": gradient width mismatch");
    outer_add(w_.grad, dy, *x_);
    for (std::size_t i = 0; i < dy.size(); ++i) b_.grad[i] += dy[i];
    Vec dx(in(), 0.0);
    matvec_transposed_add(w_.value, dy, dx);
    return dx;
  }

  ParamList params() { return {&w_, &b_}; }
  Param& weight() { return w_; }
  Param& bias() { return b_; }

 private:
  Param w_, b_;
  std::optional<Vec> x_;
};

class Relu {
 public:
  Vec forward(const Vec& x) {
    y_ = relu(x);
    return *y_;
  }
  Vec backward(const Vec& dy) {
    if (!y_) throw UsageError("relu: backward without forward");
    Vec dx(dy.size());
    for (std::size_t i = 0; i < dy.size(); ++i) dx[i] = (*y_)[i] > 0 ? dy[i] : 0.0;
    return dx;
  }

 private:
  std::optional<Vec> y_;
};

/// Inverted dropout. The mask is a pure function of (seed, stream, unit), so
/// repeated forward passes with the same stream see the same mask.
class Dropout {
 public:
  explicit Dropout(double p = 0.2, std::uint64_t seed = 0) : p_(p), seed_(seed) {
    if (p < 0.0 || p >= 1.0) throw ConfigError("dropout probability must be in [0, 1)");
  }

  double p() const { return p_; }
  void set_stream(std::uint64_t stream) { stream_ = stream; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  Vec forward(const Vec& x, bool training) {
    scale_.assign(x.size(), 1.0);
    if (training && p_ > 0.0)
      for (std::size_t i = 0; i < x.size(); ++i)
        scale_[i] = detail::counter_uniform(seed_, stream_, i) < p_ ? 0.0 : 1.0 / (1.0 - p_);
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * scale_[i];
    ready_ = true;
    return y;
  }

  Vec backward(const Vec& dy) {
    if (!ready_) throw UsageError("dropout: backward without forward");
    Vec dx(dy.size());
    for (std::size_t i = 0; i < dy.size(); ++i) dx[i] = dy[i] * scale_[i];
    return dx;
  }

 private:
  double p_;
  std::uint64_t seed_;
  std::uint64_t stream_ = 0;
  Vec scale_;
  bool ready_ = false;
};

}  // namespace psyling::nn
