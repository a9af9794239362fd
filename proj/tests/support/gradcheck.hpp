#pragma once

// Central finite-difference checks for parameter and input gradients.

#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "psyling/detail/rng.hpp"
#include "psyling/nn/param.hpp"

namespace psyling::testing {

struct GradCheck {
  double max_rel = 0.0;
  std::size_t checked = 0;
  std::string worst;

  void merge(const GradCheck& o) {
    checked += o.checked;
    if (o.max_rel > max_rel) {
      max_rel = o.max_rel;
      worst = o.worst;
    }
  }
};

/// |a - n| / max(|a|, |n|, floor). Central differences at h=1e-5 on an O(1)
/// loss carry ~1e-11 absolute round-off, so entries below the floor are
/// judged on absolute error instead.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::fabs(analytic - numeric) / std::max({std::fabs(analytic), std::fabs(numeric), floor});
}

/// `loss(with_backward)` runs a forward pass, optionally backpropagates into
/// the parameter gradients, and returns the scalar loss. Up to `per_tensor`
/// entries of each tensor are checked (0 = all), chosen by `rng`.
inline GradCheck check_param_gradients(const nn::ParamList& params, const std::function<double(bool)>& loss,
                                       std::size_t per_tensor, detail::Rng& rng, double h = 1e-5) {
  nn::zero_grads(params);
  loss(true);
  GradCheck out;
  for (auto* p : params) {
    const std::size_t n = p->value.size();
    std::vector<std::size_t> idx;
    if (per_tensor == 0 || per_tensor >= n) {
      for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    } else {
      for (std::size_t i = 0; i < per_tensor; ++i) idx.push_back(static_cast<std::size_t>(rng.below(n)));
    }
    for (std::size_t i : idx) {
      const double saved = p->value[i];
      p->value[i] = saved + h;
      const double up = loss(false);
      p->value[i] = saved - h;
      const double down = loss(false);
      p->value[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double rel = relative_error(p->grad[i], numeric);
      ++out.checked;
      if (rel > out.max_rel) {
        out.max_rel = rel;
        std::ostringstream w;
        w << p->name << "[" << i << "] analytic=" << p->grad[i] << " numeric=" << numeric;
        out.worst = w.str();
      }
    }
  }
  return out;
}

/// Same check for an input matrix whose analytic gradient is `analytic`.
inline GradCheck check_input_gradient(Matrix& input, const Matrix& analytic, const std::function<double()>& loss,
                                      double h = 1e-5) {
  GradCheck out;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double saved = input[i];
    input[i] = saved + h;
    const double up = loss();
    input[i] = saved - h;
    const double down = loss();
    input[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double rel = relative_error(analytic[i], numeric);
    ++out.checked;
    if (rel > out.max_rel) {
      out.max_rel = rel;
      out.worst = "input[" + std::to_string(i) + "]";
    }
  }
  return out;
}

inline Matrix random_matrix(std::size_t r, std::size_t c, detail::Rng& rng, double scale = 1.0) {
  Matrix m(r, c);
  for (double& v : m.data()) v = scale * rng.normal();
  return m;
}

/// Weighted sum of a matrix; the weights serve as the upstream gradient.
inline double weighted_sum(const Matrix& m, const Matrix& w) {
  double s = 0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * w[i];
  return s;
}

}  // namespace psyling::testing
