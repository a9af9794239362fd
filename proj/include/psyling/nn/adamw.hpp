#pragma once

#include <cmath>
#include <map>
#include <string>

#include "psyling/nn/param.hpp"

namespace psyling::nn {

struct AdamWConfig {
  double lr = 2e-5;
  double weight_decay = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with decoupled weight decay:
///   theta <- theta * (1 - lr*wd) - lr * m_hat / (sqrt(v_hat) + eps)
/// Moments are keyed by parameter name.
class AdamW {
 public:
  struct Moments {
    Matrix m, v;
  };

  explicit AdamW(AdamWConfig cfg = {}) : cfg_(cfg) {}

  const AdamWConfig& config() const { return cfg_; }
  AdamWConfig& config() { return cfg_; }
  std::uint64_t step_count() const { return step_; }

  void step(const ParamList& ps) {
    ++step_;
    const double t = static_cast<double>(step_);
    const double c1 = 1.0 - std::pow(cfg_.beta1, t);
    const double c2 = 1.0 - std::pow(cfg_.beta2, t);
    const double shrink = 1.0 - cfg_.lr * cfg_.weight_decay;
    for (auto* p : ps) {
      if (p->frozen) continue;
      auto& mo = moments_[p->name];
      if (!mo.m.same_shape(p->value)) mo = {Matrix(p->value.rows(), p->value.cols()), Matrix(p->value.rows(), p->value.cols())};
      auto& th = p->value.data();
      const auto& g = p->grad.data();
      auto& m = mo.m.data();
      auto& v = mo.v.data();
      for (std::size_t i = 0; i < th.size(); ++i) {
        m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
        v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
        const double update = (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.eps);
        th[i] = th[i] * shrink - cfg_.lr * update;
      }
    }
  }

  std::map<std::string, Moments>& moments() { return moments_; }
  const std::map<std::string, Moments>& moments() const { return moments_; }
  void restore(std::uint64_t step, std::map<std::string, Moments> moments) {
    step_ = step;
    moments_ = std::move(moments);
  }

 private:
  AdamWConfig cfg_;
  std::uint64_t step_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace psyling::nn
