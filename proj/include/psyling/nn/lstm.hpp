#pragma once

// LSTM, bidirectional LSTM and stacked BiLSTM with cached forward passes and
// full backpropagation through time.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "psyling/nn/layers.hpp"

namespace psyling::nn {

/// Single-direction LSTM. Gate rows are stacked in the order i, f, g, o:
/// W is 4H x I, U is 4H x H and b is 4H x 1.
class Lstm {
 public:
  Lstm() = default;
  Lstm(const std::string& name, std::size_t input_dim, std::size_t hidden_dim)
      : w_(name + ".W", 4 * hidden_dim, input_dim),
        u_(name + ".U", 4 * hidden_dim, hidden_dim),
        b_(name + ".b", 4 * hidden_dim, 1) {}

  /// Uniform in +-1/sqrt(H), forget-gate bias 1.
  void init(detail::Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim()));
    init_uniform(w_, bound, rng);
    init_uniform(u_, bound, rng);
    init_uniform(b_, bound, rng);
    const std::size_t h = hidden_dim();
    for (std::size_t k = h; k < 2 * h; ++k) b_.value[k] = 1.0;
  }

  std::size_t input_dim() const { return w_.value.cols(); }
  std::size_t hidden_dim() const { return u_.value.cols(); }

  /// T x I -> T x H.
  Matrix forward(const Matrix& x) {
    const std::size_t h = hidden_dim(), t_len = x.rows();
    if (t_len == 0) throw ShapeError(w_.name + ": empty sequence");
    if (x.cols() != input_dim())
      throw ShapeError(w_.name + ": input width " + std::to_string(x.cols()) + " != " + std::to_string(input_dim()));
    Cache c{x, Matrix(t_len, 4 * h), Matrix(t_len, h), Matrix(t_len, h), Matrix(t_len, h)};
    std::vector<double> z(4 * h);
    std::vector<double> h_prev(h, 0.0), c_prev(h, 0.0);
    for (std::size_t t = 0; t < t_len; ++t) {
      std::copy(b_.value.data().begin(), b_.value.data().end(), z.begin());
      matvec(w_.value, x.row(t), z, true);
      matvec(u_.value, h_prev, z, true);
      auto gates = c.gates.row(t);
      for (std::size_t k = 0; k < h; ++k) {
        const double i = sigmoid(z[k]);
        const double f = sigmoid(z[h + k]);
        const double g = std::tanh(z[2 * h + k]);
        const double o = sigmoid(z[3 * h + k]);
        gates[k] = i;
        gates[h + k] = f;
        gates[2 * h + k] = g;
        gates[3 * h + k] = o;
        const double cell = f * c_prev[k] + i * g;
        const double tc = std::tanh(cell);
        c.cell(t, k) = cell;
        c.tanh_cell(t, k) = tc;
        c.hidden(t, k) = o * tc;
      }
      std::copy_n(c.hidden.row(t).begin(), h, h_prev.begin());
      std::copy_n(c.cell.row(t).begin(), h, c_prev.begin());
    }
    cache_ = std::move(c);
    return cache_->hidden;
  }

  /// dL/dH (T x H) -> dL/dX (T x I); accumulates parameter gradients.
  Matrix backward(const Matrix& d_hidden) {
    if (!cache_) throw UsageError(w_.name + ": backward without forward");
    const auto& c = *cache_;
    const std::size_t h = hidden_dim(), t_len = c.x.rows();
    require_shape(d_hidden, t_len, h, "lstm backward");
    Matrix dx(t_len, input_dim());
    std::vector<double> dh_next(h, 0.0), dc_next(h, 0.0), dz(4 * h), dh(h);
    const std::vector<double> zeros(h, 0.0);
    for (std::size_t t = t_len; t-- > 0;) {
      auto gates = c.gates.row(t);
      for (std::size_t k = 0; k < h; ++k) {
        const double i = gates[k], f = gates[h + k], g = gates[2 * h + k], o = gates[3 * h + k];
        const double tc = c.tanh_cell(t, k);
        const double c_prev = t > 0 ? c.cell(t - 1, k) : 0.0;
        const double dht = d_hidden(t, k) + dh_next[k];
        const double d_o = dht * tc;
        const double dc = dht * o * (1.0 - tc * tc) + dc_next[k];
        dz[k] = dc * g * i * (1.0 - i);
        dz[h + k] = dc * c_prev * f * (1.0 - f);
        dz[2 * h + k] = dc * i * (1.0 - g * g);
        dz[3 * h + k] = d_o * o * (1.0 - o);
        dc_next[k] = dc * f;
      }
      outer_add(w_.grad, dz, c.x.row(t));
      if (t > 0) outer_add(u_.grad, dz, c.hidden.row(t - 1));
      for (std::size_t k = 0; k < 4 * h; ++k) b_.grad[k] += dz[k];
      matvec_transposed_add(w_.value, dz, dx.row(t));
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      matvec_transposed_add(u_.value, dz, dh_next);
    }
    return dx;
  }

  ParamList params() { return {&w_, &u_, &b_}; }
  Param& w() { return w_; }
  Param& u() { return u_; }
  Param& b() { return b_; }

 private:
  struct Cache {
    Matrix x, gates, cell, tanh_cell, hidden;
  };
  Param w_, u_, b_;
  std::optional<Cache> cache_;
};

/// Forward LSTM over the sequence and backward LSTM over its reversal.
/// Output row t is [forward state after x_t | backward state after x_t],
/// the backward half being the state having read x_T ... x_t.
class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(const std::string& name, std::size_t input_dim, std::size_t hidden_dim)
      : fwd_(name + ".fwd", input_dim, hidden_dim), bwd_(name + ".bwd", input_dim, hidden_dim) {}

  void init(detail::Rng& rng) {
    fwd_.init(rng);
    bwd_.init(rng);
  }

  std::size_t input_dim() const { return fwd_.input_dim(); }
  std::size_t hidden_dim() const { return fwd_.hidden_dim(); }
  std::size_t output_dim() const { return 2 * hidden_dim(); }

  Matrix forward(const Matrix& x) {
    const Matrix hf = fwd_.forward(x);
    const Matrix hb = bwd_.forward(x.reversed_rows()).reversed_rows();
    const std::size_t h = hidden_dim();
    Matrix y(x.rows(), 2 * h);
    for (std::size_t t = 0; t < x.rows(); ++t) {
      std::copy_n(hf.row(t).begin(), h, y.row(t).begin());
      std::copy_n(hb.row(t).begin(), h, y.row(t).begin() + static_cast<std::ptrdiff_t>(h));
    }
    return y;
  }

  Matrix backward(const Matrix& dy) {
    const std::size_t h = hidden_dim(), t_len = dy.rows();
    Matrix df(t_len, h), db(t_len, h);
    for (std::size_t t = 0; t < t_len; ++t) {
      std::copy_n(dy.row(t).begin(), h, df.row(t).begin());
      std::copy_n(dy.row(t).begin() + static_cast<std::ptrdiff_t>(h), h, db.row(t).begin());
    }
    Matrix dx = fwd_.backward(df);
    dx += bwd_.backward(db.reversed_rows()).reversed_rows();
    return dx;
  }

  ParamList params() { return concat(fwd_.params(), bwd_.params()); }
  Lstm& forward_lstm() { return fwd_; }
  Lstm& backward_lstm() { return bwd_; }

 private:
  Lstm fwd_, bwd_;
};

/// Stacked BiLSTM summarised by the top layer's final states
/// [forward h_T | backward h_1].
class StackedBiLstm {
 public:
  StackedBiLstm() = default;
  StackedBiLstm(const std::string& name, std::size_t input_dim, std::size_t hidden_dim, std::size_t layers) {
    if (layers < 1) throw ConfigError(name + ": need at least one BiLSTM layer");
    for (std::size_t l = 0; l < layers; ++l)
      layers_.emplace_back(name + ".l" + std::to_string(l), l == 0 ? input_dim : 2 * hidden_dim, hidden_dim);
  }

  void init(detail::Rng& rng) {
    for (auto& l : layers_) l.init(rng);
  }

  std::size_t input_dim() const { return layers_.front().input_dim(); }
  std::size_t hidden_dim() const { return layers_.front().hidden_dim(); }
  std::size_t output_dim() const { return 2 * hidden_dim(); }
  std::size_t depth() const { return layers_.size(); }

  Vec forward(const Matrix& x) {
    Matrix y = x;
    for (auto& l : layers_) y = l.forward(y);
    t_len_ = y.rows();
    const std::size_t h = hidden_dim();
    Vec out(2 * h);
    std::copy_n(y.row(t_len_ - 1).begin(), h, out.begin());
    std::copy_n(y.row(0).begin() + static_cast<std::ptrdiff_t>(h), h, out.begin() + static_cast<std::ptrdiff_t>(h));
    return out;
  }

  /// Gradient w.r.t. the summary vector -> gradient w.r.t. the input sequence.
  Matrix backward(const Vec& d_out) {
    if (t_len_ == 0) throw UsageError("stacked BiLSTM: backward without forward");
    const std::size_t h = hidden_dim();
    if (d_out.size() != 2 * h) throw ShapeError("stacked BiLSTM: gradient width mismatch");
    Matrix dy(t_len_, 2 * h);
    for (std::size_t k = 0; k < h; ++k) {
      dy(t_len_ - 1, k) += d_out[k];
      dy(0, h + k) += d_out[h + k];
    }
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) dy = it->backward(dy);
    return dy;
  }

  ParamList params() {
    ParamList ps;
    for (auto& l : layers_) ps = concat(std::move(ps), l.params());
    return ps;
  }

  BiLstm& layer(std::size_t i) { return layers_.at(i); }

 private:
  std::vector<BiLstm> layers_;
  std::size_t t_len_ = 0;
};

}  // namespace psyling::nn
