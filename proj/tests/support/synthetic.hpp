#pragma once

// Synthetic corpora with planted signals, and synthetic EMBV1 files.

#include <cmath>
#include <string>
#include <vector>

#include "psyling/detail/rng.hpp"
#include "psyling/models/embeddings.hpp"
#include "psyling/models/train.hpp"

namespace psyling::testing {

/// Owns the inputs; samples() hands out pointers into it, so keep it alive
/// and unmodified while they are in use.
struct SyntheticSet {
  std::vector<std::string> labels;
  std::vector<std::string> ids;
  std::vector<Matrix> contours;
  std::vector<Matrix> embeddings;
  std::vector<std::vector<std::uint8_t>> gold;

  std::size_t size() const { return ids.size(); }

  std::vector<Sample> samples() const {
    std::vector<Sample> out;
    for (std::size_t i = 0; i < ids.size(); ++i)
      out.push_back({ids[i], contours.empty() ? nullptr : &contours[i],
                     embeddings.empty() ? nullptr : &embeddings[i], gold[i]});
    return out;
  }

  std::vector<Sample> samples(const std::vector<std::size_t>& idx) const {
    auto all = samples();
    std::vector<Sample> out;
    for (auto i : idx) out.push_back(all[i]);
    return out;
  }
};

inline std::vector<std::string> label_names(std::size_t k, const std::string& prefix = "label") {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

/// T x dim matrix of N(0, sd) noise with `signal[j]` added to column j of
/// every row.
inline Matrix planted_sequence(std::size_t t, std::size_t dim, const std::vector<double>& signal, double sd,
                               detail::Rng& rng) {
  Matrix m(t, dim);
  for (std::size_t r = 0; r < t; ++r)
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = sd * rng.normal() + (c < signal.size() ? signal[c] : 0.0);
  return m;
}

/// Linearly separable multi-label set: label k is on iff feature k carries
/// +margin, otherwise -margin.
inline SyntheticSet separable_set(std::size_t n, std::size_t k, std::uint64_t seed, std::size_t dim = 435,
                                  std::size_t t = 3, double margin = 1.5, double sd = 0.5,
                                  std::size_t feature_offset = 0) {
  detail::Rng rng(seed);
  SyntheticSet s;
  s.labels = label_names(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> y(k);
    std::vector<double> signal(dim, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      y[j] = rng.uniform() < 0.5;
      signal[feature_offset + j] = y[j] ? margin : -margin;
    }
    s.ids.push_back("sep" + std::to_string(i));
    s.contours.push_back(planted_sequence(t, dim, signal, sd, rng));
    s.gold.push_back(std::move(y));
  }
  return s;
}

/// Single-label set: row i belongs to label i % k and carries that label's
/// dense +-1 prototype (drawn from `proto_seed`) on every feature, plus
/// N(0, sd) noise. Stays learnable at full width from a few dozen rows.
inline SyntheticSet prototype_set(std::size_t n, std::size_t k, std::uint64_t proto_seed, std::uint64_t seed,
                                  const std::string& id_prefix = "proto", double sd = 1.0, std::size_t dim = 435,
                                  std::size_t t = 3) {
  detail::Rng proto_rng(proto_seed), rng(seed);
  std::vector<std::vector<double>> proto(k, std::vector<double>(dim));
  for (auto& row : proto)
    for (double& v : row) v = proto_rng.uniform() < 0.5 ? -1.0 : 1.0;
  SyntheticSet s;
  s.labels = label_names(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> y(k, 0);
    y[i % k] = 1;
    s.ids.push_back(id_prefix + std::to_string(i));
    s.contours.push_back(planted_sequence(t, dim, proto[i % k], sd, rng));
    s.gold.push_back(std::move(y));
  }
  return s;
}

/// Labels are a noisy linear function of `planted` latent features:
/// y_k = [w_k . z + noise > 0], with unit-norm w_k. The latents sit in the
/// first `planted` columns; every column also carries N(0, row_sd) noise.
inline SyntheticSet linear_planted_set(std::size_t n, std::size_t k, std::size_t planted, double label_noise,
                                       std::uint64_t seed, std::size_t dim = 435, std::size_t t = 3,
                                       double row_sd = 0.3) {
  detail::Rng rng(seed);
  std::vector<std::vector<double>> w(k, std::vector<double>(planted));
  for (auto& wk : w) {
    double norm = 0;
    for (double& v : wk) norm += (v = rng.normal()) * v;
    for (double& v : wk) v /= std::sqrt(norm);
  }
  SyntheticSet s;
  s.labels = label_names(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> z(planted);
    for (double& v : z) v = rng.normal();
    std::vector<std::uint8_t> y(k);
    for (std::size_t j = 0; j < k; ++j) {
      double a = label_noise * rng.normal();
      for (std::size_t p = 0; p < planted; ++p) a += w[j][p] * z[p];
      y[j] = a > 0;
    }
    s.ids.push_back("lin" + std::to_string(i));
    s.contours.push_back(planted_sequence(t, dim, z, row_sd, rng));
    s.gold.push_back(std::move(y));
  }
  return s;
}

/// Labels need both inputs: y_k = [a_k + b_k > 0] where a_k is planted in the
/// contour and b_k in the embedding. Either input alone recovers each label
/// only about three times in four.
inline SyntheticSet joint_signal_set(std::size_t n, std::size_t k, std::uint64_t seed, std::size_t emb_dim,
                                     std::size_t contour_dim = 435, std::size_t t = 3) {
  detail::Rng rng(seed);
  SyntheticSet s;
  s.labels = label_names(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> a(k), b(k);
    std::vector<std::uint8_t> y(k);
    for (std::size_t j = 0; j < k; ++j) {
      a[j] = rng.normal();
      b[j] = rng.normal();
      y[j] = a[j] + b[j] > 0;
    }
    s.ids.push_back("joint" + std::to_string(i));
    s.contours.push_back(planted_sequence(t, contour_dim, a, 0.3, rng));
    s.embeddings.push_back(planted_sequence(t, emb_dim, b, 0.3, rng));
    s.gold.push_back(std::move(y));
  }
  return s;
}

/// Random EMBV1 payload for the given ids with T drawn from [t_min, t_max].
inline EmbeddingFile synthetic_embeddings(const std::vector<std::string>& ids, std::uint16_t dim,
                                          std::size_t t_min, std::size_t t_max, std::uint64_t seed) {
  detail::Rng rng(seed);
  EmbeddingFile f;
  f.dim = dim;
  for (const auto& id : ids) {
    const std::size_t t = t_min + static_cast<std::size_t>(rng.below(t_max - t_min + 1));
    Matrix m(t, dim);
    // values representable in f32 so a round trip is exact
    for (double& v : m.data()) v = static_cast<float>(rng.normal());
    f.records.push_back({id, std::move(m)});
  }
  return f;
}

inline EmbeddingFile write_synthetic_embeddings(const std::string& path, const std::vector<std::string>& ids,
                                                std::uint16_t dim, std::size_t t_min, std::size_t t_max,
                                                std::uint64_t seed) {
  auto f = synthetic_embeddings(ids, dim, t_min, t_max, seed);
  write_embeddings(path, f);
  return f;
}

}  // namespace psyling::testing
