#pragma once

// Sliding-window extraction of the per-sentence feature contour.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "psyling/features/lexical.hpp"
#include "psyling/features/lexicon_features.hpp"
#include "psyling/features/manifest.hpp"
#include "psyling/features/readability.hpp"
#include "psyling/features/resources.hpp"
#include "psyling/features/syntax.hpp"
#include "psyling/nn/tensor.hpp"

namespace psyling {

struct FeatureVector {
  std::vector<double> values;
  std::vector<std::uint8_t> degraded;
  std::string doc_id;
  std::size_t sentence_index = 0;
};

struct FeatureContour {
  std::string doc_id;
  std::vector<FeatureVector> vectors;

  std::size_t length() const { return vectors.size(); }

  /// N x F matrix, one row per sentence.
  Matrix to_matrix() const {
    const std::size_t f = vectors.empty() ? 0 : vectors.front().values.size();
    Matrix m(vectors.size(), f);
    for (std::size_t i = 0; i < vectors.size(); ++i) std::copy(vectors[i].values.begin(), vectors[i].values.end(), m.row(i).begin());
    return m;
  }
};

/// All 435 features of one window in manifest order.
inline FeatureVector extract_window(Window window, const FeatureManifest& manifest, const Resources& res) {
  FeatureVector fv;
  fv.values.reserve(manifest.size());
  fv.degraded.reserve(manifest.size());
  auto append = [&](GroupValues g) {
    fv.values.insert(fv.values.end(), g.values.begin(), g.values.end());
    fv.degraded.insert(fv.degraded.end(), g.degraded.begin(), g.degraded.end());
  };
  append(syntax_features(window, manifest.group(FeatureGroup::syntax)));
  append(lexical_features(window, manifest.group(FeatureGroup::lexical), res));
  append(readability_features(window, manifest.group(FeatureGroup::readability), res));
  append(lexicon_features(window, manifest.group(FeatureGroup::lexicon), res));
  for (std::size_t i = 0; i < fv.values.size(); ++i)
    if (!std::isfinite(fv.values[i]))
      throw NumericalError("feature '" + manifest.specs()[i].id + "' is not finite");
  return fv;
}

/// Feature vector for every sentence i over sentences max(0, i-w+1)..i.
inline FeatureContour contour(const AnnotatedDocument& doc, const FeatureManifest& manifest, const Resources& res,
                              std::size_t window_size = 1) {
  if (window_size < 1) throw ConfigError("window size must be at least 1");
  if (doc.sentences.empty()) throw DataError("document '" + doc.id + "' has no sentences");
  FeatureContour c{doc.id, {}};
  const std::span<const Sentence> all(doc.sentences);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t first = i + 1 >= window_size ? i + 1 - window_size : 0;
    auto fv = extract_window(all.subspan(first, i - first + 1), manifest, res);
    fv.doc_id = doc.id;
    fv.sentence_index = i;
    c.vectors.push_back(std::move(fv));
  }
  return c;
}

/// Per-feature z-scoring fitted on training contours only.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> std) : mean_(std::move(mean)), std_(std::move(std)) {}

  /// Pools every sentence vector of every contour. Features whose standard
  /// deviation is below 1e-12 are only centered.
  static Standardizer fit(std::span<const Matrix> contours) {
    if (contours.size() < 2) throw DataError("standardizer needs at least 2 training contours");
    const std::size_t f = contours.front().cols();
    std::vector<double> mean(f, 0.0), m2(f, 0.0);
    double n = 0;
    for (const auto& c : contours) {
      if (c.cols() != f) throw ShapeError("standardizer: contours differ in width");
      for (std::size_t r = 0; r < c.rows(); ++r) {
        n += 1;
        for (std::size_t j = 0; j < f; ++j) {
          const double d = c(r, j) - mean[j];
          mean[j] += d / n;
          m2[j] += d * (c(r, j) - mean[j]);
        }
      }
    }
    std::vector<double> sd(f);
    for (std::size_t j = 0; j < f; ++j) sd[j] = std::sqrt(m2[j] / n);
    return Standardizer(std::move(mean), std::move(sd));
  }

  Matrix transform(const Matrix& x) const {
    if (x.cols() != mean_.size()) throw ShapeError("standardizer: width mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t j = 0; j < x.cols(); ++j) {
        const double centered = x(r, j) - mean_[j];
        out(r, j) = std_[j] < 1e-12 ? centered : centered / std_[j];
      }
    return out;
  }

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return std_; }
  bool fitted() const { return !mean_.empty(); }

 private:
  std::vector<double> mean_, std_;
};

}  // namespace psyling
