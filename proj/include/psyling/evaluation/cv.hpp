#pragma once

// Repeated k-fold plans and a fold runner around train/evaluate.

#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <vector>

#include "psyling/detail/rng.hpp"
#include "psyling/features/contour.hpp"
#include "psyling/models/train.hpp"

namespace psyling {

struct FoldPair {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// `repeats` independent shuffles of 0..n-1, each cut into k contiguous folds.
/// The first n % k folds get one extra item. Indices within a fold are sorted.
inline std::vector<FoldPair> repeated_kfold(std::size_t n, std::size_t k = 5, std::size_t repeats = 5,
                                            std::uint64_t seed = 0) {
  if (k < 2) throw ConfigError("k-fold needs k >= 2, got " + std::to_string(k));
  if (repeats < 1) throw ConfigError("k-fold needs at least one repeat");
  if (n < k) throw DataError("k-fold: " + std::to_string(n) + " examples cannot fill " + std::to_string(k) + " folds");
  detail::Rng rng(seed);
  std::vector<FoldPair> plan;
  std::vector<std::size_t> order(n);
  for (std::size_t r = 0; r < repeats; ++r) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<std::size_t> fold_of(n);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const std::size_t size = n / k + (f < n % k ? 1 : 0);
      for (std::size_t i = 0; i < size; ++i) fold_of[order[pos++]] = f;
    }
    for (std::size_t f = 0; f < k; ++f) {
      FoldPair p{r, f, {}, {}};
      for (std::size_t i = 0; i < n; ++i) (fold_of[i] == f ? p.test : p.train).push_back(i);
      plan.push_back(std::move(p));
    }
  }
  return plan;
}

struct CvConfig {
  std::size_t k = 5;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  double dev_fraction = 0.1;  // carved from each training fold for epoch selection
  bool standardize = true;
  bool exclude_zero_gold = false;

  nlohmann::json to_json() const {
    return {{"k", k},
            {"repeats", repeats},
            {"seed", seed},
            {"dev_fraction", dev_fraction},
            {"standardize", standardize},
            {"exclude_zero_gold", exclude_zero_gold}};
  }

  static CvConfig from_json(const nlohmann::json& j) {
    CvConfig c;
    c.k = j.value("k", c.k);
    c.repeats = j.value("repeats", c.repeats);
    c.seed = j.value("seed", c.seed);
    c.dev_fraction = j.value("dev_fraction", c.dev_fraction);
    c.standardize = j.value("standardize", c.standardize);
    c.exclude_zero_gold = j.value("exclude_zero_gold", c.exclude_zero_gold);
    if (c.dev_fraction < 0.0 || c.dev_fraction >= 1.0) throw ConfigError("dev_fraction must be in [0, 1)");
    return c;
  }
};

/// Samples whose contours have been passed through a standardizer. Owns the
/// transformed matrices.
class StandardizedSamples {
 public:
  StandardizedSamples(std::span<const Sample> in, const Standardizer* z) {
    storage_.reserve(in.size());
    for (const auto& s : in) {
      Sample c = s;
      if (z && s.contour) {
        storage_.push_back(std::make_unique<Matrix>(z->transform(*s.contour)));
        c.contour = storage_.back().get();
      }
      samples_.push_back(std::move(c));
    }
  }

  std::span<const Sample> samples() const { return samples_; }

 private:
  std::vector<std::unique_ptr<Matrix>> storage_;
  std::vector<Sample> samples_;
};

inline Standardizer fit_standardizer(std::span<const Sample> train) {
  std::vector<Matrix> contours;
  for (const auto& s : train)
    if (s.contour) contours.push_back(*s.contour);
  return Standardizer::fit(contours);
}

/// Splits training indices into (fit, dev). Dev is empty when the fraction
/// rounds to zero or fewer than two items would remain.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> carve_dev(std::vector<std::size_t> train,
                                                                               double fraction, std::uint64_t seed) {
  const auto n_dev = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(train.size())));
  if (n_dev == 0 || train.size() < n_dev + 2) return {train, {}};
  detail::Rng rng(seed);
  rng.shuffle(train);
  std::vector<std::size_t> dev(train.end() - static_cast<std::ptrdiff_t>(n_dev), train.end());
  train.resize(train.size() - n_dev);
  std::sort(train.begin(), train.end());
  std::sort(dev.begin(), dev.end());
  return {train, dev};
}

struct FoldContext {
  const FoldPair& pair;
  std::uint64_t seed;  // distinct per fold
};

using ModelFactory = std::function<std::unique_ptr<Model>(const FoldContext&)>;

struct CvResult {
  std::vector<EvalReport> folds;
  EvalReport mean;
};

inline std::uint64_t fold_seed(std::uint64_t seed, std::size_t repeat, std::size_t fold) {
  return detail::splitmix64(seed ^ (0x9E3779B97F4A7C15ull * (repeat * 1000 + fold + 1)));
}

/// Trains a fresh model per fold and scores its test fold. Contours are
/// z-scored with `fixed` when given, otherwise with a standardizer fitted on
/// the fold's training part (if `cv.standardize`).
inline CvResult cross_validate(std::span<const Sample> samples, const std::vector<std::string>& labels,
                               const ModelFactory& factory, const TrainConfig& train_cfg, const CvConfig& cv,
                               const Standardizer* fixed = nullptr, std::ostream* log = nullptr) {
  CvResult out;
  for (const auto& pair : repeated_kfold(samples.size(), cv.k, cv.repeats, cv.seed)) {
    const auto seed = fold_seed(cv.seed, pair.repeat, pair.fold);
    auto [fit_idx, dev_idx] = carve_dev(pair.train, cv.dev_fraction, seed);
    auto pick = [&](const std::vector<std::size_t>& idx) {
      std::vector<Sample> v;
      for (auto i : idx) v.push_back(samples[i]);
      return v;
    };
    const auto fit_raw = pick(fit_idx), dev_raw = pick(dev_idx), test_raw = pick(pair.test);

    std::optional<Standardizer> local;
    const Standardizer* z = fixed;
    if (!z && cv.standardize && fit_raw.front().contour) {
      local = fit_standardizer(fit_raw);
      z = &*local;
    }
    StandardizedSamples fit(fit_raw, z), dev(dev_raw, z), test(test_raw, z);

    auto model = factory({pair, seed});
    auto tc = train_cfg;
    tc.seed = seed;
    if (log) *log << nlohmann::json{{"repeat", pair.repeat}, {"fold", pair.fold}}.dump() << '\n';
    train(*model, fit.samples(), dev.samples(), tc, log);
    auto report = evaluate(*model, test.samples(), labels, tc.threshold, tc.single_label, cv.exclude_zero_gold);
    report.metadata = {{"repeat", pair.repeat}, {"fold", pair.fold}, {"seed", seed}};
    out.folds.push_back(std::move(report));
  }
  out.mean = average_reports(out.folds);
  out.mean.metadata = {{"runs", out.folds.size()}, {"k", cv.k}, {"repeats", cv.repeats}, {"seed", cv.seed}};
  return out;
}

/// Factory building a fresh model from `cfg` with the fold's seed.
inline ModelFactory fresh_models(ModelConfig cfg) {
  return [cfg](const FoldContext& ctx) {
    auto c = cfg;
    c.seed = ctx.seed;
    return make_model(c);
  };
}

}  // namespace psyling
