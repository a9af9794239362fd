#pragma once

// Mini-batch BCE / AdamW training with per-epoch dev selection, and
// thresholded prediction.

#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "psyling/evaluation/metrics.hpp"
#include "psyling/models/model.hpp"
#include "psyling/nn/adamw.hpp"
#include "psyling/nn/loss.hpp"

namespace psyling {

/// One training or evaluation example with its precomputed inputs.
struct Sample {
  std::string id;
  const Matrix* contour = nullptr;
  const Matrix* embedding = nullptr;
  std::vector<std::uint8_t> labels;

  ModelInput input() const { return {{id, contour}, {id, embedding}}; }
};

struct TrainConfig {
  std::size_t epochs = 8;
  std::size_t batch_size = 4;
  nn::AdamWConfig optimizer;
  std::optional<double> clip_norm;  // global gradient norm, off by default
  std::uint64_t seed = 0;
  double threshold = 0.5;
  bool single_label = false;
  bool output_layer_only = false;  // freeze everything but the final projection

  nlohmann::json to_json() const {
    nlohmann::json j = {{"epochs", epochs},
                        {"batch_size", batch_size},
                        {"lr", optimizer.lr},
                        {"weight_decay", optimizer.weight_decay},
                        {"beta1", optimizer.beta1},
                        {"beta2", optimizer.beta2},
                        {"eps", optimizer.eps},
                        {"seed", seed},
                        {"threshold", threshold},
                        {"single_label", single_label},
                        {"output_layer_only", output_layer_only}};
    j["clip_norm"] = clip_norm ? nlohmann::json(*clip_norm) : nlohmann::json(nullptr);
    return j;
  }

  static TrainConfig from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.optimizer.lr = j.value("lr", c.optimizer.lr);
    c.optimizer.weight_decay = j.value("weight_decay", c.optimizer.weight_decay);
    c.optimizer.beta1 = j.value("beta1", c.optimizer.beta1);
    c.optimizer.beta2 = j.value("beta2", c.optimizer.beta2);
    c.optimizer.eps = j.value("eps", c.optimizer.eps);
    c.seed = j.value("seed", c.seed);
    c.threshold = j.value("threshold", c.threshold);
    c.single_label = j.value("single_label", c.single_label);
    c.output_layer_only = j.value("output_layer_only", c.output_layer_only);
    if (j.contains("clip_norm") && !j["clip_norm"].is_null()) c.clip_norm = j["clip_norm"].get<double>();
    if (c.epochs < 1) throw ConfigError("epochs must be at least 1");
    if (c.batch_size < 1) throw ConfigError("batch_size must be at least 1");
    if (c.threshold < 0.0 || c.threshold > 1.0) throw ConfigError("threshold must be in [0, 1]");
    return c;
  }
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0;
  std::optional<double> dev_macro_f1;
  std::optional<double> dev_loss;
};

struct TrainResult {
  std::vector<EpochLog> epochs;
  std::size_t best_epoch = 0;
  std::optional<double> best_dev_macro_f1;
  double final_train_loss = 0;
};

struct Prediction {
  std::string id;
  std::vector<std::uint8_t> labels;
  std::vector<double> probabilities;
};

/// Label k is on iff p_k >= threshold; for single-label taxonomies an empty
/// decision falls back to the argmax label.
inline std::vector<std::uint8_t> decide(const std::vector<double>& p, double threshold, bool single_label) {
  std::vector<std::uint8_t> on(p.size(), 0);
  bool any = false;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] >= threshold) on[k] = 1, any = true;
  if (!any && single_label && !p.empty())
    on[static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin())] = 1;
  return on;
}

inline std::vector<Prediction> predict(Model& model, std::span<const Sample> samples, double threshold = 0.5,
                                       bool single_label = false) {
  std::vector<Prediction> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    auto p = model.forward(s.input(), false);
    out.push_back({s.id, decide(p, threshold, single_label), std::move(p)});
  }
  return out;
}

inline EvalReport evaluate(Model& model, std::span<const Sample> samples, const std::vector<std::string>& labels,
                           double threshold = 0.5, bool single_label = false, bool exclude_zero_gold = false) {
  auto preds = predict(model, samples, threshold, single_label);
  std::vector<std::vector<std::uint8_t>> gold, pred;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    gold.push_back(samples[i].labels);
    pred.push_back(preds[i].labels);
  }
  return score(gold, pred, labels, exclude_zero_gold);
}

/// Mean BCE of the model over samples in evaluation mode.
inline double mean_loss(Model& model, std::span<const Sample> samples) {
  double total = 0;
  for (const auto& s : samples) total += nn::bce_loss(model.forward(s.input(), false), s.labels).loss;
  return samples.empty() ? 0.0 : total / static_cast<double>(samples.size());
}

/// Trains in place. With a non-empty dev set the parameters of the epoch with
/// the best dev macro-F1 are restored at the end; ties go to the lower dev loss. Each epoch writes one JSON
/// line to `log` when given.
inline TrainResult train(Model& model, std::span<const Sample> train_set, std::span<const Sample> dev_set,
                         const TrainConfig& cfg, std::ostream* log = nullptr) {
  if (train_set.empty()) throw DataError("training set is empty");
  for (const auto& s : train_set)
    if (s.labels.size() != model.num_labels())
      throw ShapeError("sample '" + s.id + "' has " + std::to_string(s.labels.size()) + " labels, model has " +
                       std::to_string(model.num_labels()));

  auto params = model.params();
  std::vector<bool> was_frozen;
  for (auto* p : params) was_frozen.push_back(p->frozen);
  if (cfg.output_layer_only) {
    for (auto* p : params) p->frozen = true;
    for (auto* p : model.output_params()) p->frozen = false;
  }

  nn::AdamW opt(cfg.optimizer);
  detail::Rng rng(cfg.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::string> label_names(model.num_labels());

  TrainResult result;
  std::vector<Matrix> best;
  double best_dev_loss = 0;
  std::uint64_t stream = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const double inv = 1.0 / static_cast<double>(end - start);
      nn::zero_grads(params);
      for (std::size_t i = start; i < end; ++i) {
        const auto& s = train_set[order[i]];
        model.set_dropout_stream((cfg.seed << 32) ^ stream++);
        auto p = model.forward(s.input(), true);
        auto l = nn::bce_loss(p, s.labels);
        if (!std::isfinite(l.loss))
          throw NumericalError("non-finite loss at epoch " + std::to_string(epoch) + " on example '" + s.id + "'");
        epoch_loss += l.loss;
        for (double& g : l.grad) g *= inv;
        model.backward(l.grad);
      }
      if (cfg.clip_norm) nn::clip_grad_norm(params, *cfg.clip_norm);
      opt.step(params);
    }
    EpochLog e{epoch, epoch_loss / static_cast<double>(train_set.size()), std::nullopt};
    if (!std::isfinite(e.train_loss)) throw NumericalError("non-finite training loss at epoch " + std::to_string(epoch));
    if (!dev_set.empty()) {
      e.dev_macro_f1 = evaluate(model, dev_set, label_names, cfg.threshold, cfg.single_label).macro_f1;
      e.dev_loss = mean_loss(model, dev_set);
      if (!result.best_dev_macro_f1 || *e.dev_macro_f1 > *result.best_dev_macro_f1 ||
          (*e.dev_macro_f1 == *result.best_dev_macro_f1 && *e.dev_loss < best_dev_loss)) {
        best_dev_loss = *e.dev_loss;
        result.best_dev_macro_f1 = e.dev_macro_f1;
        result.best_epoch = epoch;
        best.clear();
        for (auto* p : params) best.push_back(p->value);
      }
    } else {
      result.best_epoch = epoch;
    }
    result.epochs.push_back(e);
    if (log) {
      nlohmann::json line = {{"epoch", e.epoch}, {"train_loss", e.train_loss}};
      line["dev_macro_f1"] = e.dev_macro_f1 ? nlohmann::json(*e.dev_macro_f1) : nlohmann::json(nullptr);
      line["dev_loss"] = e.dev_loss ? nlohmann::json(*e.dev_loss) : nlohmann::json(nullptr);
      *log << line.dump() << '\n';
    }
  }
  if (!best.empty())
    for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best[i];
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->frozen = was_frozen[i];
  result.final_train_loss = result.epochs.back().train_loss;
  return result;
}

}  // namespace psyling
