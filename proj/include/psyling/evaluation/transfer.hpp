#pragma once

// Cross-dataset transfer: zero-shot scoring through a label mapping, or
// finetuning a copy of the source model under cross-validation, each with
// or without the neutral label.

#include <set>

#include "psyling/corpus.hpp"
#include "psyling/evaluation/cv.hpp"

namespace psyling {

struct TransferSetting {
  bool finetune = false;
  bool include_neutral = false;

  std::string name() const {
    return std::string(finetune ? "finetune" : "zero-shot") + (include_neutral ? "+neutral" : "-neutral");
  }

  static std::vector<TransferSetting> all() { return {{false, false}, {false, true}, {true, false}, {true, true}}; }
};

/// A trained source model and what it was trained on.
struct TransferSource {
  const Model* model = nullptr;
  Taxonomy taxonomy;
  const Standardizer* standardizer = nullptr;  // applied to target contours as well
};

/// Target examples with gold rows over `taxonomy`.
struct TransferTarget {
  Taxonomy taxonomy;
  std::vector<Sample> samples;
};

struct TransferOptions {
  TrainConfig finetune;
  CvConfig cv;
  bool exclude_zero_gold = false;
};

namespace detail {

inline constexpr const char* kNeutral = "neutral";

/// Target taxonomy and gold rows after adding or removing neutral. Removing
/// drops examples whose only gold label was neutral.
inline TransferTarget adjust_target(const TransferTarget& t, bool include_neutral) {
  TransferTarget out{t.taxonomy, {}};
  if (include_neutral) {
    if (t.taxonomy.has_neutral()) return t;
    out.taxonomy = t.taxonomy.with_label(kNeutral);
    for (auto s : t.samples) {
      s.labels.push_back(0);
      out.samples.push_back(std::move(s));
    }
    return out;
  }
  if (!t.taxonomy.has_neutral()) return t;
  const auto drop = *t.taxonomy.index_of(kNeutral);
  out.taxonomy = t.taxonomy.without_label(kNeutral);
  for (auto s : t.samples) {
    s.labels.erase(s.labels.begin() + static_cast<std::ptrdiff_t>(drop));
    if (std::count(s.labels.begin(), s.labels.end(), std::uint8_t{1}) > 0) out.samples.push_back(std::move(s));
  }
  return out;
}

/// For each target label, the source label indices mapped onto it.
inline std::vector<std::vector<std::size_t>> projection(const Taxonomy& source, const Taxonomy& target,
                                                        const LabelMapping& mapping, bool include_neutral) {
  std::vector<std::vector<std::size_t>> proj(target.size());
  for (std::size_t s = 0; s < source.size(); ++s) {
    const auto& label = source.labels()[s];
    std::optional<std::string> dst;
    if (label == kNeutral) {
      if (!include_neutral) continue;
      auto it = mapping.table.find(label);
      dst = it == mapping.table.end() ? std::optional<std::string>(kNeutral) : it->second;
    } else {
      auto it = mapping.table.find(label);
      if (it == mapping.table.end()) throw ConfigError("transfer mapping has no entry for source label '" + label + "'");
      dst = it->second;
    }
    if (!dst) continue;
    auto idx = target.index_of(*dst);
    if (!idx) continue;  // label dropped from this target
    proj[*idx].push_back(s);
  }
  std::vector<std::string> unreachable;
  for (std::size_t t = 0; t < target.size(); ++t)
    if (proj[t].empty()) unreachable.push_back(target.labels()[t]);
  if (!unreachable.empty())
    throw ConfigError("target labels unreachable through the mapping: " + join(unreachable, ", "));
  return proj;
}

}  // namespace detail

/// Zero-shot probabilities: target label t gets the max source probability
/// over the source labels mapped onto t.
inline std::vector<double> project_probabilities(const std::vector<double>& p,
                                                 const std::vector<std::vector<std::size_t>>& proj) {
  std::vector<double> out(proj.size(), 0.0);
  for (std::size_t t = 0; t < proj.size(); ++t)
    for (auto s : proj[t]) out[t] = std::max(out[t], p[s]);
  return out;
}

inline EvalReport transfer_run(const TransferSource& source, const TransferTarget& target,
                               const TransferSetting& setting, const LabelMapping& mapping,
                               const TransferOptions& opts, std::ostream* log = nullptr) {
  if (!source.model) throw UsageError("transfer: no source model");
  if (setting.include_neutral && !source.taxonomy.has_neutral())
    throw ConfigError("transfer with neutral needs a source taxonomy containing 'neutral'");
  for (const auto& s : target.samples)
    if (s.labels.size() != target.taxonomy.size())
      throw ShapeError("transfer: target sample '" + s.id + "' does not match the target taxonomy");

  const auto tgt = detail::adjust_target(target, setting.include_neutral);
  if (tgt.samples.empty()) throw DataError("transfer: no target examples left after neutral adjustment");
  const auto proj = detail::projection(source.taxonomy, tgt.taxonomy, mapping, setting.include_neutral);
  const bool single = !tgt.taxonomy.multi_label();

  EvalReport report;
  if (!setting.finetune) {
    StandardizedSamples z(tgt.samples, source.standardizer);
    auto model = source.model->clone();
    std::vector<std::vector<std::uint8_t>> gold, pred;
    for (const auto& s : z.samples()) {
      auto p = project_probabilities(model->forward(s.input(), false), proj);
      gold.push_back(s.labels);
      pred.push_back(decide(p, opts.finetune.threshold, single));
    }
    report = score(gold, pred, tgt.taxonomy.labels(), opts.exclude_zero_gold);
    report.metadata = {{"examples_scored", "all"}};
  } else {
    const Model& src = *source.model;
    const auto k = tgt.taxonomy.size();
    ModelFactory factory = [&src, k](const FoldContext& ctx) {
      auto m = src.clone();
      m->replace_output(k, ctx.seed);
      return m;
    };
    auto tc = opts.finetune;
    tc.single_label = single;
    auto cv = opts.cv;
    cv.exclude_zero_gold = opts.exclude_zero_gold;
    // the source standardizer is kept so the copied weights see inputs on the scale they were trained on
    cv.standardize = false;
    auto r = cross_validate(tgt.samples, tgt.taxonomy.labels(), factory, tc, cv, source.standardizer, log);
    report = std::move(r.mean);
  }
  report.metadata["setting"] = setting.name();
  report.metadata["finetune"] = setting.finetune;
  report.metadata["include_neutral"] = setting.include_neutral;
  report.metadata["source_taxonomy"] = source.taxonomy.name();
  report.metadata["target_taxonomy"] = tgt.taxonomy.name();
  report.metadata["name"] = setting.name();
  return report;
}

}  // namespace psyling
