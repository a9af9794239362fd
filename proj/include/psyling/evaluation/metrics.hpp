#pragma once

// Multi-label precision / recall / F1 with macro and micro averaging.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "psyling/error.hpp"

namespace psyling {

struct LabelScore {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0, recall = 0, f1 = 0;
  std::size_t support() const { return tp + fn; }
};

/// 0/0 is defined as 0.
inline double ratio_or_zero(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

inline double f1_of(double p, double r) { return ratio_or_zero(2.0 * p * r, p + r); }

struct EvalReport {
  std::vector<std::string> labels;
  std::vector<LabelScore> per_label;
  double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
  double micro_precision = 0, micro_recall = 0, micro_f1 = 0;
  double accuracy = 0;  // subset (exact-match) accuracy
  std::size_t examples = 0;
  bool zero_gold_excluded = false;
  nlohmann::json metadata = nlohmann::json::object();

  nlohmann::json to_json() const {
    nlohmann::json per = nlohmann::json::array();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto& s = per_label[i];
      per.push_back({{"label", labels[i]},
                     {"tp", s.tp},
                     {"fp", s.fp},
                     {"fn", s.fn},
                     {"tn", s.tn},
                     {"precision", s.precision},
                     {"recall", s.recall},
                     {"f1", s.f1}});
    }
    return {{"examples", examples},
            {"accuracy", accuracy},
            {"macro", {{"precision", macro_precision}, {"recall", macro_recall}, {"f1", macro_f1}}},
            {"micro", {{"precision", micro_precision}, {"recall", micro_recall}, {"f1", micro_f1}}},
            {"zero_gold_excluded", zero_gold_excluded},
            {"per_label", per},
            {"metadata", metadata}};
  }

  static EvalReport from_json(const nlohmann::json& j) {
    EvalReport r;
    r.examples = j.at("examples").get<std::size_t>();
    r.accuracy = j.at("accuracy").get<double>();
    r.macro_precision = j.at("macro").at("precision").get<double>();
    r.macro_recall = j.at("macro").at("recall").get<double>();
    r.macro_f1 = j.at("macro").at("f1").get<double>();
    r.micro_precision = j.at("micro").at("precision").get<double>();
    r.micro_recall = j.at("micro").at("recall").get<double>();
    r.micro_f1 = j.at("micro").at("f1").get<double>();
    r.zero_gold_excluded = j.value("zero_gold_excluded", false);
    for (const auto& e : j.at("per_label")) {
      r.labels.push_back(e.at("label").get<std::string>());
      LabelScore s;
      s.tp = e.at("tp").get<std::size_t>();
      s.fp = e.at("fp").get<std::size_t>();
      s.fn = e.at("fn").get<std::size_t>();
      s.tn = e.at("tn").get<std::size_t>();
      s.precision = e.at("precision").get<double>();
      s.recall = e.at("recall").get<double>();
      s.f1 = e.at("f1").get<double>();
      r.per_label.push_back(s);
    }
    r.metadata = j.value("metadata", nlohmann::json::object());
    return r;
  }
};

/// Scores aligned multi-hot rows. With `exclude_zero_gold`, macro averages
/// skip labels that have no gold instances; otherwise they count as 0.
inline EvalReport score(std::span<const std::vector<std::uint8_t>> gold, std::span<const std::vector<std::uint8_t>> pred,
                        std::vector<std::string> labels, bool exclude_zero_gold = false) {
  if (gold.size() != pred.size()) throw PairingError("score: gold and prediction counts differ");
  const std::size_t k = labels.size();
  EvalReport r;
  r.labels = std::move(labels);
  r.per_label.assign(k, {});
  r.examples = gold.size();
  r.zero_gold_excluded = exclude_zero_gold;
  std::size_t exact = 0;
  for (std::size_t n = 0; n < gold.size(); ++n) {
    if (gold[n].size() != k || pred[n].size() != k) throw ShapeError("score: row width differs from label count");
    bool match = true;
    for (std::size_t i = 0; i < k; ++i) {
      const bool g = gold[n][i] != 0, p = pred[n][i] != 0;
      auto& s = r.per_label[i];
      if (g && p) ++s.tp;
      else if (!g && p) ++s.fp;
      else if (g && !p) ++s.fn;
      else ++s.tn;
      match = match && g == p;
    }
    exact += match;
  }
  double tp = 0, fp = 0, fn = 0, sum_p = 0, sum_r = 0, sum_f = 0, counted = 0;
  for (auto& s : r.per_label) {
    s.precision = ratio_or_zero(static_cast<double>(s.tp), static_cast<double>(s.tp + s.fp));
    s.recall = ratio_or_zero(static_cast<double>(s.tp), static_cast<double>(s.tp + s.fn));
    s.f1 = f1_of(s.precision, s.recall);
    tp += static_cast<double>(s.tp);
    fp += static_cast<double>(s.fp);
    fn += static_cast<double>(s.fn);
    if (exclude_zero_gold && s.support() == 0) continue;
    sum_p += s.precision;
    sum_r += s.recall;
    sum_f += s.f1;
    counted += 1;
  }
  r.macro_precision = ratio_or_zero(sum_p, counted);
  r.macro_recall = ratio_or_zero(sum_r, counted);
  r.macro_f1 = ratio_or_zero(sum_f, counted);
  r.micro_precision = ratio_or_zero(tp, tp + fp);
  r.micro_recall = ratio_or_zero(tp, tp + fn);
  r.micro_f1 = f1_of(r.micro_precision, r.micro_recall);
  r.accuracy = ratio_or_zero(static_cast<double>(exact), static_cast<double>(gold.size()));
  return r;
}

/// Id-checked variant: row n of `pred_ids` must name the same text as row n
/// of `gold_ids`.
inline EvalReport score(std::span<const std::string> gold_ids, std::span<const std::vector<std::uint8_t>> gold,
                        std::span<const std::string> pred_ids, std::span<const std::vector<std::uint8_t>> pred,
                        std::vector<std::string> labels, bool exclude_zero_gold = false) {
  if (gold_ids.size() != gold.size() || pred_ids.size() != pred.size())
    throw UsageError("score: id and row counts differ");
  if (gold_ids.size() != pred_ids.size()) throw PairingError("score: gold and prediction counts differ");
  for (std::size_t n = 0; n < gold_ids.size(); ++n)
    if (gold_ids[n] != pred_ids[n])
      throw PairingError("score: row " + std::to_string(n) + " pairs gold '" + gold_ids[n] + "' with prediction '" +
                         pred_ids[n] + "'");
  return score(gold, pred, std::move(labels), exclude_zero_gold);
}

/// Unweighted mean of aggregate metrics and per-label P/R/F1 across runs
/// (e.g. the 25 folds of a repeated k-fold plan). Counts are summed.
inline EvalReport average_reports(std::span<const EvalReport> reports) {
  if (reports.empty()) throw UsageError("average_reports: no reports");
  EvalReport out;
  out.labels = reports.front().labels;
  out.per_label.assign(out.labels.size(), {});
  out.zero_gold_excluded = reports.front().zero_gold_excluded;
  const double n = static_cast<double>(reports.size());
  for (const auto& r : reports) {
    if (r.labels != out.labels) throw UsageError("average_reports: label sets differ");
    out.examples += r.examples;
    out.accuracy += r.accuracy / n;
    out.macro_precision += r.macro_precision / n;
    out.macro_recall += r.macro_recall / n;
    out.macro_f1 += r.macro_f1 / n;
    out.micro_precision += r.micro_precision / n;
    out.micro_recall += r.micro_recall / n;
    out.micro_f1 += r.micro_f1 / n;
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
      auto& s = out.per_label[i];
      const auto& t = r.per_label[i];
      s.tp += t.tp;
      s.fp += t.fp;
      s.fn += t.fn;
      s.tn += t.tn;
      s.precision += t.precision / n;
      s.recall += t.recall / n;
      s.f1 += t.f1 / n;
    }
  }
  out.metadata = {{"runs", reports.size()}};
  return out;
}

}  // namespace psyling
