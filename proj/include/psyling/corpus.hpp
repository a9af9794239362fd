#pragma once

// Emotion datasets: taxonomies, loaders for the GoEmotions / ISEAR / unified
// JSON-lines formats, label re-projection and deterministic splitting.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "psyling/detail/rng.hpp"
#include "psyling/detail/text.hpp"
#include "psyling/error.hpp"

namespace psyling {

class Taxonomy {
 public:
  Taxonomy() = default;

  Taxonomy(std::string name, std::vector<std::string> labels, bool multi_label)
      : name_(std::move(name)), labels_(std::move(labels)), multi_label_(multi_label) {
    if (labels_.size() < 2) throw ConfigError("taxonomy '" + name_ + "' needs at least 2 labels");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second)
        throw ConfigError("taxonomy '" + name_ + "' has duplicate label '" + labels_[i] + "'");
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool multi_label() const { return multi_label_; }
  bool has_neutral() const { return index_.count("neutral") != 0; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Taxonomy with_label(const std::string& label) const {
    if (index_of(label)) return *this;
    auto labels = labels_;
    labels.push_back(label);
    return Taxonomy(name_, std::move(labels), multi_label_);
  }

  Taxonomy without_label(const std::string& label) const {
    if (!index_of(label)) return *this;
    std::vector<std::string> labels;
    for (const auto& l : labels_)
      if (l != label) labels.push_back(l);
    return Taxonomy(name_, std::move(labels), multi_label_);
  }

  friend bool operator==(const Taxonomy& a, const Taxonomy& b) {
    return a.name_ == b.name_ && a.labels_ == b.labels_ && a.multi_label_ == b.multi_label_;
  }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  bool multi_label_ = true;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LabeledExample {
  std::string id;
  std::string text;
  std::vector<std::uint8_t> labels;  // multi-hot, |labels| == K
  std::optional<std::vector<int>> annotator_counts;

  std::size_t active_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
  }
};

struct Dataset {
  Taxonomy taxonomy;
  std::vector<LabeledExample> examples;
  std::string provenance;

  std::size_t size() const { return examples.size(); }
};

namespace taxonomies {

inline const std::vector<std::string>& goemotions_labels() {
  static const std::vector<std::string> labels = {
      "admiration", "amusement", "anger",       "annoyance",      "approval", "caring",  "confusion",
      "curiosity",  "desire",    "disappointment", "disapproval", "disgust",  "embarrassment",
      "excitement", "fear",      "gratitude",   "grief",          "joy",      "love",    "nervousness",
      "optimism",   "pride",     "realization", "relief",         "remorse",  "sadness", "surprise",
      "neutral"};
  return labels;
}

inline Taxonomy goemotions() { return Taxonomy("goemotions", goemotions_labels(), true); }

inline Taxonomy ekman(bool with_neutral = true) {
  std::vector<std::string> l = {"anger", "disgust", "fear", "joy", "sadness", "surprise"};
  if (with_neutral) l.push_back("neutral");
  return Taxonomy("ekman", std::move(l), true);
}

inline Taxonomy isear() {
  return Taxonomy("isear", {"joy", "fear", "anger", "sadness", "shame", "guilt", "disgust"}, false);
}

/// Label sets of the unified-format datasets, keyed by dataset id.
inline Taxonomy unified(const std::string& dataset_id) {
  const std::vector<std::string> ekman6 = {"anger", "disgust", "fear", "joy", "sadness", "surprise"};
  const std::vector<std::string> plutchik = {"anger", "anticipation", "disgust", "fear",
                                             "joy",   "sadness",      "surprise", "trust"};
  auto plus = [](std::vector<std::string> v, std::initializer_list<const char*> extra) {
    for (auto* e : extra) v.emplace_back(e);
    return v;
  };
  if (dataset_id == "affectivetext") return Taxonomy(dataset_id, ekman6, true);
  if (dataset_id == "tec") return Taxonomy(dataset_id, ekman6, false);
  if (dataset_id == "emostimulus") return Taxonomy(dataset_id, plus(ekman6, {"shame"}), false);
  if (dataset_id == "isear_ued")
    return Taxonomy(dataset_id, {"anger", "disgust", "fear", "joy", "sadness"}, false);
  if (dataset_id == "crowdflower")
    return Taxonomy(dataset_id, {"anger", "fear", "joy", "love", "sadness", "surprise", "neutral"}, false);
  if (dataset_id == "electoraltweets") return Taxonomy(dataset_id, plus(plutchik, {"neutral"}), false);
  if (dataset_id == "ssec") return Taxonomy(dataset_id, plutchik, true);
  throw ConfigError("unknown unified dataset id '" + dataset_id + "'");
}

inline const std::vector<std::string>& unified_ids() {
  static const std::vector<std::string> ids = {"affectivetext", "crowdflower", "electoraltweets", "emostimulus",
                                               "isear_ued",     "ssec",        "tec"};
  return ids;
}

}  // namespace taxonomies

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  return in;
}

inline void require_nonempty(const Dataset& d) {
  if (d.examples.empty()) throw DataError("dataset '" + d.provenance + "' has no examples with labels");
}

}  // namespace detail

/// Reads GoEmotions TSV rows `text<TAB>label ids<TAB>example id`. A path to a
/// directory loads every `*.tsv` inside it in name order.
///
/// Rows sharing an example id are treated as separate raters, and a label's
/// vote count is the number of rows that chose it. With `require_agreement`
/// only labels chosen by at least two raters survive. The pre-filtered public
/// release has one row per id; load it with `require_agreement = false`.
inline Dataset load_goemotions(const std::string& path, bool require_agreement) {
  std::vector<std::string> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.path().extension() == ".tsv") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw LoadError("no .tsv files in '" + path + "'");
  } else {
    files.push_back(path);
  }

  const Taxonomy tax = taxonomies::goemotions();
  const std::size_t k = tax.size();
  std::vector<std::string> order;
  std::unordered_map<std::string, std::pair<std::string, std::vector<int>>> votes;

  for (const auto& file : files) {
    auto in = detail::open_input(file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      detail::chomp(line);
      if (detail::trim(line).empty()) continue;
      auto cols = detail::split(line, '\t');
      if (cols.size() != 3)
        throw FormatError(file + ":" + std::to_string(lineno) + ": expected 3 tab-separated columns, got " +
                          std::to_string(cols.size()));
      auto& [text, counts] = votes[cols[2]];
      if (counts.empty()) {
        counts.assign(k, 0);
        text = cols[0];
        order.push_back(cols[2]);
      }
      for (const auto& tok : detail::split(cols[1], ',')) {
        auto t = detail::trim(tok);
        std::size_t idx = 0;
        try {
          std::size_t used = 0;
          idx = std::stoul(std::string(t), &used);
          if (used != t.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw FormatError(file + ":" + std::to_string(lineno) + ": bad label index '" + std::string(t) + "'");
        }
        if (idx >= k)
          throw FormatError(file + ":" + std::to_string(lineno) + ": label index " + std::to_string(idx) +
                            " out of range (K=" + std::to_string(k) + ")");
        counts[idx] += 1;
      }
    }
  }

  Dataset out{tax, {}, "goemotions"};
  const int min_votes = require_agreement ? 2 : 1;
  for (const auto& id : order) {
    const auto& [text, counts] = votes.at(id);
    LabeledExample ex{id, text, std::vector<std::uint8_t>(k, 0), counts};
    for (std::size_t i = 0; i < k; ++i) ex.labels[i] = counts[i] >= min_votes ? 1 : 0;
    if (ex.active_count() > 0) out.examples.push_back(std::move(ex));
  }
  detail::require_nonempty(out);
  return out;
}

namespace detail {

inline std::string unquote_csv(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      out += s[i];
      if (s[i] == '"' && s[i + 1] == '"') ++i;
    }
    return out;
  }
  return std::string(s);
}

}  // namespace detail

/// Reads an ISEAR file with header `label,text` (comma or tab delimited).
/// Only the first delimiter splits a row; the sentence may contain more.
inline Dataset load_isear(const std::string& path) {
  auto in = detail::open_input(path);
  const Taxonomy tax = taxonomies::isear();
  std::string line;
  if (!std::getline(in, line)) throw LoadError("'" + path + "' is empty");
  detail::chomp(line);
  const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
  auto header = detail::split(line, delim);
  if (header.size() < 2 || detail::to_lower(detail::trim(header[0])) != "label")
    throw FormatError(path + ": expected header 'label" + std::string(1, delim) + "text'");

  Dataset out{tax, {}, "isear"};
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    detail::chomp(line);
    if (detail::trim(line).empty()) continue;
    auto pos = line.find(delim);
    if (pos == std::string::npos) throw FormatError(path + ":" + std::to_string(lineno) + ": missing delimiter");
    const auto label = detail::to_lower(detail::unquote_csv(std::string_view(line).substr(0, pos)));
    auto idx = tax.index_of(label);
    if (!idx)
      throw FormatError(path + ":" + std::to_string(lineno) + ": unknown label '" + label + "' in row: " + line);
    LabeledExample ex{"isear-" + std::to_string(out.examples.size() + 1),
                      detail::unquote_csv(std::string_view(line).substr(pos + 1)),
                      std::vector<std::uint8_t>(tax.size(), 0),
                      std::nullopt};
    ex.labels[*idx] = 1;
    out.examples.push_back(std::move(ex));
  }
  detail::require_nonempty(out);
  return out;
}

/// Reads the unified JSON-lines schema
/// `{"id", "text", "labels": {name: score}, "source"}`. A label is active when
/// its score exceeds `threshold`; records naming labels outside the dataset's
/// taxonomy are rejected.
inline Dataset load_unified(const std::string& path, const std::string& dataset_id, double threshold = 0.0) {
  const Taxonomy tax = taxonomies::unified(dataset_id);
  auto in = detail::open_input(path);
  Dataset out{tax, {}, dataset_id};
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("text") || !rec.contains("labels") ||
        !rec["labels"].is_object())
      throw FormatError(where + ": record needs id, text and labels object");
    LabeledExample ex{rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump(),
                      rec["text"].get<std::string>(), std::vector<std::uint8_t>(tax.size(), 0), std::nullopt};
    for (const auto& [name, score] : rec["labels"].items()) {
      auto idx = tax.index_of(name);
      if (!idx) throw FormatError(where + ": label '" + name + "' is not part of the " + dataset_id + " taxonomy");
      if (!score.is_number()) throw FormatError(where + ": score for '" + name + "' is not a number");
      if (score.get<double>() > threshold) ex.labels[*idx] = 1;
    }
    if (!seen.insert(ex.id).second) throw FormatError(where + ": duplicate id '" + ex.id + "'");
    if (ex.active_count() > 0) out.examples.push_back(std::move(ex));
  }
  detail::require_nonempty(out);
  return out;
}

/// Source label -> target label; `std::nullopt` drops the label.
struct LabelMapping {
  std::map<std::string, std::optional<std::string>> table;

  static constexpr const char* drop_marker = "DROP";

  static LabelMapping identity(const Taxonomy& tax) {
    LabelMapping m;
    for (const auto& l : tax.labels()) m.table[l] = l;
    return m;
  }

  /// Mapping equivalent to applying `first` and then `second`.
  static LabelMapping compose(const LabelMapping& first, const LabelMapping& second) {
    LabelMapping m;
    for (const auto& [src, mid] : first.table) {
      if (!mid) {
        m.table[src] = std::nullopt;
        continue;
      }
      auto it = second.table.find(*mid);
      if (it == second.table.end()) throw ConfigError("composition: '" + *mid + "' unmapped in second table");
      m.table[src] = it->second;
    }
    return m;
  }
};

/// Reads `source<TAB>target` rows; a target of `DROP` deletes the label.
inline LabelMapping load_mapping(const std::string& path) {
  auto in = detail::open_input(path);
  LabelMapping m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::chomp(line);
    auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cols = detail::split(t, '\t');
    if (cols.size() != 2) throw FormatError(path + ":" + std::to_string(lineno) + ": expected source<TAB>target");
    std::string src(detail::trim(cols[0])), dst(detail::trim(cols[1]));
    if (dst == LabelMapping::drop_marker)
      m.table[src] = std::nullopt;
    else
      m.table[src] = dst;
  }
  if (m.table.empty()) throw LoadError("mapping '" + path + "' is empty");
  return m;
}

/// Projects every example onto `target`. Several sources landing on one target
/// label collapse to a single activation; examples left without labels are removed.
inline Dataset map_taxonomy(const Dataset& dataset, const LabelMapping& mapping, const Taxonomy& target) {
  const auto& src_labels = dataset.taxonomy.labels();
  std::vector<std::optional<std::size_t>> proj(src_labels.size());
  std::vector<std::string> unmapped;
  for (std::size_t i = 0; i < src_labels.size(); ++i) {
    auto it = mapping.table.find(src_labels[i]);
    if (it == mapping.table.end()) {
      unmapped.push_back(src_labels[i]);
      continue;
    }
    if (!it->second) continue;
    auto idx = target.index_of(*it->second);
    if (!idx) throw ConfigError("mapping target '" + *it->second + "' is not in taxonomy '" + target.name() + "'");
    proj[i] = *idx;
  }
  if (!unmapped.empty()) throw ConfigError("unmapped source labels: " + detail::join(unmapped, ", "));

  Dataset out{target, {}, dataset.provenance};
  for (const auto& ex : dataset.examples) {
    LabeledExample m{ex.id, ex.text, std::vector<std::uint8_t>(target.size(), 0), std::nullopt};
    for (std::size_t i = 0; i < ex.labels.size(); ++i)
      if (ex.labels[i] && proj[i]) m.labels[*proj[i]] = 1;
    if (m.active_count() > 0) out.examples.push_back(std::move(m));
  }
  return out;
}

struct SplitRatios {
  double train = 0.8, dev = 0.1, test = 0.1;
};

struct DatasetSplit {
  Dataset train, dev, test;
};

/// Seeded shuffle then cut. Every part receives at least one example.
inline DatasetSplit split(const Dataset& dataset, SplitRatios ratios, std::uint64_t seed) {
  if (ratios.train <= 0 || ratios.dev <= 0 || ratios.test <= 0)
    throw ConfigError("split ratios must be positive");
  if (std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
  const std::size_t n = dataset.size();
  if (n < 3) throw DataError("cannot split a dataset of " + std::to_string(n) + " examples");

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  detail::Rng rng(seed);
  rng.shuffle(idx);

  auto n_train = static_cast<std::size_t>(std::llround(ratios.train * static_cast<double>(n)));
  auto n_dev = static_cast<std::size_t>(std::llround(ratios.dev * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 2);
  n_dev = std::clamp<std::size_t>(n_dev, 1, n - n_train - 1);

  DatasetSplit s{{dataset.taxonomy, {}, dataset.provenance + ":train"},
                 {dataset.taxonomy, {}, dataset.provenance + ":dev"},
                 {dataset.taxonomy, {}, dataset.provenance + ":test"}};
  for (std::size_t i = 0; i < n; ++i) {
    auto& part = i < n_train ? s.train : (i < n_train + n_dev ? s.dev : s.test);
    part.examples.push_back(dataset.examples[idx[i]]);
  }
  return s;
}

/// Dispatches on a format name: goemotions | isear | unified.
inline Dataset load_dataset(const std::string& format, const std::string& path, const std::string& dataset_id = {},
                            bool require_agreement = false, double threshold = 0.0) {
  if (format == "goemotions") return load_goemotions(path, require_agreement);
  if (format == "isear") return load_isear(path);
  if (format == "unified") return load_unified(path, dataset_id, threshold);
  throw ConfigError("unknown dataset format '" + format + "'");
}

}  // namespace psyling
