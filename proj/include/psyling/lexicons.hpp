#pragma once

// Affect lexicons and word-norm tables behind a uniform lookup.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "psyling/annotation.hpp"
#include "psyling/detail/text.hpp"
#include "psyling/error.hpp"

namespace psyling {

enum class MatchMode { exact, wildcard };
enum class MatchOn { lemma, surface };

struct LexiconSchema {
  std::string name;
  MatchOn match_on = MatchOn::lemma;
  MatchMode match_mode = MatchMode::exact;
};

/// Reads a schema descriptor `{"name", "match_on": "lemma"|"surface",
/// "match_mode": "exact"|"wildcard"}`.
inline LexiconSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open schema '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  LexiconSchema s;
  s.name = j.value("name", std::filesystem::path(path).stem().string());
  const auto on = j.value("match_on", std::string("lemma"));
  const auto mode = j.value("match_mode", std::string("exact"));
  if (on != "lemma" && on != "surface") throw FormatError(path + ": match_on must be lemma or surface");
  if (mode != "exact" && mode != "wildcard") throw FormatError(path + ": match_mode must be exact or wildcard");
  s.match_on = on == "lemma" ? MatchOn::lemma : MatchOn::surface;
  s.match_mode = mode == "exact" ? MatchMode::exact : MatchMode::wildcard;
  return s;
}

class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(LexiconSchema schema, std::vector<std::string> dimensions)
      : schema_(std::move(schema)), dimensions_(std::move(dimensions)) {
    for (std::size_t i = 0; i < dimensions_.size(); ++i)
      if (!dim_index_.emplace(dimensions_[i], i).second)
        throw FormatError("lexicon '" + schema_.name + "': duplicate dimension '" + dimensions_[i] + "'");
  }

  const std::string& name() const { return schema_.name; }
  const LexiconSchema& schema() const { return schema_; }
  const std::vector<std::string>& dimensions() const { return dimensions_; }
  std::size_t entry_count() const { return exact_.size() + prefixes_.size(); }

  std::optional<std::size_t> dimension_index(const std::string& dim) const {
    auto it = dim_index_.find(dim);
    if (it == dim_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Inserts or replaces; returns false when the key already existed.
  bool insert(const std::string& key, std::vector<double> scores) {
    if (scores.size() != dimensions_.size()) throw FormatError("lexicon '" + name() + "': entry width mismatch");
    if (schema_.match_mode == MatchMode::wildcard && detail::ends_with(key, "*")) {
      auto [it, fresh] = prefixes_.insert_or_assign(key.substr(0, key.size() - 1), std::move(scores));
      if (it->first.size() > longest_prefix_) longest_prefix_ = it->first.size();
      return fresh;
    }
    return exact_.insert_or_assign(key, std::move(scores)).second;
  }

  /// Exact key first, then (wildcard lexicons) the longest matching prefix.
  const std::vector<double>* find(const std::string& key) const {
    if (auto it = exact_.find(key); it != exact_.end()) return &it->second;
    if (schema_.match_mode == MatchMode::wildcard) {
      for (std::size_t len = std::min(key.size(), longest_prefix_); len > 0; --len)
        if (auto it = prefixes_.find(key.substr(0, len)); it != prefixes_.end()) return &it->second;
    }
    return nullptr;
  }

  bool contains_key(const std::string& key) const { return exact_.count(key) != 0; }

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.schema_.name == b.schema_.name && a.schema_.match_on == b.schema_.match_on &&
           a.schema_.match_mode == b.schema_.match_mode && a.dimensions_ == b.dimensions_ && a.exact_ == b.exact_ &&
           a.prefixes_ == b.prefixes_;
  }

 private:
  LexiconSchema schema_;
  std::vector<std::string> dimensions_;
  std::unordered_map<std::string, std::size_t> dim_index_;
  std::unordered_map<std::string, std::vector<double>> exact_;
  std::unordered_map<std::string, std::vector<double>> prefixes_;
  std::size_t longest_prefix_ = 0;
};

/// Reads `term<TAB>dim1<TAB>...` with a header row naming the dimensions.
/// Keys are lowercased; a repeated key keeps the last row and adds a warning.
inline Lexicon load_lexicon(const std::string& path, const LexiconSchema& schema,
                            std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open lexicon '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw LoadError("lexicon '" + path + "' is empty");
  detail::chomp(line);
  auto header = detail::split(line, '\t');
  if (header.size() < 2) throw FormatError(path + ": header needs a term column and at least one dimension");
  Lexicon lex(schema, std::vector<std::string>(header.begin() + 1, header.end()));

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    detail::chomp(line);
    if (detail::trim(line).empty()) continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != header.size())
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                        " columns, got " + std::to_string(cols.size()));
    std::vector<double> scores;
    scores.reserve(cols.size() - 1);
    for (std::size_t i = 1; i < cols.size(); ++i) {
      try {
        std::size_t used = 0;
        scores.push_back(std::stod(cols[i], &used));
        if (used != cols[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw FormatError(path + ":" + std::to_string(lineno) + ": bad number '" + cols[i] + "'");
      }
    }
    const auto key = detail::to_lower(detail::trim(cols[0]));
    if (!lex.insert(key, std::move(scores)) && warnings)
      warnings->push_back(path + ":" + std::to_string(lineno) + ": duplicate term '" + key + "', last row wins");
  }
  if (lex.entry_count() == 0) throw LoadError("lexicon '" + path + "' has no entries");
  return lex;
}

/// Tries the schema's preferred key (lemma or surface), then the other one.
inline std::optional<std::vector<double>> lookup(const Lexicon& lexicon, const Token& token) {
  const auto lemma = detail::to_lower(token.lemma);
  const auto surface = detail::to_lower(token.surface);
  const bool lemma_first = lexicon.schema().match_on == MatchOn::lemma;
  for (const auto* key : {lemma_first ? &lemma : &surface, lemma_first ? &surface : &lemma}) {
    if (key->empty()) continue;
    if (const auto* hit = lexicon.find(*key)) return *hit;
  }
  return std::nullopt;
}

/// Per-n-gram statistic (e.g. log frequency) keyed by the space-joined,
/// lowercased n-gram.
struct NormTable {
  std::string name;
  std::size_t arity = 1;
  std::optional<std::string> register_name;
  std::unordered_map<std::string, double> entries;

  const double* find(const std::string& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  }
};

/// Reads `ngram<TAB>value`. Every key must have the same number of words.
inline NormTable load_norm_table(const std::string& path, std::string name = {},
                                 std::optional<std::string> register_name = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open norm table '" + path + "'");
  NormTable t;
  t.name = name.empty() ? std::filesystem::path(path).stem().string() : std::move(name);
  t.register_name = std::move(register_name);
  std::string line;
  std::size_t lineno = 0;
  std::size_t arity = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::chomp(line);
    if (detail::trim(line).empty() || line.front() == '#') continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 2) throw FormatError(path + ":" + std::to_string(lineno) + ": expected ngram<TAB>value");
    const auto words = detail::split(detail::trim(cols[0]), ' ');
    if (arity == 0) arity = words.size();
    if (words.size() != arity)
      throw FormatError(path + ":" + std::to_string(lineno) + ": n-gram arity " + std::to_string(words.size()) +
                        " differs from " + std::to_string(arity));
    double v = 0;
    try {
      v = std::stod(cols[1]);
    } catch (const std::exception&) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": bad value '" + cols[1] + "'");
    }
    t.entries[detail::to_lower(detail::trim(cols[0]))] = v;
  }
  if (arity == 0) throw LoadError("norm table '" + path + "' is empty");
  if (arity > 5) throw FormatError(path + ": n-gram arity above 5");
  t.arity = arity;
  return t;
}

struct NgramStat {
  double mean = 0.0;
  double attested = 0.0;  // proportion of frames found in the table
  bool degraded = false;  // window shorter than n
};

/// Running totals for `ngram_stat`, so frames from several sentences can be
/// pooled without creating frames across sentence boundaries.
struct NgramAccumulator {
  std::size_t frames = 0;
  std::size_t hits = 0;
  double sum = 0.0;

  void add(const NormTable& table, std::span<const Token> tokens) {
    const std::size_t n = table.arity;
    if (tokens.size() < n) return;
    std::string key;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      key.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j) key += ' ';
        key += detail::to_lower(tokens[i + j].surface);
      }
      ++frames;
      if (const double* v = table.find(key)) {
        ++hits;
        sum += *v;
      }
    }
  }

  NgramStat result() const {
    if (frames == 0) return {0.0, 0.0, true};
    return {hits ? sum / static_cast<double>(hits) : 0.0, static_cast<double>(hits) / static_cast<double>(frames),
            false};
  }
};

/// Slides an n-token frame over `tokens`: mean table value over attested
/// frames and the attested proportion. Windows shorter than n give (0, 0)
/// with the degraded flag set.
inline NgramStat ngram_stat(const NormTable& table, std::span<const Token> tokens) {
  NgramAccumulator acc;
  acc.add(table, tokens);
  return acc.result();
}

}  // namespace psyling
