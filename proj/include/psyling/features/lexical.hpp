#pragma once

// Lexical richness: density, variation, sophistication, word norms and
// register n-gram frequencies.

#include <cmath>
#include <set>
#include <string>

#include "psyling/features/common.hpp"
#include "psyling/features/manifest.hpp"
#include "psyling/features/resources.hpp"

namespace psyling {

namespace detail {

inline bool is_noun(std::string_view p) { return starts_with(p, "NN"); }
inline bool is_adj(std::string_view p) { return starts_with(p, "JJ"); }
inline bool is_adv(std::string_view p) { return starts_with(p, "RB"); }

inline bool is_lexical_verb(const Token& t) {
  if (!starts_with(t.pos, "VB")) return false;
  const auto l = lemma_key(t);
  return l != "be" && l != "have" && l != "do";
}

inline bool is_lexical(const Token& t) {
  return is_noun(t.pos) || is_adj(t.pos) || is_adv(t.pos) || is_lexical_verb(t);
}

}  // namespace detail

/// Token and type tallies behind the density / variation / sophistication measures.
struct LexicalCounts {
  double tokens = 0, lexical_tokens = 0, verb_tokens = 0, sophisticated_lexical_tokens = 0, listed_tokens = 0;
  std::set<std::string> types, lexical_types, verb_types, noun_types, adj_types, adv_types, sophisticated_types,
      sophisticated_verb_types, listed_types;

  static LexicalCounts from(Window window, const std::unordered_set<std::string>& wordlist) {
    LexicalCounts c;
    auto in_list = [&](const Token& t) {
      return wordlist.count(lemma_key(t)) || wordlist.count(detail::to_lower(t.surface));
    };
    for (const Token* t : window_words(window)) {
      const auto key = lemma_key(*t);
      const bool listed = in_list(*t);
      c.tokens += 1;
      c.types.insert(key);
      if (listed) {
        c.listed_tokens += 1;
        c.listed_types.insert(key);
      }
      if (detail::is_lexical(*t)) {
        c.lexical_tokens += 1;
        c.lexical_types.insert(key);
        if (!listed) {
          c.sophisticated_lexical_tokens += 1;
          c.sophisticated_types.insert(key);
        }
      }
      if (detail::is_lexical_verb(*t)) {
        c.verb_tokens += 1;
        c.verb_types.insert(key);
        if (!listed) c.sophisticated_verb_types.insert(key);
      }
      if (detail::is_noun(t->pos)) c.noun_types.insert(key);
      if (detail::is_adj(t->pos)) c.adj_types.insert(key);
      if (detail::is_adv(t->pos)) c.adv_types.insert(key);
    }
    return c;
  }
};

inline Ratio lexical_measure(const LexicalCounts& c, const std::string& m) {
  const auto sz = [](const std::set<std::string>& s) { return static_cast<double>(s.size()); };
  const double n = c.tokens, t = sz(c.types);
  const double vt = sz(c.verb_types), vn = c.verb_tokens, lexn = c.lexical_tokens;
  const double svt = sz(c.sophisticated_verb_types);
  if (m == "lexical_density") return safe_ratio(lexn, n);
  if (m == "ndw") return {t, false};
  if (m == "ttr") return safe_ratio(t, n);
  if (m == "cttr") return safe_ratio(t, std::sqrt(2.0 * n));
  if (m == "rttr") return safe_ratio(t, std::sqrt(n));
  if (m == "logttr") return n > 1 && t > 0 ? safe_ratio(std::log(t), std::log(n)) : Ratio{0.0, true};
  if (m == "uber") {
    if (n < 1 || t < 1) return {0.0, true};
    const double ln = std::log(n);
    return safe_ratio(ln * ln, ln - std::log(t));
  }
  if (m == "lv") return safe_ratio(sz(c.lexical_types), lexn);
  if (m == "vv1") return safe_ratio(vt, vn);
  if (m == "svv1") return safe_ratio(vt * vt, vn);
  if (m == "cvv1") return safe_ratio(vt, std::sqrt(2.0 * vn));
  if (m == "vv2") return safe_ratio(vt, lexn);
  if (m == "nv") return safe_ratio(sz(c.noun_types), lexn);
  if (m == "adjv") return safe_ratio(sz(c.adj_types), lexn);
  if (m == "advv") return safe_ratio(sz(c.adv_types), lexn);
  if (m == "modv") return safe_ratio(sz(c.adj_types) + sz(c.adv_types), lexn);
  if (m == "ls1") return safe_ratio(c.sophisticated_lexical_tokens, lexn);
  if (m == "ls2") return safe_ratio(sz(c.sophisticated_types), t);
  if (m == "vs1") return safe_ratio(svt, vn);
  if (m == "vs2") return safe_ratio(svt * svt, vn);
  if (m == "cvs1") return safe_ratio(svt, std::sqrt(2.0 * vn));
  if (m == "wordlist_token_ratio") return safe_ratio(c.listed_tokens, n);
  if (m == "wordlist_type_ratio") return safe_ratio(sz(c.listed_types), t);
  throw ConfigError("unknown lexical measure '" + m + "'");
}

/// Mean norm value over words found in the table (lemma, then surface) and
/// the fraction of words found. No matches give (0, 0).
inline std::pair<double, double> norm_mean(const NormTable& table, Window window) {
  double sum = 0, hits = 0, n = 0;
  for (const Token* t : window_words(window)) {
    n += 1;
    const double* v = table.find(lemma_key(*t));
    if (!v) v = table.find(detail::to_lower(t->surface));
    if (v) {
      sum += *v;
      hits += 1;
    }
  }
  return {hits > 0 ? sum / hits : 0.0, n > 0 ? hits / n : 0.0};
}

/// Register n-gram statistic with frames confined to single sentences.
inline NgramStat register_ngram(const NormTable& table, Window window) {
  NgramAccumulator acc;
  std::vector<Token> words;
  for (const auto& s : window) {
    words.clear();
    for (const auto& t : s.tokens)
      if (is_word(t)) words.push_back(t);
    acc.add(table, words);
  }
  return acc.result();
}

inline GroupValues lexical_features(Window window, std::span<const FeatureSpec> specs, const Resources& res) {
  GroupValues out;
  std::map<std::string, LexicalCounts> by_list;
  for (const auto& spec : specs) {
    if (spec.kind == "lexical") {
      const auto list = spec.config.value("list", std::string("ngsl"));
      auto it = by_list.find(list);
      if (it == by_list.end()) it = by_list.emplace(list, LexicalCounts::from(window, res.wordlist(list))).first;
      auto r = lexical_measure(it->second, spec.param("measure"));
      out.push(r.value, r.degraded);
    } else if (spec.kind == "norm") {
      auto [mean, coverage] = norm_mean(res.norm(spec.param("table")), window);
      const auto stat = spec.param("stat");
      if (stat == "mean")
        out.push(mean, coverage == 0.0);
      else if (stat == "coverage")
        out.push(coverage);
      else
        throw ConfigError("feature '" + spec.id + "': unknown norm stat '" + stat + "'");
    } else if (spec.kind == "ngram") {
      auto s = register_ngram(res.norm(spec.param("table")), window);
      const auto stat = spec.param("stat");
      if (stat == "mean")
        out.push(s.mean, s.degraded || s.attested == 0.0);
      else if (stat == "attested")
        out.push(s.attested, s.degraded);
      else
        throw ConfigError("feature '" + spec.id + "': unknown n-gram stat '" + stat + "'");
    } else {
      throw ConfigError("feature '" + spec.id + "': unknown lexical kind '" + spec.kind + "'");
    }
  }
  return out;
}

}  // namespace psyling
