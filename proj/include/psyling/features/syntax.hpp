#pragma once

// Morpho-syntactic complexity: production-unit lengths and embedding ratios
// from constituent parses, and Deflate-based stream complexity.

#include <string>
#include <unordered_set>

#include "psyling/features/common.hpp"
#include "psyling/features/deflate.hpp"
#include "psyling/features/manifest.hpp"

namespace psyling {

struct SyntaxCounts {
  double words = 0, sentences = 0, clauses = 0, t_units = 0, dependent_clauses = 0, complex_t_units = 0,
         coordinate_phrases = 0, complex_nominals = 0, verb_phrases = 0;
  bool approximated = false;  // at least one sentence had no parse

  double get(const std::string& name) const {
    if (name == "words") return words;
    if (name == "sentences") return sentences;
    if (name == "clauses") return clauses;
    if (name == "t_units") return t_units;
    if (name == "dependent_clauses") return dependent_clauses;
    if (name == "complex_t_units") return complex_t_units;
    if (name == "coordinate_phrases") return coordinate_phrases;
    if (name == "complex_nominals") return complex_nominals;
    if (name == "verb_phrases") return verb_phrases;
    throw ConfigError("unknown syntactic count '" + name + "'");
  }
};

namespace detail {

/// "NP-SBJ-1" -> "NP"; leaves "-LRB-" alone.
inline std::string base_label(const std::string& label) {
  if (label.empty() || label.front() == '-') return label;
  auto cut = label.find_first_of("-=");
  return cut == std::string::npos ? label : label.substr(0, cut);
}

inline bool is_verb_tag(std::string_view t) {
  return t == "VB" || t == "VBD" || t == "VBG" || t == "VBN" || t == "VBP" || t == "VBZ" || t == "MD";
}

inline bool is_preterminal(const ParseNode& n) { return n.children.size() == 1 && n.children[0].is_leaf(); }

inline bool is_clause(const ParseNode& n) {
  const auto l = base_label(n.label);
  if (l != "S" && l != "SINV" && l != "SQ") return false;
  for (const auto& c : n.children) {
    const auto cl = base_label(c.label);
    if (cl == "VP") {
      // infinitival "to" clauses are not counted
      for (const auto& g : c.children)
        if (is_preterminal(g)) return base_label(g.label) != "TO";
      return true;
    }
    if ((l == "SQ" || l == "SINV") && is_preterminal(c) && is_verb_tag(base_label(c.label))) return true;
  }
  return false;
}

inline bool dominates_dependent_clause(const ParseNode& n);

inline bool is_dependent_clause(const ParseNode& n) {
  if (base_label(n.label) != "SBAR") return false;
  for (const auto& c : n.children)
    if (is_clause(c)) return true;
  return false;
}

inline bool dominates_dependent_clause(const ParseNode& n) {
  for (const auto& c : n.children)
    if (is_dependent_clause(c) || dominates_dependent_clause(c)) return true;
  return false;
}

inline void count_tree(const ParseNode& n, const ParseNode* parent, bool in_sbar, SyntaxCounts& c) {
  if (n.is_leaf()) return;
  const auto l = base_label(n.label);
  const bool clause = is_clause(n);
  if (clause) {
    c.clauses += 1;
    const auto pl = parent ? base_label(parent->label) : std::string("ROOT");
    const bool top = pl == "ROOT" || pl.empty() || pl == "S" || pl == "SINV" || pl == "SQ";
    if (!in_sbar && top && !(parent && is_clause(*parent))) {
      c.t_units += 1;
      if (dominates_dependent_clause(n)) c.complex_t_units += 1;
    }
  }
  if (is_dependent_clause(n)) c.dependent_clauses += 1;
  if (l == "ADJP" || l == "ADVP" || l == "NP" || l == "VP") {
    for (const auto& ch : n.children)
      if (base_label(ch.label) == "CC") {
        c.coordinate_phrases += 1;
        break;
      }
  }
  if (l == "NP") {
    for (const auto& ch : n.children) {
      const auto cl = base_label(ch.label);
      if (cl == "JJ" || cl == "JJR" || cl == "JJS" || cl == "POS" || cl == "PP" || cl == "SBAR") {
        c.complex_nominals += 1;
        break;
      }
    }
  }
  if (l == "VP") {
    for (const auto& ch : n.children)
      if (is_preterminal(ch) && is_verb_tag(base_label(ch.label))) {
        c.verb_phrases += 1;
        break;
      }
  }
  const bool sbar = in_sbar || l == "SBAR";
  for (const auto& ch : n.children) count_tree(ch, &n, sbar, c);
}

inline const std::unordered_set<std::string>& subordinators() {
  static const std::unordered_set<std::string> s = {"because", "although", "though", "if",    "while", "since",
                                                    "unless",  "whether",  "until",  "after", "before", "once",
                                                    "whereas", "that"};
  return s;
}

/// Tag-sequence stand-ins for the parse-derived counts.
inline void approximate_counts(const Sentence& s, SyntaxCounts& c) {
  double finite_groups = 0, verb_groups = 0, subordinate = 0, coords = 0, nominals = 0;
  bool in_verb_group = false;
  bool group_finite = false;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const auto& t = s.tokens[i];
    const auto& pos = t.pos;
    if (is_verb_tag(pos)) {
      if (!in_verb_group) {
        verb_groups += 1;
        group_finite = false;
      }
      if (!group_finite && (pos == "VBD" || pos == "VBZ" || pos == "VBP" || pos == "MD")) {
        finite_groups += 1;
        group_finite = true;
      }
      in_verb_group = true;
    } else if (pos != "RB" && pos != "TO") {
      in_verb_group = false;
    }
    if (pos == "IN" && subordinators().count(to_lower(t.surface))) subordinate += 1;
    if ((pos == "WDT" || pos == "WP" || pos == "WRB") && i > 0) subordinate += 1;
    if (pos == "CC" && i > 0) coords += 1;
    // noun group with a premodifying adjective or a following preposition
    if (starts_with(pos, "NN") && (i + 1 >= s.tokens.size() || !starts_with(s.tokens[i + 1].pos, "NN"))) {
      bool modified = false;
      for (std::size_t j = i; j-- > 0;) {
        const auto& pj = s.tokens[j].pos;
        if (starts_with(pj, "JJ") || pj == "POS") modified = true;
        if (!(starts_with(pj, "NN") || starts_with(pj, "JJ") || pj == "POS")) break;
      }
      if (i + 1 < s.tokens.size() && s.tokens[i + 1].pos == "IN") modified = true;
      if (modified) nominals += 1;
    }
  }
  const double dependent = std::min(subordinate, std::max(finite_groups - 1, 0.0));
  const double t_units = finite_groups - dependent;
  c.clauses += finite_groups;
  c.dependent_clauses += dependent;
  c.t_units += t_units;
  c.complex_t_units += (dependent > 0 && t_units > 0) ? 1 : 0;
  c.coordinate_phrases += coords;
  c.complex_nominals += nominals;
  c.verb_phrases += verb_groups;
}

inline std::string lemma_suffix(const Token& t) {
  const auto surface = to_lower(t.surface);
  const auto lemma = to_lower(t.lemma);
  if (!lemma.empty() && starts_with(surface, lemma)) return surface.size() == lemma.size() ? "0" : surface.substr(lemma.size());
  return "~" + surface;
}

}  // namespace detail

inline SyntaxCounts count_syntax(Window window) {
  SyntaxCounts c;
  for (const auto& s : window) {
    c.sentences += 1;
    for (const auto& t : s.tokens)
      if (is_word(t)) c.words += 1;
    if (s.parse)
      detail::count_tree(*s.parse, nullptr, false, c);
    else {
      detail::approximate_counts(s, c);
      c.approximated = true;
    }
  }
  return c;
}

/// The token-derived stream the compression features run on.
inline std::string syntax_stream(Window window, const std::string& kind) {
  std::string out;
  auto append = [&](const std::string& piece) {
    if (!out.empty()) out += ' ';
    out += piece;
  };
  for (const auto& s : window) {
    for (const auto& t : s.tokens) {
      if (kind == "chars")
        append(t.surface);
      else if (kind == "words") {
        if (is_word(t)) append(detail::to_lower(t.surface));
      } else if (kind == "pos")
        append(t.pos);
      else if (kind == "lemma_suffix") {
        if (is_word(t)) append(detail::lemma_suffix(t));
      } else
        throw ConfigError("unknown compression stream '" + kind + "'");
    }
  }
  return out;
}

inline GroupValues syntax_features(Window window, std::span<const FeatureSpec> specs) {
  const SyntaxCounts counts = count_syntax(window);
  GroupValues out;
  for (const auto& spec : specs) {
    if (spec.kind == "syntax_ratio") {
      auto r = safe_ratio(counts.get(spec.param("num")), counts.get(spec.param("den")));
      out.push(r.value, r.degraded || counts.approximated);
    } else if (spec.kind == "deflate") {
      const auto stream = syntax_stream(window, spec.param("stream"));
      out.push(deflate_complexity(stream), stream.empty());
    } else {
      throw ConfigError("feature '" + spec.id + "': unknown syntax kind '" + spec.kind + "'");
    }
  }
  return out;
}

}  // namespace psyling
