#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psyling/annotation.hpp"

namespace psyling {

using Window = std::span<const Sentence>;

/// Values of one feature group plus a per-feature flag for results that
/// fell back to an approximation or hit a zero denominator.
struct GroupValues {
  std::vector<double> values;
  std::vector<std::uint8_t> degraded;

  void push(double v, bool flag = false) {
    values.push_back(v);
    degraded.push_back(flag ? 1 : 0);
  }
};

/// Ratio with the zero-denominator convention: 0 and a degraded flag.
struct Ratio {
  double value;
  bool degraded;
};

inline Ratio safe_ratio(double num, double den) {
  if (den == 0.0) return {0.0, true};
  return {num / den, false};
}

inline bool is_word(const Token& t) {
  if (is_punctuation_tag(t.pos)) return false;
  for (char c : t.surface)
    if (detail::is_alnum(c) || static_cast<unsigned char>(c) >= 0x80) return true;
  return false;
}

inline std::vector<const Token*> window_words(Window window) {
  std::vector<const Token*> out;
  for (const auto& s : window)
    for (const auto& t : s.tokens)
      if (is_word(t)) out.push_back(&t);
  return out;
}

inline std::string lemma_key(const Token& t) { return detail::to_lower(t.lemma.empty() ? t.surface : t.lemma); }

}  // namespace psyling
