#pragma once

#include <string>
#include <string_view>

#include "psyling/detail/text.hpp"
#include "psyling/error.hpp"

namespace psyling {

namespace detail {

inline bool is_vowel_at(const std::string& w, std::size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return true;
    case 'y':
      return i > 0;  // word-initial y is a consonant
    default:
      return false;
  }
}

}  // namespace detail

/// Vowel-group syllable estimate for English words.
///
/// Counts maximal runs of vowels, then drops a silent final `e` (but not the
/// consonant + `le` ending of "table") and the silent `e` of `-es`/`-ed`
/// inflections. Never returns less than 1. Agreement with a pronouncing
/// dictionary is roughly 90-95% on common vocabulary; hiatus words such as
/// "ratio" or "create" are undercounted by one.
inline int count_syllables(std::string_view word) {
  std::string w;
  for (char c : word)
    if (detail::is_alpha(c)) w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (w.empty()) throw DataError("count_syllables: '" + std::string(word) + "' has no alphabetic characters");

  int groups = 0;
  bool in_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool v = detail::is_vowel_at(w, i);
    if (v && !in_vowel) ++groups;
    in_vowel = v;
  }

  const std::size_t n = w.size();
  auto consonant = [&](std::size_t i) { return !detail::is_vowel_at(w, i); };
  if (n >= 3 && w[n - 1] == 'e' && consonant(n - 2)) {
    const bool le_ending = w[n - 2] == 'l' && consonant(n - 3);
    if (!le_ending) --groups;
  } else if (n >= 4 && w[n - 2] == 'e' && (w[n - 1] == 'd' || w[n - 1] == 's') && consonant(n - 3)) {
    const char before = w[n - 3];
    bool silent;
    if (w[n - 1] == 'd')
      silent = before != 't' && before != 'd';
    else
      silent = before != 's' && before != 'x' && before != 'z' && before != 'c' && before != 'g' &&
               !(before == 'h' && (w[n - 4] == 'c' || w[n - 4] == 's'));
    // The -e- must not be the only vowel ("bed", "yes").
    if (silent) {
      bool earlier_vowel = false;
      for (std::size_t i = 0; i + 3 < n; ++i) earlier_vowel = earlier_vowel || detail::is_vowel_at(w, i);
      if (earlier_vowel) --groups;
    }
  }
  return groups < 1 ? 1 : groups;
}

}  // namespace psyling
