#pragma once

// Classic readability indices from window-local counts.

#include <cmath>
#include <string>

#include "psyling/features/common.hpp"
#include "psyling/features/manifest.hpp"
#include "psyling/features/resources.hpp"

namespace psyling {

struct ReadabilityCounts {
  double sentences = 0, words = 0, syllables = 0, polysyllables = 0, monosyllables = 0, letters = 0,
         long_words = 0, unfamiliar = 0;

  static ReadabilityCounts from(Window window, const std::unordered_set<std::string>* familiar) {
    ReadabilityCounts c;
    c.sentences = static_cast<double>(window.size());
    for (const Token* t : window_words(window)) {
      c.words += 1;
      c.syllables += t->syllables;
      if (t->syllables >= 3) c.polysyllables += 1;
      if (t->syllables == 1) c.monosyllables += 1;
      double len = 0;
      for (char ch : t->surface)
        if (detail::is_alnum(ch)) len += 1;
      c.letters += len;
      if (len > 6) c.long_words += 1;
      if (familiar && !familiar->count(lemma_key(*t)) && !familiar->count(detail::to_lower(t->surface)))
        c.unfamiliar += 1;
    }
    return c;
  }
};

/// SMOG grade normalized to a 30-sentence sample.
inline double smog_grade(double polysyllables, double sentences) {
  return 1.0430 * std::sqrt(polysyllables * 30.0 / sentences) + 3.1291;
}

inline Ratio readability_index(const ReadabilityCounts& c, const std::string& index) {
  const double w = c.words, s = c.sentences;
  if (s == 0) return {0.0, true};
  if (index == "smog") return {smog_grade(c.polysyllables, s), false};
  if (w == 0) return {0.0, true};
  const double wps = w / s;  // words per sentence
  const double spw = c.syllables / w;
  if (index == "flesch_reading_ease") return {206.835 - 1.015 * wps - 84.6 * spw, false};
  if (index == "flesch_kincaid_grade") return {0.39 * wps + 11.8 * spw - 15.59, false};
  if (index == "gunning_fog") return {0.4 * (wps + 100.0 * c.polysyllables / w), false};
  if (index == "coleman_liau") return {0.0588 * (100.0 * c.letters / w) - 0.296 * (100.0 * s / w) - 15.8, false};
  if (index == "ari") return {4.71 * c.letters / w + 0.5 * wps - 21.43, false};
  if (index == "lix") return {wps + 100.0 * c.long_words / w, false};
  if (index == "rix") return {c.long_words / s, false};
  if (index == "fry_x") return {100.0 * c.syllables / w, false};
  if (index == "fry_y") return {100.0 * s / w, false};
  if (index == "linsear_write") {
    const double easy = w - c.polysyllables;
    const double r = (easy + 3.0 * c.polysyllables) / s;
    return {r > 20.0 ? r / 2.0 : (r - 2.0) / 2.0, false};
  }
  if (index == "forcast") return {20.0 - (150.0 * c.monosyllables / w) / 10.0, false};
  if (index == "dale_chall") {
    const double pdw = 100.0 * c.unfamiliar / w;
    return {0.1579 * pdw + 0.0496 * wps + (pdw > 5.0 ? 3.6365 : 0.0), false};
  }
  if (index == "spache") return {0.121 * wps + 0.082 * (100.0 * c.unfamiliar / w) + 0.659, false};
  throw ConfigError("unknown readability index '" + index + "'");
}

inline GroupValues readability_features(Window window, std::span<const FeatureSpec> specs, const Resources& res) {
  GroupValues out;
  std::map<std::string, ReadabilityCounts> by_list;
  for (const auto& spec : specs) {
    if (spec.kind != "readability")
      throw ConfigError("feature '" + spec.id + "': unknown readability kind '" + spec.kind + "'");
    const auto list = spec.config.value("list", std::string("familiar"));
    auto it = by_list.find(list);
    if (it == by_list.end()) it = by_list.emplace(list, ReadabilityCounts::from(window, &res.wordlist(list))).first;
    auto r = readability_index(it->second, spec.param("index"));
    out.push(r.value, r.degraded);
  }
  return out;
}

}  // namespace psyling
