#pragma once

#include <map>
#include <string>

#include "psyling/features/common.hpp"
#include "psyling/features/manifest.hpp"
#include "psyling/features/resources.hpp"

namespace psyling {

/// Score sums and match count of one lexicon over a window's words.
struct LexiconTally {
  std::vector<double> sums;
  double matched = 0;
  double words = 0;

  double mean(std::size_t dim) const { return sums[dim] / std::max(1.0, matched); }
  double coverage() const { return words > 0 ? matched / words : 0.0; }
};

inline LexiconTally tally_lexicon(const Lexicon& lex, Window window) {
  LexiconTally t{std::vector<double>(lex.dimensions().size(), 0.0), 0, 0};
  for (const Token* tok : window_words(window)) {
    t.words += 1;
    if (auto hit = lookup(lex, *tok)) {
      t.matched += 1;
      for (std::size_t d = 0; d < hit->size(); ++d) t.sums[d] += (*hit)[d];
    }
  }
  return t;
}

/// Coverage-normalized mean score per (lexicon, dimension) and per-lexicon
/// coverage, in manifest order.
inline GroupValues lexicon_features(Window window, std::span<const FeatureSpec> specs, const Resources& res) {
  GroupValues out;
  std::map<std::string, LexiconTally> tallies;
  auto tally = [&](const std::string& name) -> const LexiconTally& {
    auto it = tallies.find(name);
    if (it == tallies.end()) it = tallies.emplace(name, tally_lexicon(res.lexicon(name), window)).first;
    return it->second;
  };
  for (const auto& spec : specs) {
    const auto name = spec.param("lexicon");
    if (spec.kind == "lexicon_coverage") {
      out.push(tally(name).coverage());
    } else if (spec.kind == "lexicon_mean") {
      const auto& lex = res.lexicon(name);
      auto dim = lex.dimension_index(spec.param("dimension"));
      if (!dim) throw ConfigError("feature '" + spec.id + "': lexicon '" + name + "' has no such dimension");
      const auto& t = tally(name);
      out.push(t.mean(*dim), t.matched == 0);
    } else {
      throw ConfigError("feature '" + spec.id + "': unknown lexicon kind '" + spec.kind + "'");
    }
  }
  return out;
}

}  // namespace psyling
