#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "psyling/detail/binary_io.hpp"
#include "psyling/error.hpp"

namespace psyling {

enum class FeatureGroup { syntax, lexical, readability, lexicon };

inline constexpr std::size_t kFeatureCount = 435;
inline constexpr std::array<std::size_t, 4> kGroupSizes = {19, 77, 14, 325};

inline const char* group_name(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::syntax:
      return "syntax";
    case FeatureGroup::lexical:
      return "lexical";
    case FeatureGroup::readability:
      return "readability";
    case FeatureGroup::lexicon:
      return "lexicon";
  }
  return "?";
}

inline FeatureGroup parse_group(const std::string& s) {
  if (s == "syntax") return FeatureGroup::syntax;
  if (s == "lexical") return FeatureGroup::lexical;
  if (s == "readability") return FeatureGroup::readability;
  if (s == "lexicon") return FeatureGroup::lexicon;
  throw ConfigError("unknown feature group '" + s + "'");
}

struct FeatureSpec {
  std::string id;
  FeatureGroup group = FeatureGroup::syntax;
  std::string kind;
  bool invariant = true;  // unchanged when every window sentence is duplicated verbatim
  nlohmann::json config = nlohmann::json::object();

  std::string param(const char* key) const {
    if (!config.contains(key) || !config[key].is_string())
      throw ConfigError("feature '" + id + "': missing string parameter '" + key + "'");
    return config[key].get<std::string>();
  }
};

/// Ordered feature registry. Groups are contiguous and appear in the order
/// syntax, lexical, readability, lexicon with sizes 19/77/14/325.
class FeatureManifest {
 public:
  FeatureManifest() = default;

  static FeatureManifest from_json(const nlohmann::json& j) {
    FeatureManifest m;
    m.name_ = j.value("name", std::string("unnamed"));
    if (!j.contains("features") || !j["features"].is_array()) throw ConfigError("manifest: missing features array");
    for (const auto& f : j["features"]) {
      FeatureSpec s;
      s.id = f.at("id").get<std::string>();
      s.group = parse_group(f.at("group").get<std::string>());
      s.kind = f.at("kind").get<std::string>();
      s.invariant = f.value("invariant", true);
      if (f.contains("config")) s.config = f["config"];
      m.specs_.push_back(std::move(s));
    }
    m.hash_ = detail::fnv1a64(j.dump());
    m.validate();
    return m;
  }

  static FeatureManifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest '" + path + "'");
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("manifest '" + path + "': " + e.what());
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<FeatureSpec>& specs() const { return specs_; }
  std::size_t size() const { return specs_.size(); }
  std::uint64_t hash() const { return hash_; }

  /// [begin, end) of a group's contiguous slice.
  std::pair<std::size_t, std::size_t> group_range(FeatureGroup g) const {
    std::size_t begin = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(g); ++i) begin += kGroupSizes[i];
    return {begin, begin + kGroupSizes[static_cast<std::size_t>(g)]};
  }

  std::span<const FeatureSpec> group(FeatureGroup g) const {
    auto [b, e] = group_range(g);
    return std::span<const FeatureSpec>(specs_).subspan(b, e - b);
  }

 private:
  void validate() const {
    if (specs_.size() != kFeatureCount)
      throw ConfigError("manifest: expected " + std::to_string(kFeatureCount) + " features, got " +
                        std::to_string(specs_.size()));
    std::set<std::string> ids;
    std::size_t i = 0;
    for (std::size_t g = 0; g < 4; ++g) {
      for (std::size_t k = 0; k < kGroupSizes[g]; ++k, ++i) {
        if (static_cast<std::size_t>(specs_[i].group) != g)
          throw ConfigError("manifest: feature '" + specs_[i].id + "' at position " + std::to_string(i) +
                            " breaks the group order (expected " + group_name(static_cast<FeatureGroup>(g)) + ")");
      }
    }
    for (const auto& s : specs_)
      if (!ids.insert(s.id).second) throw ConfigError("manifest: duplicate feature id '" + s.id + "'");
  }

  std::string name_;
  std::vector<FeatureSpec> specs_;
  std::uint64_t hash_ = 0;
};

}  // namespace psyling
