#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>

#include "json.hpp"
#include "psyling/lexicons.hpp"

namespace psyling {

/// Everything feature extraction looks words up in. Immutable once loaded.
struct Resources {
  std::map<std::string, Lexicon> lexicons;
  std::map<std::string, NormTable> norms;
  std::map<std::string, std::unordered_set<std::string>> wordlists;
  std::vector<std::string> warnings;

  const Lexicon& lexicon(const std::string& name) const {
    auto it = lexicons.find(name);
    if (it == lexicons.end()) throw ConfigError("missing lexicon '" + name + "'");
    return it->second;
  }
  const NormTable& norm(const std::string& name) const {
    auto it = norms.find(name);
    if (it == norms.end()) throw ConfigError("missing norm table '" + name + "'");
    return it->second;
  }
  const std::unordered_set<std::string>& wordlist(const std::string& name) const {
    auto it = wordlists.find(name);
    if (it == wordlists.end()) throw ConfigError("missing word list '" + name + "'");
    return it->second;
  }
};

/// The register of a `register_<name>_<n>` norm file, if it is one.
inline std::optional<std::string> register_from_name(const std::string& stem) {
  if (!detail::starts_with(stem, "register_")) return std::nullopt;
  auto rest = stem.substr(9);
  auto us = rest.rfind('_');
  if (us == std::string::npos) return std::nullopt;
  return rest.substr(0, us);
}

inline std::unordered_set<std::string> load_wordlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open word list '" + path + "'");
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto t = detail::trim(line);
    if (!t.empty() && t.front() != '#') words.insert(detail::to_lower(t));
  }
  return words;
}

/// Loads the resource index (`resources.json`): lexicon TSV + schema pairs,
/// norm tables and word lists, with paths relative to the index file.
inline Resources load_resources(const std::string& index_path) {
  std::ifstream in(index_path);
  if (!in) throw ConfigError("cannot open resource index '" + index_path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(index_path + ": " + e.what());
  }
  const auto base = std::filesystem::path(index_path).parent_path();
  auto resolve = [&](const std::string& rel) {
    auto p = base / rel;
    if (!std::filesystem::exists(p)) throw ConfigError("missing resource file '" + p.string() + "'");
    return p.string();
  };

  Resources r;
  for (const auto& e : j.value("lexicons", nlohmann::json::array())) {
    auto schema = load_schema(resolve(e.at("schema").get<std::string>()));
    if (e.contains("name")) schema.name = e["name"].get<std::string>();
    auto lex = load_lexicon(resolve(e.at("file").get<std::string>()), schema, &r.warnings);
    r.lexicons.emplace(schema.name, std::move(lex));
  }
  for (const auto& e : j.value("norms", nlohmann::json::array())) {
    const auto name = e.at("name").get<std::string>();
    auto reg = e.contains("register") ? std::optional<std::string>(e["register"].get<std::string>())
                                      : register_from_name(name);
    r.norms.emplace(name, load_norm_table(resolve(e.at("file").get<std::string>()), name, reg));
  }
  const auto lists = j.value("wordlists", nlohmann::json::object());
  for (auto it = lists.begin(); it != lists.end(); ++it)
    r.wordlists.emplace(it.key(), load_wordlist(resolve(it.value().get<std::string>())));
  return r;
}

}  // namespace psyling
