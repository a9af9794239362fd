#pragma once

// Token / sentence / parse annotations consumed by feature extraction, with a
// CoNLL-style reader and writer and a small rule-based annotator for texts
// that come without external annotations.

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "psyling/detail/text.hpp"
#include "psyling/error.hpp"
#include "psyling/syllables.hpp"

namespace psyling {

struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Token {
  std::string surface;
  std::string lemma;
  std::string pos;  // Penn Treebank tag
  int syllables = 1;
  CharSpan span;
  friend bool operator==(const Token&, const Token&) = default;
};

/// Constituent tree node. A leaf carries the index of the sentence token it
/// covers and has no children.
struct ParseNode {
  std::string label;
  std::vector<ParseNode> children;
  std::optional<std::size_t> token;

  bool is_leaf() const { return token.has_value(); }
  friend bool operator==(const ParseNode&, const ParseNode&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::optional<ParseNode> parse;
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct AnnotatedDocument {
  std::string id;
  std::vector<Sentence> sentences;
  std::string raw_text;
  friend bool operator==(const AnnotatedDocument&, const AnnotatedDocument&) = default;
};

// ---------------------------------------------------------------------------
// Bracketed parse trees

namespace detail {

class BracketParser {
 public:
  explicit BracketParser(std::string_view s) : s_(s) {}

  ParseNode parse() {
    skip_ws();
    ParseNode root = node();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return root;
  }

  std::size_t leaf_count() const { return next_leaf_; }

 private:
  ParseNode node() {
    expect('(');
    ParseNode n;
    skip_ws();
    if (peek() != '(' && peek() != ')') n.label = atom();
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) fail("unbalanced parentheses");
      if (peek() == ')') {
        ++pos_;
        break;
      }
      if (peek() == '(') {
        n.children.push_back(node());
      } else {
        ParseNode leaf;
        leaf.label = atom();
        leaf.token = next_leaf_++;
        n.children.push_back(std::move(leaf));
      }
    }
    return n;
  }

  std::string atom() {
    const auto start = pos_;
    while (pos_ < s_.size() && !is_space(s_[pos_]) && s_[pos_] != '(' && s_[pos_] != ')') ++pos_;
    if (pos_ == start) fail("empty atom");
    return std::string(s_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError("parse tree: " + msg + " at column " + std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t next_leaf_ = 0;
};

inline void collect_leaves(const ParseNode& n, std::vector<std::size_t>& out) {
  if (n.is_leaf()) {
    out.push_back(*n.token);
    return;
  }
  for (const auto& c : n.children) collect_leaves(c, out);
}

inline void write_tree(const ParseNode& n, std::string& out) {
  if (n.is_leaf()) {
    out += n.label;
    return;
  }
  out += '(';
  out += n.label;
  for (const auto& c : n.children) {
    out += ' ';
    write_tree(c, out);
  }
  out += ')';
}

}  // namespace detail

/// Parses `(S (NP (DT The) (NN dog)) ...)`; bare atoms become leaves numbered
/// left to right.
inline ParseNode parse_bracketed(std::string_view text, std::size_t* leaf_count = nullptr) {
  detail::BracketParser p(text);
  ParseNode root = p.parse();
  if (leaf_count) *leaf_count = p.leaf_count();
  return root;
}

inline std::string to_bracketed(const ParseNode& n) {
  std::string out;
  detail::write_tree(n, out);
  return out;
}

/// Leaf token indices in left-to-right order.
inline std::vector<std::size_t> leaf_order(const ParseNode& n) {
  std::vector<std::size_t> out;
  detail::collect_leaves(n, out);
  return out;
}

// ---------------------------------------------------------------------------
// CoNLL-style files

namespace detail {

inline std::string escape_line(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\')
      out += "\\\\";
    else if (c == '\n')
      out += "\\n";
    else if (c == '\r')
      out += "\\r";
    else
      out += c;
  }
  return out;
}

inline std::string unescape_line(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;
      out += s[i] == 'n' ? '\n' : s[i] == 'r' ? '\r' : s[i];
    } else {
      out += s[i];
    }
  }
  return out;
}

/// Locates token surfaces in `raw` left to right and fills their spans.
inline void assign_spans(AnnotatedDocument& doc, const std::string& where) {
  std::size_t cursor = 0;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    for (auto& tok : doc.sentences[si].tokens) {
      auto at = doc.raw_text.find(tok.surface, cursor);
      if (at == std::string::npos)
        throw FormatError(where + ": sentence " + std::to_string(si) + ": token '" + tok.surface +
                          "' not found in document text");
      tok.span = {at, at + tok.surface.size()};
      cursor = tok.span.end;
    }
  }
}

}  // namespace detail

/// Reads one annotated document from a stream.
///
/// Token lines are `index<TAB>surface<TAB>lemma<TAB>pos<TAB>syllables`, blank
/// lines separate sentences and `#parse: (...)` precedes the sentence it
/// belongs to. Optional `#id:` and `#text:` header lines carry the document id
/// and raw text; without `#text:` the raw text is the tokens joined by spaces.
inline AnnotatedDocument read_annotated(std::istream& in, const std::string& source, std::string default_id = {}) {
  AnnotatedDocument doc;
  doc.id = std::move(default_id);
  std::optional<std::string> raw;
  std::optional<std::string> pending_parse;
  Sentence current;
  std::size_t lineno = 0;

  auto finish = [&] {
    if (current.tokens.empty()) {
      if (pending_parse) throw FormatError(source + ":" + std::to_string(lineno) + ": #parse without tokens");
      return;
    }
    const std::size_t si = doc.sentences.size();
    if (pending_parse) {
      std::size_t leaves = 0;
      ParseNode tree;
      try {
        tree = parse_bracketed(*pending_parse, &leaves);
      } catch (const FormatError& e) {
        throw FormatError(source + ": sentence " + std::to_string(si) + ": " + e.what());
      }
      if (leaves != current.tokens.size())
        throw FormatError(source + ": sentence " + std::to_string(si) + ": parse has " + std::to_string(leaves) +
                          " leaves but sentence has " + std::to_string(current.tokens.size()) + " tokens");
      current.parse = std::move(tree);
    }
    doc.sentences.push_back(std::move(current));
    current = Sentence{};
    pending_parse.reset();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    detail::chomp(line);
    if (detail::trim(line).empty()) {
      finish();
      continue;
    }
    if (line.front() == '#') {
      std::string_view body(line);
      body.remove_prefix(1);
      if (detail::starts_with(body, "parse:")) {
        if (!current.tokens.empty()) finish();
        pending_parse = std::string(detail::trim(body.substr(6)));
      } else if (detail::starts_with(body, "id:")) {
        doc.id = std::string(detail::trim(body.substr(3)));
      } else if (detail::starts_with(body, "text:")) {
        auto t = body.substr(5);
        if (!t.empty() && t.front() == ' ') t.remove_prefix(1);
        raw = detail::unescape_line(t);
      }
      continue;
    }
    auto cols = detail::split(line, '\t');
    if (cols.size() != 5)
      throw FormatError(source + ":" + std::to_string(lineno) + ": expected 5 tab-separated columns");
    Token tok{cols[1], cols[2], cols[3], 0, {}};
    try {
      tok.syllables = std::stoi(cols[4]);
    } catch (const std::exception&) {
      throw FormatError(source + ":" + std::to_string(lineno) + ": bad syllable count '" + cols[4] + "'");
    }
    if (tok.surface.empty() || tok.syllables < 1)
      throw FormatError(source + ":" + std::to_string(lineno) + ": empty surface or syllables < 1");
    current.tokens.push_back(std::move(tok));
  }
  finish();
  if (doc.sentences.empty()) throw FormatError(source + ": no sentences");

  if (raw) {
    doc.raw_text = *raw;
  } else {
    std::vector<std::string> surfaces;
    for (const auto& s : doc.sentences)
      for (const auto& t : s.tokens) surfaces.push_back(t.surface);
    doc.raw_text = detail::join(surfaces, " ");
  }
  detail::assign_spans(doc, source);
  return doc;
}

inline AnnotatedDocument ingest_annotated(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  return read_annotated(in, path, std::filesystem::path(path).stem().string());
}

inline void write_annotated(std::ostream& out, const AnnotatedDocument& doc) {
  out << "#id: " << doc.id << '\n';
  out << "#text: " << detail::escape_line(doc.raw_text) << '\n';
  for (const auto& s : doc.sentences) {
    if (s.parse) out << "#parse: " << to_bracketed(*s.parse) << '\n';
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      const auto& t = s.tokens[i];
      out << (i + 1) << '\t' << t.surface << '\t' << t.lemma << '\t' << t.pos << '\t' << t.syllables << '\n';
    }
    out << '\n';
  }
}

inline void export_annotated(const std::string& path, const AnnotatedDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write '" + path + "'");
  write_annotated(out, doc);
}

// ---------------------------------------------------------------------------
// Rule-based annotator

namespace detail {

inline const std::vector<std::string>& abbreviations() {
  static const std::vector<std::string> list = {
      "dr.",   "mr.",   "mrs.",  "ms.",   "prof.", "st.",   "jr.",   "sr.",  "vs.",  "etc.", "e.g.", "i.e.",
      "u.s.",  "u.k.",  "a.m.",  "p.m.",  "no.",   "inc.",  "ltd.",  "co.",  "corp.", "mt.", "gen.", "col.",
      "capt.", "sgt.",  "rev.",  "jan.",  "feb.",  "mar.",  "apr.",  "aug.", "sept.", "oct.", "nov.", "dec.",
      "approx.", "dept.", "est.", "fig."};
  return list;
}

inline bool word_byte(char c) { return is_alnum(c) || static_cast<unsigned char>(c) >= 0x80; }

struct RawToken {
  std::string surface;
  CharSpan span;
};

inline std::vector<RawToken> tokenize(const std::string& text) {
  std::vector<RawToken> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    // Abbreviations keep their periods.
    bool matched = false;
    if (is_alpha(text[i]) && (i == 0 || !word_byte(text[i - 1]))) {
      for (const auto& abbr : abbreviations()) {
        if (i + abbr.size() > n) continue;
        if (to_lower(std::string_view(text).substr(i, abbr.size())) != abbr) continue;
        const std::size_t after = i + abbr.size();
        if (after < n && word_byte(text[after])) continue;
        i = after;
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (word_byte(text[i])) {
        while (i < n) {
          if (word_byte(text[i])) {
            ++i;
          } else if ((text[i] == '\'' || text[i] == '-' || ((text[i] == '.' || text[i] == ',') && is_alnum(text[i - 1]) &&
                                                            std::isdigit(static_cast<unsigned char>(text[i - 1])))) &&
                     i + 1 < n && word_byte(text[i + 1])) {
            ++i;
          } else {
            break;
          }
        }
      } else {
        const char c = text[i];
        ++i;
        if (c == '.' || c == '!' || c == '?' || c == '-')
          while (i < n && (text[i] == '.' || text[i] == '!' || text[i] == '?' || (c == '-' && text[i] == '-'))) ++i;
      }
    }
    out.push_back({text.substr(start, i - start), {start, i}});
  }
  return out;
}

inline bool is_terminal(std::string_view tok) {
  return !tok.empty() && std::all_of(tok.begin(), tok.end(), [](char c) { return c == '.' || c == '!' || c == '?'; });
}

inline bool is_closer(std::string_view tok) {
  return tok == "\"" || tok == "'" || tok == ")" || tok == "]" || tok == "}";
}

struct Lexeme {
  const char* pos;
  const char* lemma;  // nullptr: same as lowercased surface
};

inline const std::unordered_map<std::string, Lexeme>& closed_class() {
  static const std::unordered_map<std::string, Lexeme> table = [] {
    std::unordered_map<std::string, Lexeme> t;
    auto add = [&](std::initializer_list<const char*> words, const char* pos) {
      for (auto* w : words) t.emplace(w, Lexeme{pos, nullptr});
    };
    add({"the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any", "no", "all", "another",
         "either", "neither"},
        "DT");
    add({"i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them", "myself", "yourself", "himself",
         "herself", "itself", "ourselves", "themselves", "someone", "everyone", "nobody", "something", "nothing",
         "everything", "anything", "anyone", "everybody", "somebody"},
        "PRP");
    add({"my", "your", "his", "her", "its", "our", "their"}, "PRP$");
    add({"in", "on", "at", "of", "for", "with", "by", "from", "about", "into", "over", "after", "before", "because",
         "although", "though", "if", "while", "since", "unless", "than", "as", "through", "during", "under",
         "without", "until", "against", "among", "between", "upon", "whether", "like", "near", "across", "behind"},
        "IN");
    add({"and", "or", "but", "nor", "yet"}, "CC");
    add({"can", "could", "will", "would", "shall", "should", "may", "might", "must"}, "MD");
    add({"to"}, "TO");
    add({"which"}, "WDT");
    add({"who", "whom", "what"}, "WP");
    add({"when", "where", "why", "how"}, "WRB");
    add({"not", "very", "too", "also", "never", "always", "often", "just", "really", "so", "then", "now", "here",
         "there", "again", "still", "already", "soon", "even", "ever", "quite", "almost", "away", "back"},
        "RB");
    add({"yes", "oh", "wow", "hello", "hi", "ok", "okay", "hey", "ugh", "lol", "thanks"}, "UH");
    t["is"] = {"VBZ", "be"};
    t["are"] = {"VBP", "be"};
    t["am"] = {"VBP", "be"};
    t["'m"] = {"VBP", "be"};
    t["was"] = {"VBD", "be"};
    t["were"] = {"VBD", "be"};
    t["be"] = {"VB", "be"};
    t["been"] = {"VBN", "be"};
    t["being"] = {"VBG", "be"};
    t["has"] = {"VBZ", "have"};
    t["have"] = {"VBP", "have"};
    t["had"] = {"VBD", "have"};
    t["does"] = {"VBZ", "do"};
    t["do"] = {"VBP", "do"};
    t["did"] = {"VBD", "do"};
    return t;
  }();
  return table;
}

/// Irregular inflections: surface -> (tag, lemma).
inline const std::unordered_map<std::string, Lexeme>& irregulars() {
  static const std::unordered_map<std::string, Lexeme> table = {
      {"ran", {"VBD", "run"}},       {"went", {"VBD", "go"}},       {"gone", {"VBN", "go"}},
      {"came", {"VBD", "come"}},     {"saw", {"VBD", "see"}},       {"seen", {"VBN", "see"}},
      {"took", {"VBD", "take"}},     {"taken", {"VBN", "take"}},    {"gave", {"VBD", "give"}},
      {"given", {"VBN", "give"}},    {"made", {"VBD", "make"}},     {"said", {"VBD", "say"}},
      {"got", {"VBD", "get"}},       {"knew", {"VBD", "know"}},     {"known", {"VBN", "know"}},
      {"thought", {"VBD", "think"}}, {"told", {"VBD", "tell"}},     {"felt", {"VBD", "feel"}},
      {"left", {"VBD", "leave"}},    {"found", {"VBD", "find"}},    {"became", {"VBD", "become"}},
      {"began", {"VBD", "begin"}},   {"begun", {"VBN", "begin"}},   {"brought", {"VBD", "bring"}},
      {"bought", {"VBD", "buy"}},    {"wrote", {"VBD", "write"}},   {"written", {"VBN", "write"}},
      {"ate", {"VBD", "eat"}},       {"eaten", {"VBN", "eat"}},     {"fell", {"VBD", "fall"}},
      {"lost", {"VBD", "lose"}},     {"met", {"VBD", "meet"}},      {"heard", {"VBD", "hear"}},
      {"kept", {"VBD", "keep"}},     {"held", {"VBD", "hold"}},     {"stood", {"VBD", "stand"}},
      {"understood", {"VBD", "understand"}}, {"won", {"VBD", "win"}}, {"sat", {"VBD", "sit"}},
      {"spoke", {"VBD", "speak"}},   {"broke", {"VBD", "break"}},   {"broken", {"VBN", "break"}},
      {"drove", {"VBD", "drive"}},   {"flew", {"VBD", "fly"}},      {"grew", {"VBD", "grow"}},
      {"threw", {"VBD", "throw"}},   {"wore", {"VBD", "wear"}},     {"sang", {"VBD", "sing"}},
      {"slept", {"VBD", "sleep"}},   {"sent", {"VBD", "send"}},     {"spent", {"VBD", "spend"}},
      {"built", {"VBD", "build"}},   {"paid", {"VBD", "pay"}},      {"sold", {"VBD", "sell"}},
      {"taught", {"VBD", "teach"}},  {"caught", {"VBD", "catch"}},  {"fought", {"VBD", "fight"}},
      {"cried", {"VBD", "cry"}},     {"died", {"VBD", "die"}},      {"lied", {"VBD", "lie"}},
      {"men", {"NNS", "man"}},       {"women", {"NNS", "woman"}},   {"children", {"NNS", "child"}},
      {"people", {"NNS", "person"}}, {"feet", {"NNS", "foot"}},     {"teeth", {"NNS", "tooth"}},
      {"mice", {"NNS", "mouse"}},    {"better", {"JJR", "good"}},   {"best", {"JJS", "good"}},
      {"worse", {"JJR", "bad"}},     {"worst", {"JJS", "bad"}},     {"n't", {"RB", "not"}}};
  return table;
}

/// Open-class words whose tag the suffix rules would get wrong.
inline const std::unordered_map<std::string, const char*>& frequent_words() {
  static const std::unordered_map<std::string, const char*> table = {
      {"good", "JJ"},    {"bad", "JJ"},     {"happy", "JJ"},   {"sad", "JJ"},      {"angry", "JJ"},
      {"great", "JJ"},   {"new", "JJ"},     {"old", "JJ"},     {"big", "JJ"},      {"small", "JJ"},
      {"little", "JJ"},  {"long", "JJ"},    {"high", "JJ"},    {"young", "JJ"},    {"nice", "JJ"},
      {"sure", "JJ"},    {"afraid", "JJ"},  {"scared", "JJ"},  {"glad", "JJ"},     {"proud", "JJ"},
      {"sorry", "JJ"},   {"tired", "JJ"},   {"free", "JJ"},    {"real", "JJ"},     {"true", "JJ"},
      {"dog", "NN"},     {"cat", "NN"},     {"man", "NN"},     {"woman", "NN"},    {"day", "NN"},
      {"time", "NN"},    {"life", "NN"},    {"home", "NN"},    {"world", "NN"},    {"house", "NN"},
      {"love", "NN"},    {"fear", "NN"},    {"anger", "NN"},   {"joy", "NN"},      {"friend", "NN"},
      {"exam", "NN"},    {"news", "NN"},    {"family", "NN"},  {"work", "NN"},     {"school", "NN"},
      {"run", "VB"},     {"go", "VB"},      {"get", "VB"},     {"make", "VB"},     {"know", "VB"},
      {"think", "VB"},   {"see", "VB"},     {"come", "VB"},    {"want", "VB"},     {"feel", "VB"},
      {"like", "IN"},    {"well", "RB"},    {"only", "RB"},    {"much", "RB"},     {"more", "JJR"},
      {"most", "JJS"},   {"many", "JJ"},    {"few", "JJ"},     {"other", "JJ"},    {"such", "JJ"},
      {"one", "CD"},     {"two", "CD"},     {"three", "CD"},   {"first", "JJ"},    {"last", "JJ"}};
  return table;
}

inline bool is_vowel_char(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

/// Undoes consonant doubling: "stopp" -> "stop", but keeps "fall", "miss".
inline std::string undouble(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel_char(stem[n - 1]) && stem[n - 1] != 'l' &&
      stem[n - 1] != 's' && stem[n - 1] != 'z' && stem[n - 1] != 'f')
    stem.pop_back();
  return stem;
}

inline std::string lemmatize(const std::string& lower, const std::string& pos) {
  auto strip = [&](std::size_t k) { return lower.substr(0, lower.size() - k); };
  const std::size_t n = lower.size();
  if (pos == "NNS" || pos == "VBZ") {
    if (n > 4 && ends_with(lower, "ies")) return strip(3) + "y";
    if (n > 4 && (ends_with(lower, "sses") || ends_with(lower, "xes") || ends_with(lower, "ches") ||
                  ends_with(lower, "shes") || ends_with(lower, "zes")))
      return strip(2);
    if (n > 3 && ends_with(lower, "s") && !ends_with(lower, "ss") && !ends_with(lower, "us") &&
        !ends_with(lower, "is"))
      return strip(1);
    return lower;
  }
  if (pos == "VBD" || pos == "VBN") {
    if (n > 4 && ends_with(lower, "ied")) return strip(3) + "y";
    if (n > 3 && ends_with(lower, "ed")) {
      std::string stem = strip(2);
      if (ends_with(stem, "e")) return stem;  // "agreed"
      return undouble(stem);
    }
    return lower;
  }
  if (pos == "VBG") {
    if (n > 5 && ends_with(lower, "ing")) return undouble(strip(3));
    return lower;
  }
  if (pos == "JJR" && n > 4 && ends_with(lower, "er")) return undouble(strip(2));
  if (pos == "JJS" && n > 5 && ends_with(lower, "est")) return undouble(strip(3));
  return lower;
}

inline std::string punct_tag(std::string_view s) {
  if (is_terminal(s)) return ".";
  if (s == ",") return ",";
  if (s == ";" || s == ":" || s == "-" || s == "--") return ":";
  if (s == "\"" || s == "'" || s == "`") return "''";
  if (s == "(" || s == "[" || s == "{") return "-LRB-";
  if (s == ")" || s == "]" || s == "}") return "-RRB-";
  if (s == "$") return "$";
  if (s == "#") return "#";
  return "SYM";
}

inline bool is_number(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c)))
      digit = true;
    else if (c != '.' && c != ',')
      return false;
  }
  return digit;
}

inline Lexeme tag_word(const std::string& surface, const std::string& lower, const std::string& prev_tag,
                       bool sentence_initial) {
  if (!has_alpha(surface) && !is_number(surface) && !word_byte(surface[0])) return {nullptr, nullptr};
  if (is_number(surface)) return {"CD", nullptr};
  if (auto it = irregulars().find(lower); it != irregulars().end()) return it->second;
  if (auto it = closed_class().find(lower); it != closed_class().end()) return it->second;
  if (auto it = frequent_words().find(lower); it != frequent_words().end()) {
    std::string_view tag = it->second;
    if (tag == "VB" && (prev_tag == "PRP" || prev_tag == "NNS")) return {"VBP", nullptr};
    if (tag == "NN" && (prev_tag == "TO" || prev_tag == "MD")) return {"VB", nullptr};
    return {it->second, nullptr};
  }
  if (!sentence_initial && std::isupper(static_cast<unsigned char>(surface[0]))) return {"NNP", nullptr};

  const bool after_verb_slot = prev_tag == "TO" || prev_tag == "MD";
  const bool after_aux = prev_tag == "VBZ" || prev_tag == "VBP" || prev_tag == "VBD" || prev_tag == "VB";
  if (ends_with(lower, "ly") && lower.size() > 4) return {"RB", nullptr};
  if (ends_with(lower, "ing") && lower.size() > 5) return {"VBG", nullptr};
  if (ends_with(lower, "ed") && lower.size() > 4) return {after_aux ? "VBN" : "VBD", nullptr};
  if (after_verb_slot) return {"VB", nullptr};
  for (const char* suf : {"ous", "ful", "able", "ible", "ive", "less", "ic", "al", "ish", "ary"})
    if (ends_with(lower, suf) && lower.size() > std::string_view(suf).size() + 2) return {"JJ", nullptr};
  if (ends_with(lower, "est") && lower.size() > 5) return {"JJS", nullptr};
  if (ends_with(lower, "s") && !ends_with(lower, "ss") && !ends_with(lower, "us") && lower.size() > 3) {
    if (prev_tag == "PRP" || prev_tag == "NN" || prev_tag == "NNP") return {"VBZ", nullptr};
    return {"NNS", nullptr};
  }
  if (prev_tag == "PRP" && lower != "it") return {"VBP", nullptr};
  return {"NN", nullptr};
}

}  // namespace detail

/// Rule-based annotation: sentence split on terminal punctuation (abbreviations
/// excepted), word/punctuation tokenization with byte offsets, lookup plus
/// suffix-rule tagging and lemmatization. No parse trees are produced.
inline AnnotatedDocument annotate_basic(const std::string& text, std::string id = "doc") {
  if (detail::trim(text).empty()) throw DataError("annotate_basic: text is empty");
  auto raw = detail::tokenize(text);

  AnnotatedDocument doc{std::move(id), {}, text};
  Sentence cur;
  std::string prev_tag;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& rt = raw[i];
    const std::string lower = detail::to_lower(rt.surface);
    Token tok{rt.surface, lower, "", 1, rt.span};
    auto lex = detail::tag_word(rt.surface, lower, prev_tag, cur.tokens.empty());
    if (!lex.pos) {
      tok.pos = detail::punct_tag(rt.surface);
    } else {
      tok.pos = lex.pos;
      tok.lemma = lex.lemma ? lex.lemma : detail::lemmatize(lower, tok.pos);
    }
    tok.syllables = detail::has_alpha(rt.surface) ? count_syllables(rt.surface) : 1;
    prev_tag = tok.pos;
    cur.tokens.push_back(std::move(tok));

    if (detail::is_terminal(rt.surface)) {
      while (i + 1 < raw.size() && detail::is_closer(raw[i + 1].surface)) {
        ++i;
        cur.tokens.push_back({raw[i].surface, raw[i].surface, detail::punct_tag(raw[i].surface), 1, raw[i].span});
      }
      doc.sentences.push_back(std::move(cur));
      cur = Sentence{};
      prev_tag.clear();
    }
  }
  if (!cur.tokens.empty()) doc.sentences.push_back(std::move(cur));
  return doc;
}

/// True for tags that mark punctuation or symbols rather than words.
inline bool is_punctuation_tag(std::string_view pos) {
  static const std::unordered_set<std::string_view> tags = {".", ",", ":", "''", "``", "-LRB-", "-RRB-",
                                                            "#", "$", "SYM", "HYPH", "NFP"};
  return tags.count(pos) != 0;
}

}  // namespace psyling
