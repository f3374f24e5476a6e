// Copyright 2026 The cqx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CQX_TOKENIZE_HPP_
#define CQX_TOKENIZE_HPP_

#include <algorithm>
#include <cctype>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cqx/sentence.hpp"

namespace cqx {

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Maps a lowercased surface form to its base form. Any callable with this
// signature can replace the built-in rule lemmatizer.
using Lemmatizer = std::function<std::string(std::string_view)>;

// Suffix-stripping lemmatizer with an exceptions table for irregular nouns
// and the verb forms that matter for count contexts.
class RuleLemmatizer {
 public:
  std::string operator()(std::string_view surface) const {
    std::string w = to_lower_ascii(surface);
    if (auto it = exceptions().find(w); it != exceptions().end())
      return it->second;
    if (w.size() <= 3 || !is_alpha_word(w)) return w;
    auto ends = [&w](std::string_view suf) { return w.ends_with(suf); };
    if (w.size() > 4 && (ends("ies") || ends("ied")))
      return w.substr(0, w.size() - 3) + "y";
    if (ends("sses")) return w.substr(0, w.size() - 2);
    if (ends("ches") || ends("shes") || ends("xes") || ends("zes"))
      return w.substr(0, w.size() - 2);
    if (ends("s") && !ends("ss") && !ends("us") && !ends("is") && !ends("'s"))
      return w.substr(0, w.size() - 1);
    return w;
  }

 private:
  static bool is_alpha_word(const std::string& w) {
    return std::all_of(w.begin(), w.end(), [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '-';
    });
  }

  static const std::unordered_map<std::string, std::string>& exceptions() {
    static const std::unordered_map<std::string, std::string> table = {
        {"children", "child"}, {"men", "man"},         {"women", "woman"},
        {"people", "person"},  {"wives", "wife"},      {"lives", "life"},
        {"feet", "foot"},      {"teeth", "tooth"},     {"mice", "mouse"},
        {"geese", "goose"},    {"halves", "half"},     {"movies", "movie"},
        {"series", "series"},  {"species", "species"}, {"news", "news"},
        {"always", "always"},  {"perhaps", "perhaps"}, {"sometimes", "sometimes"},
        {"is", "be"},          {"are", "be"},          {"was", "be"},
        {"were", "be"},        {"been", "be"},         {"being", "be"},
        {"am", "be"},          {"'m", "be"},           {"'re", "be"},
        {"has", "have"},       {"had", "have"},        {"having", "have"},
        {"'ve", "have"},       {"does", "do"},         {"did", "do"},
        {"done", "do"},        {"went", "go"},         {"gone", "go"},
        {"goes", "go"},        {"brought", "bring"},   {"made", "make"},
        {"took", "take"},      {"taken", "take"},      {"gave", "give"},
        {"given", "give"},     {"became", "become"},   {"wrote", "write"},
        {"written", "write"},  {"won", "win"},         {"got", "get"},
        {"died", "die"},       {"lost", "lose"},       {"left", "leave"},
        {"n't", "not"},        {"ca", "can"},          {"wo", "will"},
        {"'ll", "will"},       {"bore", "bear"},       {"fathered", "father"},
        {"mothered", "mother"}, {"sang", "sing"},      {"sung", "sing"},
        {"began", "begin"},    {"begun", "begin"},     {"led", "lead"},
        {"met", "meet"},       {"divorced", "divorce"}, {"remarried", "remarry"},
        {"includes", "include"}, {"included", "include"},
        {"consists", "consist"}, {"consisted", "consist"},
    };
    return table;
  }
};

namespace detail {

inline bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Bytes >= 0x80 belong to multi-byte UTF-8 sequences and are treated as
// letters, so accented names stay inside one token.
inline bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

inline bool is_digit(unsigned char c) { return std::isdigit(c) != 0; }

inline bool is_terminal(std::string_view tok) {
  return tok == "." || tok == "!" || tok == "?";
}

inline bool is_closing(std::string_view tok) {
  return tok == "\"" || tok == "'" || tok == ")" || tok == "]";
}

inline const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> abbrevs = {
      "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc",
      "inc", "ltd", "co", "gen", "col", "lt", "sgt", "rev", "hon", "mt"};
  return abbrevs;
}

inline std::string normalize_quotes(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+2019 RIGHT SINGLE QUOTATION MARK, U+2018 LEFT SINGLE QUOTATION MARK
    if (i + 3 <= text.size() && text.compare(i, 3, "\xE2\x80\x99") == 0) {
      out += '\'';
      i += 2;
    } else if (i + 3 <= text.size() &&
               text.compare(i, 3, "\xE2\x80\x98") == 0) {
      out += '\'';
      i += 2;
    } else {
      out += text[i];
    }
  }
  return out;
}

// Splits a word containing an apostrophe into the PTB-style pieces
// ("didn't" -> "did" "n't", "Jolie's" -> "Jolie" "'s").
inline void split_clitics(const std::string& word,
                          std::vector<std::string>& out) {
  std::string lower = to_lower_ascii(word);
  if (lower.size() > 3 && lower.ends_with("n't")) {
    out.push_back(word.substr(0, word.size() - 3));
    out.push_back(word.substr(word.size() - 3));
    return;
  }
  for (std::string_view clitic : {"'s", "'re", "'ve", "'ll", "'d", "'m"}) {
    if (lower.size() > clitic.size() && lower.ends_with(clitic)) {
      out.push_back(word.substr(0, word.size() - clitic.size()));
      out.push_back(word.substr(word.size() - clitic.size()));
      return;
    }
  }
  out.push_back(word);
}

// Raw token strings, in order.
inline std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  auto at = [&](std::size_t k) -> unsigned char {
    return k < n ? static_cast<unsigned char>(text[k]) : 0;
  };
  while (i < n) {
    unsigned char c = at(i);
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (!is_word_char(c)) {
      out.emplace_back(1, static_cast<char>(c));
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n) {
      unsigned char d = at(j);
      if (is_word_char(d)) {
        ++j;
      } else if ((d == ',' || d == '.') && is_digit(at(j - 1)) &&
                 is_digit(at(j + 1))) {
        ++j;  // 1,200 and 3.5 stay whole
      } else if (d == '-' && is_word_char(at(j + 1))) {
        ++j;
      } else if (d == '\'' && std::isalpha(at(j + 1))) {
        ++j;
      } else {
        break;
      }
    }
    std::string word(text.substr(i, j - i));
    // Abbreviations and single-letter initials keep their period.
    if (at(j) == '.' &&
        (abbreviations().count(to_lower_ascii(word)) ||
         (word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0]))))) {
      word += '.';
      ++j;
    }
    if (word.find('\'') != std::string::npos)
      split_clitics(word, out);
    else
      out.push_back(std::move(word));
    i = j;
  }
  return out;
}

}  // namespace detail

// Splits text into sentences on terminal punctuation and into tokens on
// whitespace and punctuation boundaries. Empty text yields no sentences.
inline std::vector<Sentence> tokenize(std::string_view text,
                                      const Lemmatizer& lemmatize =
                                          RuleLemmatizer{}) {
  const std::vector<std::string> raw =
      detail::split_tokens(detail::normalize_quotes(text));
  std::vector<Sentence> sentences;
  Sentence current;
  auto flush = [&] {
    if (!current.empty()) {
      current.reindex();
      sentences.push_back(std::move(current));
      current = Sentence{};
    }
  };
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Token tok;
    tok.surface = raw[i];
    tok.lemma = lemmatize(raw[i]);
    if (tok.lemma.empty()) tok.lemma = to_lower_ascii(raw[i]);
    current.tokens.push_back(std::move(tok));
    if (detail::is_terminal(raw[i])) {
      while (i + 1 < raw.size() && detail::is_closing(raw[i + 1])) {
        ++i;
        current.tokens.push_back(Token{raw[i], raw[i], 0, std::nullopt});
      }
      flush();
    }
  }
  flush();
  return sentences;
}

// Builds a sentence from pre-split tokens (e.g. read back from a tagged file).
inline Sentence make_sentence(const std::vector<std::string>& surfaces,
                              const Lemmatizer& lemmatize = RuleLemmatizer{}) {
  Sentence s;
  for (const auto& w : surfaces) {
    Token t;
    t.surface = w;
    t.lemma = lemmatize(w);
    if (t.lemma.empty()) t.lemma = to_lower_ascii(w);
    s.tokens.push_back(std::move(t));
  }
  s.reindex();
  return s;
}

}  // namespace cqx

#endif  // CQX_TOKENIZE_HPP_
