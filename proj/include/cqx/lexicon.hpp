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

#ifndef CQX_LEXICON_HPP_
#define CQX_LEXICON_HPP_

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cqx/error.hpp"
#include "cqx/sentence.hpp"
#include "cqx/tokenize.hpp"

namespace cqx {

// One entry of the hand-picked special-term table. Either `replacement` is
// non-empty (rewrite to a cardinal-bearing phrase) or `suffix_class` is set
// (keep the token as a NUMTERM-<class> mention with `value`).
struct SpecialTerm {
  std::vector<std::string> pattern;
  std::vector<std::string> replacement;
  std::optional<std::string> suffix_class;
  Count value = 0;
};

struct NumTermMatch {
  Count value = 0;
  std::string suffix_class;  // with leading '-'
  bool special_term = false;
};

// Word lists and rules used to detect and normalize numeric mentions.
struct NumLexicon {
  std::map<std::string, Count> cardinal_words;
  std::map<std::string, Count> ordinal_words;
  std::map<std::string, Count> latin_greek_prefixes;
  std::map<std::string, std::string> numterm_suffixes;  // suffix -> class
  std::set<std::string> numterm_stoplist;
  std::vector<SpecialTerm> special_terms;
  std::map<std::string, Count> zero_cues;

  static NumLexicon load(const std::filesystem::path& dir);

  std::optional<Count> cardinal_word(std::string_view lower) const {
    if (auto it = cardinal_words.find(std::string(lower));
        it != cardinal_words.end())
      return it->second;
    return std::nullopt;
  }

  // Digit strings, optionally with thousands separators ("1,200"). Decimals
  // and malformed groupings are rejected.
  static std::optional<Count> parse_digits(std::string_view s) {
    if (s.empty() || s.size() > 19) return std::nullopt;
    std::string digits;
    std::size_t group = 0;
    bool grouped = s.find(',') != std::string_view::npos;
    for (std::size_t i = 0; i < s.size(); ++i) {
      char c = s[i];
      if (c >= '0' && c <= '9') {
        digits += c;
        ++group;
      } else if (c == ',' && grouped) {
        if (group == 0 || group > 3 || (digits.size() > group && group != 3))
          return std::nullopt;
        group = 0;
      } else {
        return std::nullopt;
      }
    }
    if (grouped && group != 3) return std::nullopt;
    Count value = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      return std::nullopt;
    return value;
  }

  std::optional<Count> ordinal(std::string_view lower) const {
    if (auto it = ordinal_words.find(std::string(lower));
        it != ordinal_words.end())
      return it->second;
    // 1st, 22nd, 103rd, 4th
    if (lower.size() >= 3) {
      std::string_view suffix = lower.substr(lower.size() - 2);
      if (suffix == "st" || suffix == "nd" || suffix == "rd" ||
          suffix == "th") {
        std::string_view num = lower.substr(0, lower.size() - 2);
        if (std::all_of(num.begin(), num.end(),
                        [](char c) { return c >= '0' && c <= '9'; }))
          return parse_digits(num);
      }
    }
    // twenty-first
    if (auto dash = lower.find('-'); dash != std::string_view::npos) {
      auto tens = cardinal_word(lower.substr(0, dash));
      auto unit = ordinal_words.find(std::string(lower.substr(dash + 1)));
      if (tens && *tens >= 20 && *tens < 100 && *tens % 10 == 0 &&
          unit != ordinal_words.end() && unit->second >= 1 &&
          unit->second <= 9)
        return *tens + unit->second;
    }
    return std::nullopt;
  }

  // Single-token special term carrying a suffix placeholder ("twins").
  std::optional<NumTermMatch> special_numterm(std::string_view lower) const {
    for (const auto& term : special_terms) {
      if (term.suffix_class && term.pattern.size() == 1 &&
          term.pattern.front() == lower)
        return NumTermMatch{term.value, "-" + *term.suffix_class, true};
    }
    return std::nullopt;
  }

  // Decomposes a word into prefix + optional connecting vowel + suffix.
  // Short suffixes ("ad", "et") need a stem of at least three characters.
  std::optional<NumTermMatch> affixed_numterm(std::string_view lower) const {
    if (numterm_stoplist.count(std::string(lower))) return std::nullopt;
    if (!std::all_of(lower.begin(), lower.end(), [](char c) {
          return c >= 'a' && c <= 'z';
        }))
      return std::nullopt;
    // Longest suffix first.
    std::vector<const std::pair<const std::string, std::string>*> suffixes;
    for (const auto& entry : numterm_suffixes) suffixes.push_back(&entry);
    std::stable_sort(suffixes.begin(), suffixes.end(),
                     [](auto* a, auto* b) {
                       return a->first.size() > b->first.size();
                     });
    for (const auto* entry : suffixes) {
      const std::string& suffix = entry->first;
      if (lower.size() <= suffix.size() || !lower.ends_with(suffix)) continue;
      std::string_view stem = lower.substr(0, lower.size() - suffix.size());
      std::size_t min_stem = suffix.size() <= 2 ? 3 : 2;
      if (stem.size() < min_stem) continue;
      if (auto value = prefix_value(stem))
        return NumTermMatch{*value, "-" + entry->second, false};
    }
    return std::nullopt;
  }

  std::optional<NumTermMatch> numterm(std::string_view lower,
                                      std::string_view lemma) const {
    if (auto m = special_numterm(lower)) return m;
    if (auto m = affixed_numterm(lower)) return m;
    if (lemma != lower) {
      if (auto m = special_numterm(lemma)) return m;
      if (auto m = affixed_numterm(lemma)) return m;
    }
    return std::nullopt;
  }

  // Longest cardinal phrase starting at words[0]; returns (value, words used).
  // Covers digits, single number words, hyphenated tens ("twenty-one") and
  // unit/tens/hundred/thousand compositions up to 999,999.
  std::optional<std::pair<Count, std::size_t>> parse_cardinal(
      std::span<const std::string> words) const;

 private:
  std::optional<Count> prefix_value(std::string_view stem) const {
    if (auto it = latin_greek_prefixes.find(std::string(stem));
        it != latin_greek_prefixes.end())
      return it->second;
    static constexpr std::string_view kVowels = "aeiou";
    if (stem.size() >= 3 && kVowels.find(stem.back()) != std::string_view::npos) {
      if (auto it = latin_greek_prefixes.find(
              std::string(stem.substr(0, stem.size() - 1)));
          it != latin_greek_prefixes.end())
        return it->second;
    }
    return std::nullopt;
  }

  // Value 0..99 from a single token (unit, teen, tens or "twenty-one").
  std::optional<Count> below_hundred_word(std::string_view w) const {
    if (auto v = cardinal_word(w); v && *v < 100) return v;
    if (auto dash = w.find('-'); dash != std::string_view::npos) {
      auto tens = cardinal_word(w.substr(0, dash));
      auto unit = cardinal_word(w.substr(dash + 1));
      if (tens && unit && *tens >= 20 && *tens < 100 && *tens % 10 == 0 &&
          *unit >= 1 && *unit <= 9)
        return *tens + *unit;
    }
    return std::nullopt;
  }

  std::optional<std::pair<Count, std::size_t>> parse_below_hundred(
      std::span<const std::string> w) const {
    if (w.empty()) return std::nullopt;
    auto first = below_hundred_word(w[0]);
    if (!first) return std::nullopt;
    if (*first >= 20 && *first % 10 == 0 && w.size() > 1) {
      if (auto unit = cardinal_word(w[1]); unit && *unit >= 1 && *unit <= 9)
        return std::pair{*first + *unit, std::size_t{2}};
    }
    return std::pair{*first, std::size_t{1}};
  }

  std::optional<std::pair<Count, std::size_t>> parse_below_thousand(
      std::span<const std::string> w) const {
    if (w.empty()) return std::nullopt;
    if (w.size() > 1 && w[1] == "hundred") {
      std::optional<Count> mult;
      if (w[0] == "a") mult = 1;
      else if (auto u = cardinal_word(w[0]); u && *u >= 1 && *u <= 9) mult = u;
      if (mult) {
        Count value = *mult * 100;
        std::size_t used = 2;
        std::size_t skip = (w.size() > 2 && w[2] == "and") ? 1 : 0;
        if (auto rest = parse_below_hundred(w.subspan(2 + skip));
            rest && rest->first > 0) {
          value += rest->first;
          used += skip + rest->second;
        }
        return std::pair{value, used};
      }
    }
    if (w[0] == "hundred") return std::pair{Count{100}, std::size_t{1}};
    return parse_below_hundred(w);
  }
};

inline std::optional<std::pair<Count, std::size_t>> NumLexicon::parse_cardinal(
    std::span<const std::string> words) const {
  if (words.empty()) return std::nullopt;
  if (auto digits = parse_digits(words[0]))
    return std::pair{*digits, std::size_t{1}};
  std::optional<std::pair<Count, std::size_t>> head;
  if (words.size() > 1 && words[0] == "a" && words[1] == "thousand")
    head = std::pair{Count{1}, std::size_t{1}};
  else if (words[0] == "thousand")
    return std::pair{Count{1000}, std::size_t{1}};
  else
    head = parse_below_thousand(words);
  if (!head) return std::nullopt;
  if (head->second < words.size() && words[head->second] == "thousand" &&
      head->first > 0) {
    Count value = head->first * 1000;
    std::size_t used = head->second + 1;
    std::size_t skip =
        (used < words.size() && words[used] == "and") ? 1 : 0;
    if (auto rest = parse_below_thousand(words.subspan(used + skip));
        rest && rest->first > 0) {
      value += rest->first;
      used += skip + rest->second;
    }
    return std::pair{value, used};
  }
  return head;
}

namespace detail {

struct LexiconLine {
  std::size_t number;
  std::vector<std::string> fields;
};

inline std::vector<LexiconLine> read_lexicon_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file: " + path.string());
  std::vector<LexiconLine> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    LexiconLine entry{number, {}};
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) entry.fields.push_back(field);
    lines.push_back(std::move(entry));
  }
  return lines;
}

inline Count parse_lexicon_value(const std::string& s,
                                 const std::filesystem::path& path,
                                 std::size_t line) {
  auto v = NumLexicon::parse_digits(s);
  if (!v)
    throw FormatError(path.string() + ":" + std::to_string(line) +
                      ": expected a nonnegative integer, got '" + s + "'");
  return *v;
}

inline std::map<std::string, Count> read_value_map(
    const std::filesystem::path& path, bool unique_keys) {
  std::map<std::string, Count> out;
  for (const auto& line : read_lexicon_file(path)) {
    if (line.fields.size() != 2)
      throw FormatError(path.string() + ":" + std::to_string(line.number) +
                        ": expected term<TAB>value");
    std::string key = to_lower_ascii(line.fields[0]);
    if (unique_keys && out.count(key))
      throw FormatError(path.string() + ":" + std::to_string(line.number) +
                        ": duplicate key '" + key + "'");
    out[key] = parse_lexicon_value(line.fields[1], path, line.number);
  }
  return out;
}

inline std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string w;
  while (ss >> w) out.push_back(to_lower_ascii(w));
  return out;
}

}  // namespace detail

inline NumLexicon NumLexicon::load(const std::filesystem::path& dir) {
  NumLexicon lex;
  lex.cardinal_words = detail::read_value_map(dir / "cardinals.tsv", true);
  lex.ordinal_words = detail::read_value_map(dir / "ordinals.tsv", true);
  lex.latin_greek_prefixes = detail::read_value_map(dir / "prefixes.tsv", true);
  lex.zero_cues = detail::read_value_map(dir / "zero_cues.tsv", true);
  for (const auto& line : detail::read_lexicon_file(dir / "suffixes.tsv")) {
    if (line.fields.size() != 2)
      throw FormatError("suffixes.tsv:" + std::to_string(line.number) +
                        ": expected suffix<TAB>class");
    lex.numterm_suffixes[to_lower_ascii(line.fields[0])] = line.fields[1];
  }
  for (const auto& line :
       detail::read_lexicon_file(dir / "numterm_stoplist.txt")) {
    if (!line.fields.empty())
      lex.numterm_stoplist.insert(to_lower_ascii(line.fields[0]));
  }
  const auto special_path = dir / "special_terms.tsv";
  for (const auto& line : detail::read_lexicon_file(special_path)) {
    SpecialTerm term;
    if (line.fields.size() < 2)
      throw FormatError("special_terms.tsv:" + std::to_string(line.number) +
                        ": expected term<TAB>replacement");
    term.pattern = detail::split_words(line.fields[0]);
    if (!line.fields[1].empty() && line.fields[1][0] == '@') {
      if (line.fields.size() != 3)
        throw FormatError("special_terms.tsv:" + std::to_string(line.number) +
                          ": suffix entries need a value column");
      term.suffix_class = line.fields[1].substr(1);
      term.value =
          detail::parse_lexicon_value(line.fields[2], special_path, line.number);
      if (term.value == 0)
        throw FormatError("special_terms.tsv:" + std::to_string(line.number) +
                          ": numterm value must be positive");
    } else {
      term.replacement = detail::split_words(line.fields[1]);
    }
    if (term.pattern.empty())
      throw FormatError("special_terms.tsv:" + std::to_string(line.number) +
                        ": empty term");
    lex.special_terms.push_back(std::move(term));
  }
  // Longest patterns first so "a dozen" wins over "dozen".
  std::stable_sort(lex.special_terms.begin(), lex.special_terms.end(),
                   [](const SpecialTerm& a, const SpecialTerm& b) {
                     return a.pattern.size() > b.pattern.size();
                   });
  return lex;
}

}  // namespace cqx

#endif  // CQX_LEXICON_HPP_
