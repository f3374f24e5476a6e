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

#ifndef CQX_MENTIONS_HPP_
#define CQX_MENTIONS_HPP_

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cqx/lexicon.hpp"
#include "cqx/sentence.hpp"
#include "cqx/tokenize.hpp"

namespace cqx {

// Which mention forms annotate_mentions may produce. Indefinite articles and
// zero cues are only candidates when applying a model, never training seeds.
struct AnnotateOptions {
  bool articles = false;
  bool zero_cues = false;

  static AnnotateOptions training() { return {}; }
  static AnnotateOptions inference(bool zero_mode = false) {
    return {true, zero_mode};
  }
};

enum class PlaceholderStyle {
  Suffixed,  // NUMTERM-plets
  Plain,     // NUMTERM
};

namespace detail {

inline MentionAnnotation make_mention(MentionKind kind, Count value,
                                      std::optional<std::string> suffix = {},
                                      bool special = false) {
  MentionAnnotation m;
  m.kind = kind;
  m.value = value;
  switch (kind) {
    case MentionKind::Ordinal:
      m.placeholder = kOrdinalPlaceholder;
      break;
    case MentionKind::NumTerm:
      m.placeholder = std::string(kNumTermPlaceholder) + suffix.value_or("");
      m.suffix_class = std::move(suffix);
      m.special_term = special;
      break;
    default:
      m.placeholder = kCardinalPlaceholder;
      break;
  }
  return m;
}

inline std::vector<std::string> split_on_space(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(' ', start);
    if (end == std::string::npos) end = s.size();
    if (end > start) out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

inline std::optional<MentionAnnotation> cardinal_mention(
    Count value, const AnnotateOptions& options) {
  if (value == 0) {
    if (!options.zero_cues) return std::nullopt;
    return make_mention(MentionKind::Zero, 0);
  }
  return make_mention(MentionKind::Cardinal, value);
}

inline Token make_token(const std::string& surface, const Lemmatizer& lemmatize) {
  Token t;
  t.surface = surface;
  t.lemma = lemmatize(surface);
  if (t.lemma.empty()) t.lemma = to_lower_ascii(surface);
  return t;
}

}  // namespace detail

// Attaches a MentionAnnotation to every token expressing a count and clears
// it everywhere else. Multi-word cardinals ("twenty one") are merged into a
// single token. Annotating an already annotated sentence changes nothing.
inline Sentence annotate_mentions(const Sentence& sentence,
                                  const NumLexicon& lexicon,
                                  const AnnotateOptions& options = {}) {
  constexpr std::size_t kMaxCardinalWords = 8;
  const auto& in = sentence.tokens;
  std::vector<std::string> lower(in.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    lower[i] = to_lower_ascii(in[i].surface);

  Sentence out;
  std::size_t i = 0;
  while (i < in.size()) {
    Token tok = in[i];
    tok.mention.reset();
    if (lower[i].find(' ') != std::string::npos) {
      // Previously merged cardinal.
      auto words = detail::split_on_space(lower[i]);
      auto parsed = lexicon.parse_cardinal(words);
      if (parsed && parsed->second == words.size())
        tok.mention = detail::cardinal_mention(parsed->first, options);
      out.tokens.push_back(std::move(tok));
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < in.size() && end - i < kMaxCardinalWords &&
           lower[end].find(' ') == std::string::npos)
      ++end;
    auto parsed = lexicon.parse_cardinal(
        std::span<const std::string>(lower.data() + i, end - i));
    if (parsed) {
      auto [value, used] = *parsed;
      if (used > 1) {
        for (std::size_t k = i + 1; k < i + used; ++k) {
          tok.surface += ' ' + in[k].surface;
          tok.lemma += ' ' + lower[k];
        }
        tok.lemma = to_lower_ascii(tok.lemma);
      }
      tok.mention = detail::cardinal_mention(value, options);
      out.tokens.push_back(std::move(tok));
      i += used;
      continue;
    }
    const std::string& w = lower[i];
    if (auto ord = lexicon.ordinal(w); ord && *ord > 0) {
      tok.mention = detail::make_mention(MentionKind::Ordinal, *ord);
    } else if (auto nt = lexicon.numterm(w, tok.lemma)) {
      tok.mention = detail::make_mention(MentionKind::NumTerm, nt->value,
                                         nt->suffix_class, nt->special_term);
    } else if (options.articles && (w == "a" || w == "an")) {
      tok.mention = detail::make_mention(MentionKind::Article, 1);
    } else if (options.zero_cues && lexicon.zero_cues.count(w)) {
      tok.mention = detail::make_mention(MentionKind::Zero, 0);
    }
    out.tokens.push_back(std::move(tok));
    ++i;
  }
  out.reindex();
  return out;
}

// Rewrites the hand-picked special terms: phrase replacements ("thrice" ->
// "three times", "a dozen" -> "twelve") and suffix-placeholder terms
// ("twins" -> NUMTERM-plets). Untouched tokens keep their annotations.
inline Sentence normalize_special_terms(
    const Sentence& sentence, const NumLexicon& lexicon,
    const Lemmatizer& lemmatize = RuleLemmatizer{}) {
  const auto& in = sentence.tokens;
  std::vector<std::string> lower(in.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    lower[i] = to_lower_ascii(in[i].surface);

  Sentence out;
  std::size_t i = 0;
  while (i < in.size()) {
    const SpecialTerm* match = nullptr;
    for (const auto& term : lexicon.special_terms) {
      if (i + term.pattern.size() > in.size()) continue;
      if (std::equal(term.pattern.begin(), term.pattern.end(),
                     lower.begin() + static_cast<std::ptrdiff_t>(i))) {
        match = &term;
        break;
      }
    }
    if (!match) {
      out.tokens.push_back(in[i]);
      ++i;
      continue;
    }
    if (!match->replacement.empty()) {
      for (const auto& word : match->replacement)
        out.tokens.push_back(detail::make_token(word, lemmatize));
    } else {
      Token tok = in[i];
      for (std::size_t k = 1; k < match->pattern.size(); ++k)
        tok.surface += ' ' + in[i + k].surface;
      tok.mention = detail::make_mention(MentionKind::NumTerm, match->value,
                                         "-" + *match->suffix_class, true);
      out.tokens.push_back(std::move(tok));
    }
    i += match->pattern.size();
  }
  out.reindex();
  return out;
}

namespace detail {

inline bool is_clause_boundary(std::string_view lower) {
  static constexpr std::string_view kBoundaries[] = {
      ".", ",", ";", ":", "!", "?", "(", ")", "and", "but", "because",
      "until", "after", "before", "since", "while", "when", "though",
      "although"};
  return std::find(std::begin(kBoundaries), std::end(kBoundaries), lower) !=
         std::end(kBoundaries);
}

inline bool is_punct(std::string_view s) {
  return s.size() == 1 && !std::isalnum(static_cast<unsigned char>(s[0]));
}

}  // namespace detail

// Rewrites the three negation schemas into explicit zero counts:
//   "did n't have any X"  -> "have no X"
//   "has never been Y"    -> "has been Y 0 times"
//   "was without X"       -> "was with no X"
// and marks every resulting "no"/"0" token as a Zero mention.
inline Sentence rewrite_zero_cues(const Sentence& sentence,
                                  const Lemmatizer& lemmatize =
                                      RuleLemmatizer{}) {
  constexpr std::size_t kAnyWindow = 4;
  std::vector<Token> toks = sentence.tokens;
  auto lower_at = [&toks](std::size_t k) {
    return to_lower_ascii(toks[k].surface);
  };

  // not ... any
  for (std::size_t k = 0; k < toks.size();) {
    std::string w = lower_at(k);
    if (w != "not" && w != "n't") {
      ++k;
      continue;
    }
    std::size_t any = 0;
    for (std::size_t m = k + 1; m < toks.size() && m <= k + kAnyWindow; ++m) {
      std::string wm = lower_at(m);
      if (detail::is_punct(wm)) break;
      if (wm == "any") {
        any = m;
        break;
      }
    }
    if (any == 0) {
      ++k;
      continue;
    }
    toks[any] = detail::make_token(
        toks[any].surface[0] == 'A' ? "No" : "no", lemmatize);
    std::size_t erase_from = k;
    if (k > 0) {
      std::string aux = lower_at(k - 1);
      if (aux == "do" || aux == "does" || aux == "did") erase_from = k - 1;
    }
    toks.erase(toks.begin() + static_cast<std::ptrdiff_t>(erase_from),
               toks.begin() + static_cast<std::ptrdiff_t>(k + 1));
    k = erase_from;
  }

  // never
  for (std::size_t k = 0; k < toks.size();) {
    if (lower_at(k) != "never") {
      ++k;
      continue;
    }
    toks.erase(toks.begin() + static_cast<std::ptrdiff_t>(k));
    std::size_t end = k;
    while (end < toks.size() && !detail::is_clause_boundary(lower_at(end)))
      ++end;
    toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(end),
                {detail::make_token("0", lemmatize),
                 detail::make_token("times", lemmatize)});
  }

  // without
  for (std::size_t k = 0; k < toks.size(); ++k) {
    if (lower_at(k) != "without") continue;
    toks[k] = detail::make_token(
        toks[k].surface[0] == 'W' ? "With" : "with", lemmatize);
    if (k + 1 < toks.size() && lower_at(k + 1) == "any")
      toks[k + 1] = detail::make_token("no", lemmatize);
    else
      toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(k + 1),
                  detail::make_token("no", lemmatize));
  }

  Sentence out{std::move(toks)};
  for (auto& t : out.tokens) {
    std::string w = to_lower_ascii(t.surface);
    if (w == "no" || w == "0") t.mention = detail::make_mention(MentionKind::Zero, 0);
  }
  out.reindex();
  return out;
}

// Lemma sequence with every annotated token replaced by its placeholder.
inline std::vector<std::string> to_placeholder_sequence(
    const Sentence& sentence,
    PlaceholderStyle style = PlaceholderStyle::Suffixed) {
  std::vector<std::string> seq;
  seq.reserve(sentence.size());
  for (const auto& t : sentence.tokens) {
    if (!t.mention) {
      seq.push_back(t.lemma);
    } else if (style == PlaceholderStyle::Plain &&
               t.mention->kind == MentionKind::NumTerm) {
      seq.emplace_back(kNumTermPlaceholder);
    } else {
      seq.push_back(t.mention->placeholder);
    }
  }
  return seq;
}

// Full text preprocessing: tokenize, rewrite special terms, optionally
// rewrite zero cues, then annotate mentions.
inline std::vector<Sentence> preprocess(std::string_view text,
                                        const NumLexicon& lexicon,
                                        const AnnotateOptions& options,
                                        const Lemmatizer& lemmatize =
                                            RuleLemmatizer{}) {
  std::vector<Sentence> sentences = tokenize(text, lemmatize);
  for (auto& s : sentences) {
    s = normalize_special_terms(s, lexicon, lemmatize);
    if (options.zero_cues) s = rewrite_zero_cues(s, lemmatize);
    s = annotate_mentions(s, lexicon, options);
  }
  return sentences;
}

}  // namespace cqx

#endif  // CQX_MENTIONS_HPP_
