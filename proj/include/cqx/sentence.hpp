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

#ifndef CQX_SENTENCE_HPP_
#define CQX_SENTENCE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cqx {

using Count = std::uint64_t;

// Linguistic form of a count expression.
enum class MentionKind { Cardinal, Ordinal, NumTerm, Article, Zero };

inline std::string_view to_string(MentionKind kind) {
  switch (kind) {
    case MentionKind::Cardinal: return "cardinal";
    case MentionKind::Ordinal: return "ordinal";
    case MentionKind::NumTerm: return "numterm";
    case MentionKind::Article: return "article";
    case MentionKind::Zero: return "zero";
  }
  return "cardinal";
}

inline std::optional<MentionKind> mention_kind_from_string(std::string_view s) {
  if (s == "cardinal") return MentionKind::Cardinal;
  if (s == "ordinal") return MentionKind::Ordinal;
  if (s == "numterm") return MentionKind::NumTerm;
  if (s == "article") return MentionKind::Article;
  if (s == "zero") return MentionKind::Zero;
  return std::nullopt;
}

inline constexpr std::string_view kCardinalPlaceholder = "CARDINAL";
inline constexpr std::string_view kOrdinalPlaceholder = "ORDINAL";
inline constexpr std::string_view kNumTermPlaceholder = "NUMTERM";

// A detected numeric expression attached to a token.
//
// Article mentions always carry value 1 and Zero mentions value 0. Only
// NumTerm mentions have a suffix class ("-plets", "-logy", ...), and their
// placeholder is NUMTERM followed by that suffix.
struct MentionAnnotation {
  MentionKind kind = MentionKind::Cardinal;
  Count value = 0;
  std::optional<std::string> suffix_class;
  std::string placeholder;
  // Set for numterms coming from the hand-picked special-term table rather
  // than from prefix/suffix decomposition.
  bool special_term = false;

  friend bool operator==(const MentionAnnotation&,
                         const MentionAnnotation&) = default;
};

struct Token {
  std::string surface;
  std::string lemma;
  std::size_t index = 0;
  std::optional<MentionAnnotation> mention;

  bool is_mention() const { return mention.has_value(); }

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  // Surfaces joined by single spaces.
  std::string text() const {
    std::string out;
    for (const auto& t : tokens) {
      if (!out.empty()) out += ' ';
      out += t.surface;
    }
    return out;
  }

  bool has_mention() const {
    for (const auto& t : tokens)
      if (t.mention) return true;
    return false;
  }

  // Restores the 0..n-1 index invariant after tokens were inserted/removed.
  void reindex() {
    for (std::size_t i = 0; i < tokens.size(); ++i) tokens[i].index = i;
  }

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

}  // namespace cqx

#endif  // CQX_SENTENCE_HPP_
