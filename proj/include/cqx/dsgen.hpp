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

#ifndef CQX_DSGEN_HPP_
#define CQX_DSGEN_HPP_

#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cqx/corpus.hpp"
#include "cqx/error.hpp"
#include "cqx/kbstore.hpp"
#include "cqx/mentions.hpp"
#include "cqx/parallel.hpp"
#include "cqx/sentence.hpp"
#include "cqx/tags.hpp"

namespace cqx {

struct LabeledSentence {
  Sentence sentence;
  std::vector<Tag> tags;
  EntityId subject;
  Relation relation;
};

struct SeedPolicy {
  double popularity_top_fraction = 1.0;
  double upper_bound_q = 0.99;
  double entropy_threshold = 0.5;  // bits
  bool train_special_terms_as_seeds = true;
  // Restrict the entropy filter to mentions that became COUNT seeds.
  bool entropy_positives_only = false;
  // Indefinite articles are inference-only cues.
  static constexpr bool articles_as_seeds = false;
};

// Longest run of mentions that may be summed, and the widest gap allowed
// between two run members.
inline constexpr std::size_t kMaxCompositionRun = 4;
inline constexpr std::size_t kMaxCompositionGap = 6;

namespace detail {

inline bool is_comp_cue(const Token& t) {
  return t.surface == "," || to_lower_ascii(t.surface) == "and";
}

inline bool is_seed_candidate(const MentionAnnotation& m,
                              const SeedPolicy& policy) {
  switch (m.kind) {
    case MentionKind::Cardinal:
    case MentionKind::Ordinal:
      return true;
    case MentionKind::NumTerm:
      return policy.train_special_terms_as_seeds || !m.special_term;
    default:
      return false;
  }
}

// Index of the last compositional cue strictly between two positions, if the
// gap is short enough and holds no other token that blocks composition.
inline std::optional<std::size_t> composition_cue(const Sentence& s,
                                                  std::size_t left,
                                                  std::size_t right) {
  if (right <= left + 1 || right - left - 1 > kMaxCompositionGap)
    return std::nullopt;
  std::optional<std::size_t> cue;
  for (std::size_t k = left + 1; k < right; ++k) {
    if (is_comp_cue(s.tokens[k])) cue = k;
    if (s.tokens[k].surface == "." || s.tokens[k].surface == ";")
      return std::nullopt;
  }
  return cue;
}

}  // namespace detail

// Distant-supervision labeling of one sentence against a KB count.
//
// Returns std::nullopt when the sentence must be excluded from training: it
// holds a mention greater than the KB count but not above the relation's
// upper bound, which may be a correct count the KB does not know yet.
// Otherwise mentions equal to the KB count become COUNT; a run of up to four
// smaller mentions summing to the KB count, joined by commas or "and",
// becomes COUNT with COMP on the last cue of each gap; everything else is O.
inline std::optional<std::vector<Tag>> label_sentence(
    const Sentence& sentence, Count kb_count, Count upper_bound,
    const SeedPolicy& policy = {}) {
  std::vector<Tag> tags(sentence.size(), Tag::O);
  std::vector<std::size_t> mentions;
  for (const auto& t : sentence.tokens) {
    if (!t.mention || !detail::is_seed_candidate(*t.mention, policy)) continue;
    Count v = t.mention->value;
    if (v > kb_count && v <= upper_bound) return std::nullopt;
    mentions.push_back(t.index);
  }
  for (std::size_t pos : mentions)
    if (sentence.tokens[pos].mention->value == kb_count) tags[pos] = Tag::Count;

  auto composable = [&](std::size_t pos) {
    const auto& m = *sentence.tokens[pos].mention;
    return (m.kind == MentionKind::Cardinal || m.kind == MentionKind::NumTerm) &&
           m.value >= 1 && m.value < kb_count;
  };
  for (std::size_t start = 0; start < mentions.size(); ++start) {
    if (!composable(mentions[start])) continue;
    Count sum = sentence.tokens[mentions[start]].mention->value;
    std::vector<std::size_t> cues;
    for (std::size_t end = start + 1;
         end < mentions.size() && end - start < kMaxCompositionRun; ++end) {
      if (!composable(mentions[end])) break;
      auto cue = detail::composition_cue(sentence, mentions[end - 1],
                                         mentions[end]);
      if (!cue) break;
      cues.push_back(*cue);
      sum += sentence.tokens[mentions[end]].mention->value;
      if (sum > kb_count) break;
      if (sum == kb_count) {
        for (std::size_t k = start; k <= end; ++k) tags[mentions[k]] = Tag::Count;
        for (std::size_t c : cues) tags[c] = Tag::Comp;
        return tags;
      }
    }
  }
  return tags;
}

// Shannon entropy (bits) of the context signatures around every mention of
// `value` in the document. A signature is the two lemmas on each side.
inline double number_entropy(const std::vector<Sentence>& document,
                             Count value) {
  std::map<std::string, std::size_t> signatures;
  std::size_t total = 0;
  for (const auto& s : document) {
    for (const auto& t : s.tokens) {
      if (!t.mention || t.mention->value != value) continue;
      auto lemma_at = [&s](std::ptrdiff_t k) -> std::string {
        if (k < 0) return "BOS";
        if (k >= static_cast<std::ptrdiff_t>(s.size())) return "EOS";
        return s.tokens[static_cast<std::size_t>(k)].lemma;
      };
      auto i = static_cast<std::ptrdiff_t>(t.index);
      std::string sig = lemma_at(i - 2) + ' ' + lemma_at(i - 1) + " _ " +
                        lemma_at(i + 1) + ' ' + lemma_at(i + 2);
      ++signatures[sig];
      ++total;
    }
  }
  double h = 0.0;
  for (const auto& [sig, n] : signatures) {
    double p = static_cast<double>(n) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

inline std::size_t count_occurrences(const std::vector<Sentence>& document,
                                     Count value) {
  std::size_t n = 0;
  for (const auto& s : document)
    for (const auto& t : s.tokens)
      if (t.mention && t.mention->value == value) ++n;
  return n;
}

struct GenerationStats {
  std::size_t subjects_considered = 0;
  std::size_t subjects_with_text = 0;
  std::size_t subjects_zero_count = 0;
  std::size_t candidate_sentences = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t excluded = 0;
  std::size_t entropy_dropped = 0;
  Count upper_bound = 0;
  std::vector<std::string> warnings;

  GenerationStats& operator+=(const GenerationStats& o) {
    subjects_considered += o.subjects_considered;
    subjects_with_text += o.subjects_with_text;
    subjects_zero_count += o.subjects_zero_count;
    candidate_sentences += o.candidate_sentences;
    positive += o.positive;
    negative += o.negative;
    excluded += o.excluded;
    entropy_dropped += o.entropy_dropped;
    warnings.insert(warnings.end(), o.warnings.begin(), o.warnings.end());
    return *this;
  }
};

struct TrainingSet {
  std::vector<LabeledSentence> sentences;
  GenerationStats stats;
};

// Labels every candidate sentence of one subject's document.
inline TrainingSet label_document(const std::vector<Sentence>& document,
                                  const EntityId& subject,
                                  const Relation& rel, Count kb_count,
                                  Count upper_bound,
                                  const SeedPolicy& policy) {
  TrainingSet out;
  for (const auto& s : document) {
    bool has_candidate = false;
    for (const auto& t : s.tokens)
      if (t.mention && detail::is_seed_candidate(*t.mention, policy))
        has_candidate = true;
    if (!has_candidate) continue;
    ++out.stats.candidate_sentences;
    auto tags = label_sentence(s, kb_count, upper_bound, policy);
    if (!tags) {
      ++out.stats.excluded;
      continue;
    }
    bool low_entropy = false;
    for (const auto& t : s.tokens) {
      if (!t.mention || !detail::is_seed_candidate(*t.mention, policy)) continue;
      if (policy.entropy_positives_only && (*tags)[t.index] != Tag::Count)
        continue;
      Count v = t.mention->value;
      if (count_occurrences(document, v) > 1 &&
          number_entropy(document, v) < policy.entropy_threshold) {
        low_entropy = true;
        break;
      }
    }
    if (low_entropy) {
      ++out.stats.entropy_dropped;
      continue;
    }
    bool positive = false;
    for (Tag t : *tags) positive |= (t == Tag::Count);
    ++(positive ? out.stats.positive : out.stats.negative);
    out.sentences.push_back({s, std::move(*tags), subject, rel});
  }
  return out;
}

// Builds the relation's distant-supervision training data. Subjects are
// processed in id order, so the output does not depend on `workers`.
inline TrainingSet generate_training_set(const KbStore& store,
                                         const Corpus& corpus,
                                         const Relation& rel,
                                         const NumLexicon& lexicon,
                                         const SeedPolicy& policy = {},
                                         std::size_t workers = 1) {
  TrainingSet result;
  const auto subjects = store.popular_subjects(rel, policy.popularity_top_fraction);
  const Count upper_bound = store.count_percentile(rel, policy.upper_bound_q);
  std::vector<TrainingSet> per_subject(subjects.size());
  parallel_for(subjects.size(), workers, [&](std::size_t i) {
    const auto& subject = subjects[i];
    auto& slot = per_subject[i];
    ++slot.stats.subjects_considered;
    Count kb_count = store.triple_count(subject, rel.property);
    if (kb_count == 0) {
      ++slot.stats.subjects_zero_count;
      return;
    }
    auto doc = corpus.find(subject);
    if (doc == corpus.end()) return;
    ++slot.stats.subjects_with_text;
    auto document = preprocess(doc->second, lexicon, AnnotateOptions::training());
    auto labeled =
        label_document(document, subject, rel, kb_count, upper_bound, policy);
    labeled.stats.subjects_considered = 1;
    labeled.stats.subjects_with_text = 1;
    slot = std::move(labeled);
  });
  for (auto& part : per_subject) {
    result.stats += part.stats;
    for (auto& s : part.sentences) result.sentences.push_back(std::move(s));
  }
  result.stats.upper_bound = upper_bound;
  if (result.sentences.empty())
    result.stats.warnings.push_back("no training sentences for relation " +
                                    rel.key());
  else if (result.stats.positive == 0)
    result.stats.warnings.push_back("no positive seeds for relation " +
                                    rel.key());
  return result;
}

// One sentence read back from a tagged file.
struct TaggedSequence {
  std::vector<std::string> surfaces;
  std::vector<std::string> sequence;  // placeholder or lemma per token
  std::vector<Tag> tags;
};

// CoNLL-style: `surface<TAB>placeholder<TAB>tag` per token, blank line after
// each sentence.
inline void write_conll(std::ostream& out,
                        const std::vector<LabeledSentence>& sentences) {
  for (const auto& ls : sentences) {
    auto seq = to_placeholder_sequence(ls.sentence);
    for (std::size_t i = 0; i < ls.sentence.size(); ++i)
      out << ls.sentence.tokens[i].surface << '\t' << seq[i] << '\t'
          << to_string(ls.tags[i]) << '\n';
    out << '\n';
  }
}

inline std::vector<TaggedSequence> read_conll(std::istream& in) {
  std::vector<TaggedSequence> out;
  TaggedSequence current;
  std::string line;
  std::size_t number = 0;
  auto flush = [&] {
    if (!current.tags.empty()) out.push_back(std::move(current));
    current = TaggedSequence{};
  };
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw FormatError("tagged file line " + std::to_string(number) +
                        ": expected surface<TAB>placeholder<TAB>tag");
    auto tag = tag_from_string(line.substr(t2 + 1));
    if (!tag)
      throw FormatError("tagged file line " + std::to_string(number) +
                        ": unknown tag '" + line.substr(t2 + 1) + "'");
    current.surfaces.push_back(line.substr(0, t1));
    current.sequence.push_back(line.substr(t1 + 1, t2 - t1 - 1));
    current.tags.push_back(*tag);
  }
  flush();
  return out;
}

}  // namespace cqx

#endif  // CQX_DSGEN_HPP_
