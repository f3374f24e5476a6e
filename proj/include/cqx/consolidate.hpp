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

#ifndef CQX_CONSOLIDATE_HPP_
#define CQX_CONSOLIDATE_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqx/crf.hpp"
#include "cqx/kbstore.hpp"
#include "cqx/sentence.hpp"
#include "cqx/tags.hpp"

namespace cqx {

inline constexpr double kDefaultThreshold = 0.1;

// A sentence after inference: Viterbi tags plus per-position marginals.
struct DecodedSentence {
  Sentence sentence;
  std::vector<Tag> tags;
  TagMatrix marginals;
};

inline DecodedSentence decode_sentence(const CrfModel& model, Sentence sentence) {
  auto seq = to_placeholder_sequence(sentence);
  auto x = model.encode(seq);
  auto e = crf::emission_scores(x, model.weights());
  auto tr = crf::transitions(model.weights(), model.num_features());
  DecodedSentence out;
  out.tags = crf::viterbi(e, tr);
  out.marginals = crf::node_marginals(crf::forward_backward(e, tr));
  out.sentence = std::move(sentence);
  return out;
}

struct CqCandidate {
  MentionKind kind = MentionKind::Cardinal;
  Count value = 0;
  double confidence = 0.0;  // marginal of COUNT; max over members if composed
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;  // first member
  bool composed = false;
  std::string surface;
  std::vector<std::size_t> members;  // token indices

  friend bool operator==(const CqCandidate&, const CqCandidate&) = default;
};

struct CountingQuantifier {
  EntityId subject;
  Relation relation;
  Count count = 0;
  double confidence = 0.0;
  MentionKind kind = MentionKind::Cardinal;
  // Winner first, then the other per-type selections in rank order.
  std::vector<CqCandidate> provenance;
};

// COUNT-tagged mention tokens of one sentence, in token order.
inline std::vector<CqCandidate> sentence_candidates(const DecodedSentence& d,
                                                    std::size_t sentence_index) {
  std::vector<CqCandidate> out;
  const auto& toks = d.sentence.tokens;
  for (std::size_t i = 0; i < toks.size() && i < d.tags.size(); ++i) {
    if (d.tags[i] != Tag::Count || !toks[i].mention) continue;
    CqCandidate c;
    c.kind = toks[i].mention->kind;
    c.value = toks[i].mention->value;
    c.confidence = d.marginals.at(i)[tag_index(Tag::Count)];
    c.sentence_index = sentence_index;
    c.token_index = i;
    c.surface = toks[i].surface;
    c.members = {i};
    out.push_back(std::move(c));
  }
  return out;
}

// Merges runs of candidates that have a COMP-tagged token between each
// neighbouring pair. Ordinals never take part.
inline std::vector<CqCandidate> sum_compositional(
    const std::vector<CqCandidate>& candidates, const std::vector<Tag>& tags) {
  std::vector<CqCandidate> out;
  std::vector<CqCandidate> run;
  auto flush = [&] {
    if (run.size() == 1) {
      out.push_back(run.front());
    } else if (run.size() > 1) {
      CqCandidate merged = run.front();
      merged.kind = MentionKind::Cardinal;
      merged.composed = true;
      merged.value = 0;
      merged.confidence = 0.0;
      merged.members.clear();
      merged.surface.clear();
      for (const auto& c : run) {
        merged.value += c.value;
        merged.confidence = std::max(merged.confidence, c.confidence);
        merged.members.insert(merged.members.end(), c.members.begin(),
                              c.members.end());
        if (!merged.surface.empty()) merged.surface += " + ";
        merged.surface += c.surface;
      }
      out.push_back(std::move(merged));
    }
    run.clear();
  };
  auto comp_between = [&](std::size_t a, std::size_t b) {
    for (std::size_t i = a + 1; i < b && i < tags.size(); ++i)
      if (tags[i] == Tag::Comp) return true;
    return false;
  };
  for (const auto& c : candidates) {
    if (c.kind == MentionKind::Ordinal) {
      flush();
      out.push_back(c);
      continue;
    }
    if (!run.empty() && !comp_between(run.back().members.back(), c.token_index))
      flush();
    run.push_back(c);
  }
  flush();
  return out;
}

namespace detail {

// Strict weak "better than" for argmax selection.
inline bool more_confident(const CqCandidate& a, const CqCandidate& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if ((a.value > 0) != (b.value > 0)) return a.value > 0;
  if (a.sentence_index != b.sentence_index)
    return a.sentence_index < b.sentence_index;
  return a.token_index < b.token_index;
}

inline bool higher_ordinal(const CqCandidate& a, const CqCandidate& b) {
  if (a.value != b.value) return a.value > b.value;
  return more_confident(a, b);
}

// Bucket used for selection; zeros compete with cardinals.
inline MentionKind selection_kind(MentionKind k) {
  return k == MentionKind::Zero ? MentionKind::Cardinal : k;
}

}  // namespace detail

// Best candidate per kind. Cardinals (including composed and zero), numterms
// and articles keep their most confident candidate only if it is strictly
// above `threshold`; ordinals keep the highest value regardless.
inline std::map<MentionKind, CqCandidate> select_per_type(
    const std::vector<CqCandidate>& candidates,
    double threshold = kDefaultThreshold) {
  std::map<MentionKind, CqCandidate> best;
  for (const auto& c : candidates) {
    auto kind = detail::selection_kind(c.kind);
    auto it = best.find(kind);
    if (it == best.end()) {
      best.emplace(kind, c);
      continue;
    }
    bool better = kind == MentionKind::Ordinal
                      ? detail::higher_ordinal(c, it->second)
                      : detail::more_confident(c, it->second);
    if (better) it->second = c;
  }
  for (auto it = best.begin(); it != best.end();) {
    if (it->first != MentionKind::Ordinal && !(it->second.confidence > threshold))
      it = best.erase(it);
    else
      ++it;
  }
  return best;
}

inline constexpr MentionKind kRankOrder[] = {
    MentionKind::Cardinal, MentionKind::NumTerm, MentionKind::Ordinal,
    MentionKind::Article};

// Selections in preference order: cardinal, numterm, ordinal, article.
inline std::vector<CqCandidate> rank_types(
    const std::map<MentionKind, CqCandidate>& per_type) {
  std::vector<CqCandidate> out;
  for (MentionKind k : kRankOrder)
    if (auto it = per_type.find(k); it != per_type.end()) out.push_back(it->second);
  return out;
}

inline Count candidate_count(const CqCandidate& c) {
  return c.kind == MentionKind::Article && !c.composed ? 1 : c.value;
}

// Pools candidates over all sentences of one subject's document.
inline std::optional<CountingQuantifier> consolidate(
    const EntityId& subject, const Relation& relation,
    const std::vector<DecodedSentence>& sentences,
    double threshold = kDefaultThreshold) {
  std::vector<CqCandidate> pool;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    auto merged = sum_compositional(sentence_candidates(sentences[s], s),
                                    sentences[s].tags);
    pool.insert(pool.end(), merged.begin(), merged.end());
  }
  auto ranked = rank_types(select_per_type(pool, threshold));
  if (ranked.empty()) return std::nullopt;
  CountingQuantifier cq;
  cq.subject = subject;
  cq.relation = relation;
  cq.count = candidate_count(ranked.front());
  cq.confidence = ranked.front().confidence;
  cq.kind = ranked.front().kind;
  cq.provenance = std::move(ranked);
  return cq;
}

inline nlohmann::ordered_json to_json(const CqCandidate& c) {
  return {{"kind", std::string(to_string(c.kind))},
          {"value", c.value},
          {"confidence", c.confidence},
          {"sentence", c.sentence_index},
          {"token", c.token_index},
          {"composed", c.composed},
          {"surface", c.surface}};
}

inline nlohmann::ordered_json to_json(const CountingQuantifier& cq) {
  nlohmann::ordered_json prov = nlohmann::ordered_json::array();
  for (const auto& c : cq.provenance) prov.push_back(to_json(c));
  return {{"subject", cq.subject},
          {"relation", cq.relation.key()},
          {"count", cq.count},
          {"confidence", cq.confidence},
          {"kind", std::string(to_string(cq.kind))},
          {"provenance", std::move(prov)}};
}

inline void write_jsonl(std::ostream& out,
                        const std::vector<CountingQuantifier>& cqs) {
  for (const auto& cq : cqs) out << to_json(cq).dump() << '\n';
}

}  // namespace cqx

#endif  // CQX_CONSOLIDATE_HPP_
