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

#ifndef CQX_EVALUATE_HPP_
#define CQX_EVALUATE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqx/consolidate.hpp"
#include "cqx/dsgen.hpp"
#include "cqx/error.hpp"
#include "cqx/kbstore.hpp"

namespace cqx {

struct PrfCounts {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;

  double precision() const {
    auto d = true_positives + false_positives;
    return d == 0 ? 0.0 : static_cast<double>(true_positives) / d;
  }
  double recall() const {
    auto d = true_positives + false_negatives;
    return d == 0 ? 0.0 : static_cast<double>(true_positives) / d;
  }
  double f1() const {
    double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
  }

  PrfCounts& operator+=(const PrfCounts& o) {
    true_positives += o.true_positives;
    false_positives += o.false_positives;
    false_negatives += o.false_negatives;
    return *this;
  }
};

enum class Granularity {
  Mention,  // maximal runs of the tag, matched by exact span
  Token,
};

struct RecognitionScore {
  PrfCounts count;  // COUNT tag
  PrfCounts comp;   // COMP tag, scored on its own
  // COUNT scores keyed by the mention kind at the span start; spans on
  // unannotated tokens are only in the totals.
  std::map<MentionKind, PrfCounts> by_kind;
};

namespace detail {

struct Span {
  std::size_t begin, end;
  friend auto operator<=>(const Span&, const Span&) = default;
};

inline std::vector<Span> tag_spans(const std::vector<Tag>& tags, Tag which,
                                   Granularity g) {
  std::vector<Span> out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] != which) continue;
    std::size_t j = i + 1;
    if (g == Granularity::Mention)
      while (j < tags.size() && tags[j] == which) ++j;
    out.push_back({i, j});
    i = j - 1;
  }
  return out;
}

}  // namespace detail

inline RecognitionScore score_recognition(
    const std::vector<LabeledSentence>& gold,
    const std::vector<std::vector<Tag>>& predicted,
    Granularity granularity = Granularity::Mention) {
  if (gold.size() != predicted.size())
    throw InvalidArgument("gold and predicted sentence counts differ (" +
                          std::to_string(gold.size()) + " vs " +
                          std::to_string(predicted.size()) + ")");
  RecognitionScore score;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const auto& g = gold[s];
    const auto& p = predicted[s];
    if (g.tags.size() != p.size())
      throw InvalidArgument("sentence " + std::to_string(s) +
                            ": tag sequences differ in length");
    auto kind_at = [&](std::size_t i) -> std::optional<MentionKind> {
      const auto& tok = g.sentence.tokens.at(i);
      if (!tok.mention) return std::nullopt;
      return tok.mention->kind;
    };
    for (Tag which : {Tag::Count, Tag::Comp}) {
      auto gs = detail::tag_spans(g.tags, which, granularity);
      auto ps = detail::tag_spans(p, which, granularity);
      std::set<detail::Span> gset(gs.begin(), gs.end());
      std::set<detail::Span> pset(ps.begin(), ps.end());
      auto& total = which == Tag::Count ? score.count : score.comp;
      for (const auto& sp : ps) {
        bool hit = gset.count(sp) > 0;
        PrfCounts c;
        (hit ? c.true_positives : c.false_positives) = 1;
        total += c;
        if (which == Tag::Count)
          if (auto k = kind_at(sp.begin)) score.by_kind[*k] += c;
      }
      for (const auto& sp : gs) {
        if (pset.count(sp)) continue;
        PrfCounts c;
        c.false_negatives = 1;
        total += c;
        if (which == Tag::Count)
          if (auto k = kind_at(sp.begin)) score.by_kind[*k] += c;
      }
    }
  }
  return score;
}

struct EndToEndScore {
  std::size_t gold_subjects = 0;
  std::size_t predicted = 0;  // predicted subjects that have a gold count
  std::size_t correct = 0;
  double abs_error_sum = 0.0;

  double precision() const {
    return predicted == 0 ? 0.0 : static_cast<double>(correct) / predicted;
  }
  double coverage() const {
    return gold_subjects == 0 ? 0.0 : static_cast<double>(correct) / gold_subjects;
  }
  // Mean absolute error over judged predictions; 0 when there are none.
  double mae() const { return predicted == 0 ? 0.0 : abs_error_sum / predicted; }
};

// Predictions for subjects without a gold count cannot be judged and are
// ignored.
inline EndToEndScore score_end_to_end(const std::map<EntityId, Count>& gold,
                                      const std::map<EntityId, Count>& predicted) {
  EndToEndScore s;
  s.gold_subjects = gold.size();
  for (const auto& [subject, count] : predicted) {
    auto it = gold.find(subject);
    if (it == gold.end()) continue;
    ++s.predicted;
    if (count == it->second) ++s.correct;
    s.abs_error_sum += count > it->second ? static_cast<double>(count - it->second)
                                          : static_cast<double>(it->second - count);
  }
  return s;
}

inline std::map<EntityId, Count> prediction_counts(
    const std::vector<CountingQuantifier>& cqs) {
  std::map<EntityId, Count> out;
  for (const auto& cq : cqs) out[cq.subject] = cq.count;
  return out;
}

struct EnrichmentFilter {
  double min_precision = 0.5;
  double min_coverage = 0.05;
};

struct EnrichmentReport {
  Relation relation;
  Count existing_facts = 0;
  Count missing_facts = 0;
  // Predicted zero for a subject the KB holds no objects or zero flag for.
  Count zero_assertions = 0;
  double precision = 0.0;
  double coverage = 0.0;

  double kb_increase() const {
    return existing_facts == 0 ? 0.0
                               : static_cast<double>(missing_facts) / existing_facts;
  }
};

inline bool passes(const EndToEndScore& s, const EnrichmentFilter& f) {
  return s.precision() > f.min_precision && s.coverage() > f.min_coverage;
}

// Facts implied by the predictions beyond what the KB stores. Emitted only
// for relations whose held-out quality passes the filter.
inline std::optional<EnrichmentReport> enrichment_report(
    const KbStore& store, const Relation& rel,
    const std::map<EntityId, Count>& predicted, const EndToEndScore& quality,
    const EnrichmentFilter& filter = {}) {
  if (!passes(quality, filter)) return std::nullopt;
  EnrichmentReport r;
  r.relation = rel;
  r.precision = quality.precision();
  r.coverage = quality.coverage();
  for (const auto& s : store.subjects(rel))
    r.existing_facts += store.triple_count(s, rel.property);
  for (const auto& [subject, count] : predicted) {
    Count kb = store.triple_count(subject, rel.property);
    if (count > kb) r.missing_facts += count - kb;
    if (count == 0 && kb == 0 && !store.has_explicit_zero(subject, rel.property))
      ++r.zero_assertions;
  }
  return r;
}

// Serialization.

inline nlohmann::ordered_json to_json(const PrfCounts& c) {
  return {{"precision", c.precision()}, {"recall", c.recall()},
          {"f1", c.f1()},               {"tp", c.true_positives},
          {"fp", c.false_positives},    {"fn", c.false_negatives}};
}

inline nlohmann::ordered_json to_json(const RecognitionScore& s) {
  nlohmann::ordered_json kinds = nlohmann::ordered_json::object();
  for (const auto& [k, c] : s.by_kind) kinds[std::string(to_string(k))] = to_json(c);
  return {{"count", to_json(s.count)}, {"comp", to_json(s.comp)},
          {"by_kind", std::move(kinds)}};
}

inline nlohmann::ordered_json to_json(const EndToEndScore& s) {
  return {{"precision", s.precision()}, {"coverage", s.coverage()},
          {"mae", s.mae()},             {"gold_subjects", s.gold_subjects},
          {"predicted", s.predicted},   {"correct", s.correct}};
}

inline nlohmann::ordered_json to_json(const EnrichmentReport& r) {
  return {{"relation", r.relation.key()},
          {"label", r.relation.label},
          {"precision", r.precision},
          {"coverage", r.coverage},
          {"existing_facts", r.existing_facts},
          {"missing_facts", r.missing_facts},
          {"kb_increase", r.kb_increase()},
          {"zero_assertions", r.zero_assertions}};
}

namespace detail {

inline std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

inline std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Left-aligned first column, right-aligned rest.
inline void write_table(std::ostream& out,
                        const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], r[c].size());
    }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      std::string pad(width[c] - r[c].size(), ' ');
      if (c > 0) line += "  ";
      line += c == 0 ? r[c] + pad : pad + r[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

}  // namespace detail

inline void write_table(std::ostream& out, const RecognitionScore& s) {
  std::vector<std::vector<std::string>> rows = {{"type", "P", "R", "F1", "support"}};
  auto row = [&](std::string name, const PrfCounts& c) {
    rows.push_back({std::move(name), detail::pct(c.precision()),
                    detail::pct(c.recall()), detail::pct(c.f1()),
                    std::to_string(c.true_positives + c.false_negatives)});
  };
  for (const auto& [k, c] : s.by_kind) row(std::string(to_string(k)), c);
  row("all (count)", s.count);
  row("comp", s.comp);
  detail::write_table(out, rows);
}

inline void write_table(std::ostream& out, const Relation& rel,
                        const EndToEndScore& s) {
  detail::write_table(out, {{"relation", "P", "Cov", "MAE", "subjects"},
                            {rel.label, detail::pct(s.precision()),
                             detail::pct(s.coverage()), detail::fixed(s.mae(), 2),
                             std::to_string(s.gold_subjects)}});
}

inline void write_table(std::ostream& out, const EnrichmentReport& r) {
  detail::write_table(
      out, {{"class", "property", "P", "Cov", "#existing", "#missing",
             "KB increase", "#zero"},
            {r.relation.subject_class, r.relation.property,
             detail::pct(r.precision), detail::pct(r.coverage),
             std::to_string(r.existing_facts), std::to_string(r.missing_facts),
             detail::pct(r.kb_increase()) + "%",
             std::to_string(r.zero_assertions)}});
}

}  // namespace cqx

#endif  // CQX_EVALUATE_HPP_
