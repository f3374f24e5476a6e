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

#ifndef CQX_KBSTORE_HPP_
#define CQX_KBSTORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cqx/error.hpp"
#include "cqx/sentence.hpp"

namespace cqx {

using EntityId = std::string;
using PropertyId = std::string;
using ClassId = std::string;

inline constexpr std::string_view kNoValueToken = "__no_value__";
inline constexpr std::string_view kInstanceOfToken = "__instance_of__";

enum class TripleSpecial { None, NoValue };

struct Triple {
  EntityId subject;
  PropertyId predicate;
  std::string object;  // empty when special == NoValue
  TripleSpecial special = TripleSpecial::None;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// A (subject class, property) pair; one extraction model is trained per
// relation.
struct Relation {
  ClassId subject_class;
  PropertyId property;
  std::string label;

  // "class:property" or "class:property:label".
  static Relation parse(std::string_view spec) {
    Relation rel;
    auto first = spec.find(':');
    if (first == std::string_view::npos || first == 0)
      throw InvalidArgument("relation must be CLASS:PROPERTY[:LABEL], got '" +
                            std::string(spec) + "'");
    rel.subject_class = std::string(spec.substr(0, first));
    auto rest = spec.substr(first + 1);
    auto second = rest.find(':');
    rel.property = std::string(rest.substr(0, second));
    if (second != std::string_view::npos)
      rel.label = std::string(rest.substr(second + 1));
    if (rel.property.empty())
      throw InvalidArgument("relation has an empty property: '" +
                            std::string(spec) + "'");
    if (rel.label.empty()) rel.label = rel.subject_class + ":" + rel.property;
    return rel;
  }

  std::string key() const { return subject_class + ":" + property; }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.subject_class == b.subject_class && a.property == b.property;
  }
};

struct LoadReport {
  std::size_t lines = 0;
  std::size_t malformed = 0;
};

// Immutable-after-load triple store with the per-relation statistics used for
// seeding and evaluation.
class KbStore {
 public:
  KbStore() = default;

  // Reads a `subject<TAB>property<TAB>object` file. Objects equal to
  // __no_value__ become explicit-zero rows and __instance_of__ rows also
  // define class membership. Blank lines and '#' comments are skipped.
  static KbStore load(const std::filesystem::path& path,
                      LoadReport* report = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open triple file: " + path.string());
    KbStore store;
    LoadReport local;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      ++local.lines;
      auto t1 = line.find('\t');
      auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos ||
          t1 == 0 || t2 == t1 + 1 || t2 + 1 == line.size()) {
        ++local.malformed;
        continue;
      }
      Triple t;
      t.subject = line.substr(0, t1);
      t.predicate = line.substr(t1 + 1, t2 - t1 - 1);
      t.object = line.substr(t2 + 1);
      if (t.object == kNoValueToken) {
        t.object.clear();
        t.special = TripleSpecial::NoValue;
      }
      store.add(std::move(t));
    }
    if (in.bad()) throw IoError("read failure on " + path.string());
    if (local.lines > 0 && local.malformed * 10 > local.lines)
      throw FormatError(path.string() + ": " + std::to_string(local.malformed) +
                        " of " + std::to_string(local.lines) +
                        " lines are malformed");
    if (report) *report = local;
    return store;
  }

  void add(Triple t) {
    if (!triples_.insert(t).second) return;
    ++popularity_[t.subject];
    auto& by_pred = predicates_[t.predicate];
    ++by_pred.triples;
    by_pred.subjects.insert(t.subject);
    if (t.predicate == kInstanceOfToken && t.special == TripleSpecial::None) {
      membership_[t.subject].insert(t.object);
      class_members_[t.object].insert(t.subject);
    }
    const std::string key = pair_key(t.subject, t.predicate);
    if (t.special == TripleSpecial::NoValue)
      explicit_zero_.insert(key);
    else
      objects_[key].insert(t.object);
  }

  std::size_t size() const { return triples_.size(); }
  const std::set<Triple>& triples() const { return triples_; }

  // Number of distinct objects for (s, p); no-value rows never count.
  Count triple_count(std::string_view subject, std::string_view property) const {
    auto it = objects_.find(pair_key(subject, property));
    return it == objects_.end() ? 0 : it->second.size();
  }

  // Known-zero flag from a no-value row; masked when real objects exist.
  bool has_explicit_zero(std::string_view subject,
                         std::string_view property) const {
    return explicit_zero_.count(pair_key(subject, property)) > 0 &&
           triple_count(subject, property) == 0;
  }

  // Number of stored triples with this subject.
  Count popularity(std::string_view subject) const {
    auto it = popularity_.find(std::string(subject));
    return it == popularity_.end() ? 0 : it->second;
  }

  bool is_instance_of(std::string_view subject, std::string_view cls) const {
    auto it = membership_.find(std::string(subject));
    return it != membership_.end() && it->second.count(std::string(cls)) > 0;
  }

  // Members of the relation's subject class, sorted by id.
  std::vector<EntityId> subjects(const Relation& rel) const {
    auto it = class_members_.find(rel.subject_class);
    if (it == class_members_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }

  // Nearest-rank q-th percentile of the nonzero triple counts of the
  // relation's subjects.
  Count count_percentile(const Relation& rel, double q) const {
    if (!(q >= 0.0 && q <= 1.0))
      throw InvalidArgument("percentile must be in [0,1]");
    std::vector<Count> counts;
    for (const auto& s : subjects(rel)) {
      Count c = triple_count(s, rel.property);
      if (c >= 1) counts.push_back(c);
    }
    if (counts.empty())
      throw InvalidArgument("relation " + rel.key() +
                            " has no subject with a nonzero count");
    std::sort(counts.begin(), counts.end());
    auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(counts.size())));
    rank = std::clamp<std::size_t>(rank, 1, counts.size());
    return counts[rank - 1];
  }

  // #distinct subjects / #triples for the property.
  double functionality_degree(std::string_view property) const {
    auto it = predicates_.find(std::string(property));
    if (it == predicates_.end() || it->second.triples == 0)
      throw InvalidArgument("property " + std::string(property) +
                            " has no triples");
    return static_cast<double>(it->second.subjects.size()) /
           static_cast<double>(it->second.triples);
  }

  std::size_t property_subject_count(std::string_view property) const {
    auto it = predicates_.find(std::string(property));
    return it == predicates_.end() ? 0 : it->second.subjects.size();
  }

  // Multi-valued and widely used: degree below max_degree and at least
  // min_subjects distinct subjects.
  bool is_count_worthy(std::string_view property, double max_degree = 0.98,
                       std::size_t min_subjects = 500) const {
    if (property_subject_count(property) == 0) return false;
    return functionality_degree(property) < max_degree &&
           property_subject_count(property) >= min_subjects;
  }

  // The relation's subjects ranked by popularity (ties by id), truncated to
  // the top ceil(top_fraction * n).
  std::vector<EntityId> popular_subjects(const Relation& rel,
                                         double top_fraction) const {
    if (!(top_fraction > 0.0 && top_fraction <= 1.0))
      throw InvalidArgument("top fraction must be in (0,1]");
    auto subs = subjects(rel);
    std::stable_sort(subs.begin(), subs.end(),
                     [this](const EntityId& a, const EntityId& b) {
                       return popularity(a) > popularity(b);
                     });
    auto keep = static_cast<std::size_t>(
        std::ceil(top_fraction * static_cast<double>(subs.size()) - 1e-9));
    subs.resize(std::min(subs.size(), std::max<std::size_t>(keep, subs.empty() ? 0 : 1)));
    std::sort(subs.begin(), subs.end());
    return subs;
  }

 private:
  struct PredicateStats {
    std::size_t triples = 0;
    std::set<EntityId> subjects;
  };

  static std::string pair_key(std::string_view s, std::string_view p) {
    std::string key(s);
    key += '\t';
    key += p;
    return key;
  }

  std::set<Triple> triples_;
  std::unordered_map<std::string, std::set<std::string>> objects_;
  std::set<std::string> explicit_zero_;
  std::unordered_map<EntityId, Count> popularity_;
  std::unordered_map<EntityId, std::set<ClassId>> membership_;
  std::map<ClassId, std::set<EntityId>> class_members_;
  std::unordered_map<PropertyId, PredicateStats> predicates_;
};

}  // namespace cqx

#endif  // CQX_KBSTORE_HPP_
