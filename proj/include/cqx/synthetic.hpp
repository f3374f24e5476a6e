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

#ifndef CQX_SYNTHETIC_HPP_
#define CQX_SYNTHETIC_HPP_

#include <algorithm>
#include <cstdio>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cqx/corpus.hpp"
#include "cqx/error.hpp"
#include "cqx/kbstore.hpp"

namespace cqx {

// Templated biographies with a known number of children per subject, for
// benchmarking the whole pipeline against exact gold counts.
struct SyntheticOptions {
  std::size_t subjects = 500;
  std::size_t held_out = 100;
  double non_maximal_fraction = 0.2;  // KB lists fewer children than the text
  Count max_count = 8;
  std::uint32_t seed = 2019;
};

struct SyntheticData {
  Relation relation = Relation::parse("human:child:hasChild");
  std::vector<Triple> triples;
  Corpus train_corpus;
  Corpus test_corpus;
  std::map<EntityId, Count> true_counts;  // every subject
  std::map<EntityId, Count> gold;         // held-out subjects only
  std::size_t non_maximal = 0;
};

namespace detail {

inline const std::vector<std::string>& synth_number_words() {
  static const std::vector<std::string> w = {
      "zero",  "one",     "two",      "three",    "four",     "five",
      "six",   "seven",   "eight",    "nine",     "ten",      "eleven",
      "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen",
      "eighteen", "nineteen", "twenty"};
  return w;
}

inline const std::vector<std::string>& synth_ordinal_words() {
  static const std::vector<std::string> w = {
      "zeroth", "first",   "second", "third", "fourth", "fifth",
      "sixth",  "seventh", "eighth", "ninth", "tenth"};
  return w;
}

class SynthWriter {
 public:
  explicit SynthWriter(std::uint32_t seed) : rng_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::uniform_real_distribution<double>()(rng_) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[uniform(0, v.size() - 1)]; }
  std::mt19937& rng() { return rng_; }

  std::string number(Count n) {
    const auto& words = synth_number_words();
    if (n < words.size() && chance(0.75)) return words[n];
    return std::to_string(n);
  }

  // A value in [1, 30] different from n.
  Count distractor(Count n) {
    for (;;) {
      Count d = uniform(1, 30);
      if (d != n) return d;
    }
  }

 private:
  std::mt19937 rng_;
};

struct Person {
  std::string name, subj, poss;  // "Ana Ruiz", "She", "Her"
};

inline std::string lower_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(s[0] - 'A' + 'a');
  return s;
}

inline std::string count_sentence(SynthWriter& w, const Person& p, Count n) {
  std::vector<int> forms = {0, 1, 2};
  if (n >= 2) forms.insert(forms.end(), {3, 3, 5});
  if (n >= 3) forms.push_back(4);
  if (n >= 2 && n <= 4) forms.push_back(6);
  switch (w.pick(forms)) {
    case 0:
      return p.name + " has " + w.number(n) + " children.";
    case 1:
      return p.name + " and " + lower_first(p.poss) + " spouse had " +
             w.number(n) + " children together.";
    case 2:
      return p.subj + " is the parent of " + w.number(n) + " children.";
    case 3: {
      Count a = w.uniform(1, n - 1);
      return p.name + " has " + w.number(a) + " sons and " + w.number(n - a) +
             " daughters.";
    }
    case 4: {
      Count a = w.uniform(1, n - 2);
      Count b = w.uniform(1, n - a - 1);
      return p.subj + " had " + w.number(a) + " sons, " + w.number(b) +
             " daughters and " + w.number(n - a - b) + " adopted children.";
    }
    case 5:
      return p.poss + " " + synth_ordinal_words()[n] +
             " and youngest child was born in " +
             std::to_string(w.uniform(1950, 2015)) + ".";
    default: {
      static const char* terms[] = {"", "", "twins", "triplets", "quadruplets"};
      return p.name + " gave birth to " + terms[n] + " in " +
             std::to_string(w.uniform(1950, 2015)) + ".";
    }
  }
}

inline std::string distractor_sentence(SynthWriter& w, const Person& p, Count n,
                                       int form) {
  static const std::vector<std::string> cities = {
      "Lisbon", "Toronto", "Nairobi", "Osaka", "Denver", "Krakow", "Lima"};
  static const std::vector<std::string> fields = {
      "law", "medicine", "physics", "history", "music", "economics"};
  switch (form) {
    case 0:
      return p.name + " wrote " + w.number(w.distractor(n)) + " books.";
    case 1:
      return p.subj + " served " + w.number(w.distractor(n)) +
             " terms in the state senate.";
    case 2:
      return p.name + " was born in " + w.pick(cities) + " in " +
             std::to_string(w.uniform(1920, 1990)) + ".";
    case 3:
      return p.subj + " won " + w.number(w.distractor(n)) + " awards during " +
             lower_first(p.poss) + " career.";
    case 4:
      return p.subj + " lived in " + w.pick(cities) + " for " +
             w.number(w.distractor(n)) + " years.";
    case 5:
      return p.name + " has " + w.number(w.distractor(n)) + " grandchildren.";
    case 6:
      if (n >= 2)
        return p.poss + " " + synth_ordinal_words()[w.uniform(1, n - 1)] +
               " child was born in " + std::to_string(w.uniform(1950, 2015)) +
               ".";
      [[fallthrough]];
    default:
      return p.subj + " studied " + w.pick(fields) + " in " + w.pick(cities) +
             ".";
  }
}

}  // namespace detail

inline SyntheticData generate_synthetic(const SyntheticOptions& options = {}) {
  if (options.held_out > options.subjects)
    throw InvalidArgument("held-out split larger than the subject count");
  if (options.max_count < 1 || options.max_count > 10)
    throw InvalidArgument("max count must be within 1..10");
  static const std::vector<std::string> first_f = {
      "Ana", "Maria", "Lena", "Grace", "Ines", "Yuki", "Amara", "Sofia",
      "Clara", "Nadia", "Eva", "Rosa"};
  static const std::vector<std::string> first_m = {
      "Tomas", "Omar", "Hugo", "Kenji", "Daniel", "Ivan", "Pablo", "Samuel",
      "Felix", "Arjun", "Leon", "Marco"};
  static const std::vector<std::string> last = {
      "Ruiz", "Okafor", "Novak", "Tanaka", "Berg", "Moreau", "Silva", "Kowalski",
      "Haddad", "Larsen", "Costa", "Mendes", "Fischer", "Ibrahim", "Walsh"};

  detail::SynthWriter w(options.seed);
  SyntheticData data;
  const auto& rel = data.relation;

  std::vector<EntityId> ids;
  for (std::size_t i = 0; i < options.subjects; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "S%04zu", i + 1);
    ids.emplace_back(buf);
    data.true_counts[ids.back()] = w.uniform(1, options.max_count);
  }
  // Every k-th subject is held out, spreading the split over the id range.
  std::vector<bool> held(options.subjects, false);
  if (options.held_out > 0) {
    std::size_t step = options.subjects / options.held_out;
    for (std::size_t k = 0; k < options.held_out; ++k) held[k * step + step - 1] = true;
  }
  // Non-maximal seeds are drawn among subjects with at least two children.
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (data.true_counts[ids[i]] >= 2) eligible.push_back(i);
  std::shuffle(eligible.begin(), eligible.end(), w.rng());
  auto wanted = static_cast<std::size_t>(
      options.non_maximal_fraction * static_cast<double>(options.subjects) + 0.5);
  if (wanted > eligible.size())
    throw InvalidArgument("not enough multi-child subjects for non-maximal seeds");
  std::vector<bool> partial(options.subjects, false);
  for (std::size_t k = 0; k < wanted; ++k) partial[eligible[k]] = true;
  data.non_maximal = wanted;

  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& id = ids[i];
    Count n = data.true_counts[id];
    bool female = w.chance(0.5);
    detail::Person p{(female ? w.pick(first_f) : w.pick(first_m)) + " " + w.pick(last),
                     female ? "She" : "He", female ? "Her" : "His"};
    data.triples.push_back({id, std::string(kInstanceOfToken), rel.subject_class});
    Count kb = partial[i] ? w.uniform(1, n - 1) : n;
    for (Count c = 0; c < kb; ++c)
      data.triples.push_back({id, rel.property, id + "_c" + std::to_string(c + 1)});

    std::vector<std::string> sentences = {detail::count_sentence(w, p, n)};
    std::vector<int> forms = {0, 1, 2, 3, 4, 5, 6, 7};
    std::shuffle(forms.begin(), forms.end(), w.rng());
    std::size_t extra = w.uniform(2, 4);
    for (std::size_t k = 0; k < extra; ++k)
      sentences.push_back(detail::distractor_sentence(w, p, n, forms[k]));
    std::shuffle(sentences.begin(), sentences.end(), w.rng());
    std::string text;
    for (const auto& s : sentences) text += (text.empty() ? "" : " ") + s;

    if (held[i]) {
      data.test_corpus[id] = std::move(text);
      data.gold[id] = n;
    } else {
      data.train_corpus[id] = std::move(text);
    }
  }
  return data;
}

inline void write_kb(const std::filesystem::path& path,
                     const std::vector<Triple>& triples) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write triple file: " + path.string());
  for (const auto& t : triples)
    out << t.subject << '\t' << t.predicate << '\t'
        << (t.special == TripleSpecial::NoValue ? std::string(kNoValueToken)
                                                : t.object)
        << '\n';
}

inline void write_counts(const std::filesystem::path& path,
                         const std::map<EntityId, Count>& counts) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write count file: " + path.string());
  for (const auto& [s, n] : counts) out << s << '\t' << n << '\n';
}

// kb.tsv, train.jsonl, test.jsonl and gold.tsv under `dir`.
inline void write_synthetic(const std::filesystem::path& dir,
                            const SyntheticData& data) {
  std::filesystem::create_directories(dir);
  write_kb(dir / "kb.tsv", data.triples);
  write_corpus(dir / "train.jsonl", data.train_corpus);
  write_corpus(dir / "test.jsonl", data.test_corpus);
  write_counts(dir / "gold.tsv", data.gold);
}

}  // namespace cqx

#endif  // CQX_SYNTHETIC_HPP_
