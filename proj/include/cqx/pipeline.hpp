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

#ifndef CQX_PIPELINE_HPP_
#define CQX_PIPELINE_HPP_

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqx/consolidate.hpp"
#include "cqx/corpus.hpp"
#include "cqx/crf_train.hpp"
#include "cqx/dsgen.hpp"
#include "cqx/evaluate.hpp"
#include "cqx/kbstore.hpp"
#include "cqx/lexicon.hpp"
#include "cqx/mentions.hpp"
#include "cqx/parallel.hpp"

#ifndef CQX_DEFAULT_LEXICON_DIR
#define CQX_DEFAULT_LEXICON_DIR "data/lexicon"
#endif

namespace cqx {

inline std::filesystem::path default_lexicon_dir() {
  return CQX_DEFAULT_LEXICON_DIR;
}

// Distant-supervision data for a relation; refuses relations with no
// subjects in the KB or no subject text in the corpus.
inline TrainingSet build_training(const KbStore& store, const Corpus& corpus,
                                  const Relation& rel, const NumLexicon& lexicon,
                                  const SeedPolicy& policy = {},
                                  std::size_t workers = 1) {
  auto subjects = store.subjects(rel);
  if (subjects.empty())
    throw InvalidArgument("relation " + rel.key() + " has zero subjects in the KB "
                          "(no '" + rel.subject_class + "' instances)");
  bool any_text = false;
  for (const auto& s : subjects) any_text |= corpus.count(s) > 0;
  if (!any_text)
    throw InvalidArgument("corpus contains none of the " +
                          std::to_string(subjects.size()) + " subjects of " +
                          rel.key());
  return generate_training_set(store, corpus, rel, lexicon, policy, workers);
}

inline std::vector<DecodedSentence> decode_document(const CrfModel& model,
                                                    std::string_view text,
                                                    const NumLexicon& lexicon,
                                                    bool zero_mode = false) {
  std::vector<DecodedSentence> out;
  for (auto& s : preprocess(text, lexicon, AnnotateOptions::inference(zero_mode)))
    out.push_back(decode_sentence(model, std::move(s)));
  return out;
}

struct ExtractOptions {
  double threshold = kDefaultThreshold;
  bool zero_mode = false;
  std::size_t workers = 1;
};

// One counting quantifier per subject with a prediction, sorted by subject.
inline std::vector<CountingQuantifier> extract(const CrfModel& model,
                                               const Corpus& corpus,
                                               const NumLexicon& lexicon,
                                               const ExtractOptions& options = {}) {
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0))
    throw InvalidArgument("threshold must be in [0, 1]");
  std::vector<const Corpus::value_type*> docs;
  for (const auto& entry : corpus) docs.push_back(&entry);
  std::vector<std::optional<CountingQuantifier>> slots(docs.size());
  parallel_for(docs.size(), options.workers, [&](std::size_t i) {
    auto decoded =
        decode_document(model, docs[i]->second, lexicon, options.zero_mode);
    slots[i] = consolidate(docs[i]->first, model.relation(), decoded,
                           options.threshold);
  });
  std::vector<CountingQuantifier> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

// Recognition quality on documents with known counts: the reference tags of
// each sentence are the seed labels under a complete KB (count = upper bound
// = gold), compared against the model's Viterbi tags.
inline RecognitionScore recognition_against_counts(
    const CrfModel& model, const Corpus& corpus,
    const std::map<EntityId, Count>& gold, const NumLexicon& lexicon,
    Granularity granularity = Granularity::Mention, std::size_t workers = 1) {
  std::vector<std::pair<EntityId, Count>> items(gold.begin(), gold.end());
  std::vector<std::vector<LabeledSentence>> refs(items.size());
  std::vector<std::vector<std::vector<Tag>>> preds(items.size());
  parallel_for(items.size(), workers, [&](std::size_t i) {
    auto doc = corpus.find(items[i].first);
    if (doc == corpus.end()) return;
    Count n = items[i].second;
    for (auto& d : decode_document(model, doc->second, lexicon)) {
      auto tags = label_sentence(d.sentence, n, n);
      if (!tags) continue;
      refs[i].push_back({std::move(d.sentence), std::move(*tags), items[i].first,
                         model.relation()});
      preds[i].push_back(std::move(d.tags));
    }
  });
  std::vector<LabeledSentence> all_refs;
  std::vector<std::vector<Tag>> all_preds;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (auto& r : refs[i]) all_refs.push_back(std::move(r));
    for (auto& p : preds[i]) all_preds.push_back(std::move(p));
  }
  return score_recognition(all_refs, all_preds, granularity);
}

// `subject<TAB>count` per line.
inline std::map<EntityId, Count> load_counts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open count file: " + path.string());
  std::map<EntityId, Count> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    Count value = 0;
    const char* begin = tab == std::string::npos ? nullptr : line.data() + tab + 1;
    const char* end = line.data() + line.size();
    if (!begin || tab == 0 || begin == end ||
        std::from_chars(begin, end, value).ptr != end)
      throw FormatError(path.string() + ":" + std::to_string(number) +
                        ": expected subject<TAB>count");
    out[line.substr(0, tab)] = value;
  }
  return out;
}

inline std::map<EntityId, Count> load_prediction_counts(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions file: " + path.string());
  std::map<EntityId, Count> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out[j.at("subject").get<std::string>()] = j.at("count").get<Count>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(number) + ": " +
                        e.what());
    }
  }
  return out;
}

inline void write_predictions(const std::filesystem::path& path,
                              const std::vector<CountingQuantifier>& cqs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write predictions file: " + path.string());
  write_jsonl(out, cqs);
}

inline void write_training_file(const std::filesystem::path& path,
                                const std::vector<LabeledSentence>& sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write training file: " + path.string());
  write_conll(out, sentences);
}

inline std::vector<TaggedSequence> read_training_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open training file: " + path.string());
  return read_conll(in);
}

inline nlohmann::ordered_json to_json(const GenerationStats& s) {
  return {{"subjects_considered", s.subjects_considered},
          {"subjects_with_text", s.subjects_with_text},
          {"subjects_zero_count", s.subjects_zero_count},
          {"candidate_sentences", s.candidate_sentences},
          {"positive", s.positive},
          {"negative", s.negative},
          {"excluded", s.excluded},
          {"entropy_dropped", s.entropy_dropped},
          {"upper_bound", s.upper_bound},
          {"warnings", s.warnings}};
}

}  // namespace cqx

#endif  // CQX_PIPELINE_HPP_
