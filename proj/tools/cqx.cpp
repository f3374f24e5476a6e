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


// Command-line front end: build-training, train, extract, evaluate, enrich,
// plus stats and synth helpers.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "cqx/pipeline.hpp"
#include "cqx/synthetic.hpp"

namespace {

using namespace cqx;

struct Options {
  std::string kb, corpus, relation, lexicon = default_lexicon_dir().string();
  std::string model, templates = "full";
  double threshold = kDefaultThreshold;
  double popularity_top = 1.0, upper_bound_q = 0.99, entropy_min = 0.5;
  double l2_sigma = 1.0;
  int max_iter = 300;
  std::size_t workers = 1;
  bool zero_mode = false;

  std::string out, training, gold, predictions, metrics;
  bool token_level = false;
  double min_precision = 0.5, min_coverage = 0.05;
  SyntheticOptions synth;
};

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw InvalidArgument(std::string("missing required ") + flag);
}

SeedPolicy seed_policy(const Options& o) {
  SeedPolicy p;
  p.popularity_top_fraction = o.popularity_top;
  p.upper_bound_q = o.upper_bound_q;
  p.entropy_threshold = o.entropy_min;
  return p;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
}

int build_training_cmd(const Options& o) {
  require(o.kb, "--kb");
  require(o.corpus, "--corpus");
  require(o.relation, "--relation");
  require(o.out, "--out");
  auto store = KbStore::load(o.kb);
  auto corpus = load_corpus(o.corpus);
  auto lexicon = NumLexicon::load(o.lexicon);
  auto set = build_training(store, corpus, Relation::parse(o.relation), lexicon,
                            seed_policy(o), o.workers);
  write_training_file(o.out, set.sentences);
  for (const auto& w : set.stats.warnings) std::cerr << "cqx: warning: " << w << '\n';
  std::cout << to_json(set.stats).dump(2) << '\n';
  return 0;
}

int train_cmd(const Options& o) {
  require(o.training, "--training");
  require(o.relation, "--relation");
  require(o.out, "--out");
  auto sequences = read_training_file(o.training);
  auto data = to_training_instances(sequences);
  TrainOptions opts;
  opts.templates = template_set(o.templates);
  opts.l2_sigma = o.l2_sigma;
  opts.max_iterations = o.max_iter;
  opts.workers = o.workers;
  auto trained = train(data, Relation::parse(o.relation), opts);
  save_model(trained.model, std::filesystem::path(o.out));
  const auto& r = trained.report;
  std::cout << nlohmann::ordered_json{{"sentences", data.size()},
                                      {"features", r.num_features},
                                      {"iterations", r.iterations},
                                      {"converged", r.converged},
                                      {"status", r.status},
                                      {"objective", r.objective}}
                   .dump(2)
            << '\n';
  return 0;
}

int extract_cmd(const Options& o) {
  require(o.model, "--model");
  require(o.corpus, "--corpus");
  require(o.out, "--out");
  auto model = load_model(std::filesystem::path(o.model));
  auto corpus = load_corpus(o.corpus);
  auto lexicon = NumLexicon::load(o.lexicon);
  auto cqs = extract(model, corpus, lexicon, {o.threshold, o.zero_mode, o.workers});
  write_predictions(o.out, cqs);
  std::cerr << "cqx: " << cqs.size() << " of " << corpus.size()
            << " subjects received a count\n";
  return 0;
}

int evaluate_cmd(const Options& o) {
  require(o.predictions, "--predictions");
  require(o.gold, "--gold");
  auto gold = load_counts(o.gold);
  if (gold.empty()) throw InvalidArgument("gold file has no subjects: " + o.gold);
  auto predicted = load_prediction_counts(o.predictions);
  auto e2e = score_end_to_end(gold, predicted);
  nlohmann::ordered_json j;
  j["end_to_end"] = to_json(e2e);
  Relation rel = o.relation.empty() ? Relation{} : Relation::parse(o.relation);
  if (!o.model.empty() || !o.corpus.empty()) {
    require(o.model, "--model (with --corpus)");
    require(o.corpus, "--corpus (with --model)");
    auto model = load_model(std::filesystem::path(o.model));
    rel = model.relation();
    auto rec = recognition_against_counts(
        model, load_corpus(o.corpus), gold, NumLexicon::load(o.lexicon),
        o.token_level ? Granularity::Token : Granularity::Mention, o.workers);
    j["recognition"] = to_json(rec);
    if (!o.out.empty()) write_table(std::cout, rec);
  }
  if (!rel.property.empty()) j["relation"] = rel.key();
  if (!o.out.empty()) {
    if (rel.label.empty()) rel.label = "-";
    write_table(std::cout, rel, e2e);
  }
  write_json(o.out, j);
  return 0;
}

int enrich_cmd(const Options& o) {
  require(o.kb, "--kb");
  require(o.relation, "--relation");
  require(o.predictions, "--predictions");
  require(o.metrics, "--metrics");
  std::ifstream in(o.metrics);
  if (!in) throw IoError("cannot open metrics file: " + o.metrics);
  EndToEndScore quality;
  try {
    auto m = nlohmann::json::parse(in).at("end_to_end");
    quality.gold_subjects = m.at("gold_subjects").get<std::size_t>();
    quality.predicted = m.at("predicted").get<std::size_t>();
    quality.correct = m.at("correct").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(o.metrics + ": " + e.what());
  }
  auto rel = Relation::parse(o.relation);
  auto store = KbStore::load(o.kb);
  auto report = enrichment_report(store, rel, load_prediction_counts(o.predictions),
                                  quality, {o.min_precision, o.min_coverage});
  if (!report) {
    std::cerr << "cqx: " << rel.key() << " suppressed: precision "
              << quality.precision() << ", coverage " << quality.coverage()
              << " (need > " << o.min_precision << " and > " << o.min_coverage
              << ")\n";
    write_json(o.out, {{"relation", rel.key()},
                       {"suppressed", true},
                       {"precision", quality.precision()},
                       {"coverage", quality.coverage()}});
    return 0;
  }
  if (!o.out.empty()) write_table(std::cout, *report);
  write_json(o.out, to_json(*report));
  return 0;
}

int stats_cmd(const Options& o) {
  require(o.kb, "--kb");
  require(o.relation, "--relation");
  auto rel = Relation::parse(o.relation);
  LoadReport load;
  auto store = KbStore::load(o.kb, &load);
  auto subjects = store.subjects(rel);
  nlohmann::ordered_json j = {{"relation", rel.key()},
                              {"triples", store.size()},
                              {"malformed_lines", load.malformed},
                              {"subjects", subjects.size()}};
  if (store.property_subject_count(rel.property) > 0) {
    j["functionality_degree"] = store.functionality_degree(rel.property);
    j["count_worthy"] = store.is_count_worthy(rel.property);
  }
  try {
    j["upper_bound"] = store.count_percentile(rel, o.upper_bound_q);
  } catch (const InvalidArgument&) {
    j["upper_bound"] = nullptr;
  }
  write_json(o.out, j);
  return 0;
}

int synth_cmd(const Options& o) {
  require(o.out, "--out");
  auto data = generate_synthetic(o.synth);
  write_synthetic(o.out, data);
  std::cout << nlohmann::ordered_json{{"relation", data.relation.key() + ":" +
                                                       data.relation.label},
                                      {"subjects", data.true_counts.size()},
                                      {"held_out", data.gold.size()},
                                      {"non_maximal", data.non_maximal}}
                   .dump(2)
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting quantifier extraction"};
  app.set_config("--config", "", "Read options from an INI/TOML file");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--kb", o.kb, "Triple file (subject<TAB>property<TAB>object)");
  app.add_option("--corpus", o.corpus, "JSON-lines corpus {subject, text}");
  app.add_option("--relation", o.relation, "CLASS:PROPERTY[:LABEL]");
  app.add_option("--lexicon", o.lexicon, "Lexicon directory")->capture_default_str();
  app.add_option("--model", o.model, "Model file");
  app.add_option("--threshold", o.threshold, "Confidence threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--popularity-top", o.popularity_top,
                 "Fraction of most popular subjects used as seeds")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--upper-bound-q", o.upper_bound_q,
                 "Percentile of KB counts used as the plausibility bound")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--entropy-min", o.entropy_min,
                 "Minimum context entropy of repeated numbers")
      ->capture_default_str();
  app.add_option("--templates", o.templates, "Feature templates: full or compact")
      ->check(CLI::IsMember({"full", "compact"}))
      ->capture_default_str();
  app.add_option("--l2-sigma", o.l2_sigma, "Gaussian prior standard deviation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-iter", o.max_iter, "Optimizer iteration limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--workers", o.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--zero-mode", o.zero_mode, "Rewrite and detect zero-count cues");

  auto* build = app.add_subcommand("build-training", "Write distantly supervised training data");
  build->add_option("--out", o.out, "Output CoNLL file");
  auto* train = app.add_subcommand("train", "Train a CRF model");
  train->add_option("--training", o.training, "CoNLL training file");
  train->add_option("--out", o.out, "Output model file");
  auto* extract = app.add_subcommand("extract", "Extract counting quantifiers");
  extract->add_option("--out", o.out, "Output JSON-lines file");
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold counts");
  evaluate->add_option("--predictions", o.predictions, "Predictions JSON-lines file");
  evaluate->add_option("--gold", o.gold, "Gold counts (subject<TAB>count)");
  evaluate->add_flag("--token-level", o.token_level, "Token-level recognition scores");
  evaluate->add_option("--out", o.out, "Metrics JSON file (tables go to stdout)");
  auto* enrich = app.add_subcommand("enrich", "KB enrichment report");
  enrich->add_option("--predictions", o.predictions, "Predictions JSON-lines file");
  enrich->add_option("--metrics", o.metrics, "Metrics JSON from evaluate");
  enrich->add_option("--min-precision", o.min_precision)->capture_default_str();
  enrich->add_option("--min-coverage", o.min_coverage)->capture_default_str();
  enrich->add_option("--out", o.out, "Report JSON file");
  auto* stats = app.add_subcommand("stats", "Relation statistics of a KB");
  stats->add_option("--out", o.out, "Output JSON file");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic benchmark");
  synth->add_option("--out", o.out, "Output directory");
  synth->add_option("--subjects", o.synth.subjects)->capture_default_str();
  synth->add_option("--held-out", o.synth.held_out)->capture_default_str();
  synth->add_option("--non-maximal", o.synth.non_maximal_fraction)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth->add_option("--seed", o.synth.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return build_training_cmd(o);
    if (train->parsed()) return train_cmd(o);
    if (extract->parsed()) return extract_cmd(o);
    if (evaluate->parsed()) return evaluate_cmd(o);
    if (enrich->parsed()) return enrich_cmd(o);
    if (stats->parsed()) return stats_cmd(o);
    if (synth->parsed()) return synth_cmd(o);
  } catch (const std::exception& e) {
    std::cerr << "cqx: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
