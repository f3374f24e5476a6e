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


#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cqx/evaluate.hpp"

namespace cqx {
namespace {

using enum Tag;

const Relation kChild = Relation::parse("human:child:hasChild");

LabeledSentence gold_sentence(std::vector<Tag> tags) {
  LabeledSentence ls;
  std::vector<std::string> words(tags.size(), "w");
  ls.sentence = make_sentence(words, RuleLemmatizer{});
  ls.tags = std::move(tags);
  return ls;
}

TEST(RecognitionTest, PerfectPrediction) {
  std::vector<LabeledSentence> gold = {gold_sentence({O, Count, Comp, Count})};
  auto s = score_recognition(gold, {gold[0].tags});
  EXPECT_EQ(s.count.precision(), 1.0);
  EXPECT_EQ(s.count.recall(), 1.0);
  EXPECT_EQ(s.count.f1(), 1.0);
  EXPECT_EQ(s.comp.f1(), 1.0);
}

TEST(RecognitionTest, NoPredictions) {
  std::vector<LabeledSentence> gold = {gold_sentence({O, Count, O})};
  auto s = score_recognition(gold, {{O, O, O}});
  EXPECT_EQ(s.count.precision(), 0.0);
  EXPECT_EQ(s.count.recall(), 0.0);
  EXPECT_EQ(s.count.f1(), 0.0);
}

// 4 gold mentions, 3 predicted, 2 of them right.
TEST(RecognitionTest, HandCountedFixture) {
  std::vector<LabeledSentence> gold = {
      gold_sentence({O, Count, O, Count}),
      gold_sentence({Count, O, O}),
      gold_sentence({O, O, Count}),
  };
  std::vector<std::vector<Tag>> pred = {
      {O, Count, O, O},
      {Count, O, O},
      {O, Count, O},
  };
  auto s = score_recognition(gold, pred);
  EXPECT_DOUBLE_EQ(s.count.precision(), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.count.recall(), 0.5);
  EXPECT_DOUBLE_EQ(s.count.f1(), 4.0 / 7.0);
}

TEST(RecognitionTest, MentionVersusTokenGranularity) {
  std::vector<LabeledSentence> gold = {gold_sentence({Count, Count, O})};
  std::vector<std::vector<Tag>> pred = {{Count, O, O}};
  auto m = score_recognition(gold, pred, Granularity::Mention);
  EXPECT_EQ(m.count.true_positives, 0u);
  auto t = score_recognition(gold, pred, Granularity::Token);
  EXPECT_EQ(t.count.true_positives, 1u);
  EXPECT_EQ(t.count.false_negatives, 1u);
}

TEST(RecognitionTest, PerKindBreakdown) {
  const auto lex = NumLexicon::load(CQX_DEFAULT_LEXICON_DIR);
  auto s1 = preprocess("She has twins and three sons.", lex,
                       AnnotateOptions::training());
  auto s2 = preprocess("He was her first husband.", lex,
                       AnnotateOptions::training());
  std::vector<LabeledSentence> gold = {
      {s1[0], {O, O, Count, Comp, Count, O, O}, "Q1", kChild},
      {s2[0], {O, O, O, Count, O, O}, "Q2", kChild}};
  std::vector<std::vector<Tag>> pred = {{O, O, O, Comp, Count, O, O},
                                        {O, O, O, Count, O, O}};
  auto s = score_recognition(gold, pred);
  EXPECT_EQ(s.by_kind.at(MentionKind::NumTerm).recall(), 0.0);
  EXPECT_EQ(s.by_kind.at(MentionKind::Cardinal).f1(), 1.0);
  EXPECT_EQ(s.by_kind.at(MentionKind::Ordinal).f1(), 1.0);
  EXPECT_EQ(s.comp.f1(), 1.0);
}

TEST(RecognitionTest, MisalignedInputIsAnError) {
  std::vector<LabeledSentence> gold = {gold_sentence({O, Count})};
  EXPECT_THROW(score_recognition(gold, {}), InvalidArgument);
  EXPECT_THROW(score_recognition(gold, {{O}}), InvalidArgument);
}

TEST(EndToEndTest, HandComputed) {
  auto s = score_end_to_end({{"a", 7}, {"b", 3}}, {{"a", 5}, {"b", 3}});
  EXPECT_DOUBLE_EQ(s.precision(), 0.5);
  EXPECT_DOUBLE_EQ(s.mae(), 1.0);
  EXPECT_DOUBLE_EQ(s.coverage(), 0.5);
}

TEST(EndToEndTest, ExactAndEmpty) {
  std::map<EntityId, cqx::Count> gold = {{"a", 1}, {"b", 2}, {"c", 0}, {"d", 4}};
  auto s = score_end_to_end(gold, {{"a", 1}, {"c", 0}});
  EXPECT_EQ(s.precision(), 1.0);
  EXPECT_EQ(s.coverage(), 0.5);
  EXPECT_EQ(s.mae(), 0.0);
  auto none = score_end_to_end(gold, {});
  EXPECT_EQ(none.precision(), 0.0);
  EXPECT_EQ(none.coverage(), 0.0);
}

TEST(EndToEndTest, UnjudgeablePredictionsIgnored) {
  auto s = score_end_to_end({{"a", 2}}, {{"a", 2}, {"zz", 9}});
  EXPECT_EQ(s.predicted, 1u);
  EXPECT_EQ(s.precision(), 1.0);
}

TEST(EndToEndPropertyTest, RangesAndMaeZeroIffExact) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> v(0, 5), coin(0, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    std::map<EntityId, cqx::Count> gold, pred;
    bool all_exact = true;
    for (int i = 0; i < 6; ++i) {
      auto id = "s" + std::to_string(i);
      gold[id] = static_cast<cqx::Count>(v(rng));
      if (coin(rng) == 0) continue;
      pred[id] = static_cast<cqx::Count>(v(rng));
      all_exact &= pred[id] == gold[id];
    }
    auto s = score_end_to_end(gold, pred);
    for (double x : {s.precision(), s.coverage()}) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    EXPECT_GE(s.mae(), 0.0);
    EXPECT_EQ(s.mae() == 0.0, all_exact);
  }
}

EndToEndScore passing() {
  EndToEndScore s;
  s.gold_subjects = 10;
  s.predicted = 5;
  s.correct = 4;
  return s;
}

TEST(EnrichmentTest, GarfieldMissingFacts) {
  auto store = KbStore::load(std::string(CQX_TEST_DATA_DIR) + "/kb_garfield.tsv");
  auto r = enrichment_report(store, kChild, {{"Garfield", 7}}, passing());
  ASSERT_TRUE(r);
  EXPECT_EQ(r->existing_facts, 4u);
  EXPECT_EQ(r->missing_facts, 3u);
  EXPECT_EQ(r->zero_assertions, 0u);
}

TEST(EnrichmentTest, NoMissingFactsWhenPredictionIsBelowKb) {
  auto store = KbStore::load(std::string(CQX_TEST_DATA_DIR) + "/kb_garfield.tsv");
  auto base = enrichment_report(store, kChild, {{"Garfield", 7}}, passing());
  auto more = enrichment_report(store, kChild,
                                {{"Garfield", 7}, {"Nobody", 0}, {"Other", 0}},
                                passing());
  EXPECT_EQ(base->missing_facts, more->missing_facts);
  // Nobody already has an explicit no-value row; Other is new.
  EXPECT_EQ(more->zero_assertions, 1u);
}

TEST(EnrichmentTest, TableRatio) {
  KbStore store;
  store.add({"big", std::string(kInstanceOfToken), "human"});
  for (int i = 0; i < 73527; ++i) store.add({"big", "child", "c" + std::to_string(i)});
  auto r = enrichment_report(store, kChild, {{"big", 73527 + 117942}}, passing());
  ASSERT_TRUE(r);
  EXPECT_EQ(r->existing_facts, 73527u);
  EXPECT_EQ(r->missing_facts, 117942u);
  EXPECT_EQ(detail::pct(r->kb_increase()), "160.4");
}

TEST(EnrichmentTest, FilterGatesEmission) {
  auto store = KbStore::load(std::string(CQX_TEST_DATA_DIR) + "/kb_garfield.tsv");
  auto q = passing();
  q.correct = 2;  // precision 0.4
  EXPECT_FALSE(enrichment_report(store, kChild, {{"Garfield", 7}}, q));
  q.predicted = 4;  // precision 0.5: not strictly above
  EXPECT_FALSE(enrichment_report(store, kChild, {{"Garfield", 7}}, q));
  q.predicted = 3;  // 0.667, coverage 0.2
  EXPECT_TRUE(enrichment_report(store, kChild, {{"Garfield", 7}}, q));
  q.gold_subjects = 40;  // coverage 0.05: not strictly above
  EXPECT_FALSE(enrichment_report(store, kChild, {{"Garfield", 7}}, q));
  q.gold_subjects = 39;
  EXPECT_TRUE(enrichment_report(store, kChild, {{"Garfield", 7}}, q));
}

TEST(EvaluateOutputTest, TablesAndJson) {
  std::vector<LabeledSentence> gold = {gold_sentence({O, Count, O})};
  auto s = score_recognition(gold, {{O, Count, O}});
  std::ostringstream out;
  write_table(out, s);
  EXPECT_NE(out.str().find("all (count)  100.0  100.0  100.0        1"),
            std::string::npos)
      << out.str();
  auto j = to_json(s);
  EXPECT_EQ(j["count"]["f1"], 1.0);

  std::ostringstream e2e;
  write_table(e2e, kChild, score_end_to_end({{"a", 7}, {"b", 3}},
                                            {{"a", 5}, {"b", 3}}));
  EXPECT_EQ(e2e.str(),
            "relation     P   Cov   MAE  subjects\n"
            "hasChild  50.0  50.0  1.00         2\n");
}

}  // namespace
}  // namespace cqx
