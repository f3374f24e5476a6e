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

#include "cqx/dsgen.hpp"

namespace cqx {
namespace {

const NumLexicon& lexicon() {
  static const NumLexicon lex = NumLexicon::load(CQX_DEFAULT_LEXICON_DIR);
  return lex;
}

Sentence training_sentence(std::string_view text) {
  auto s = preprocess(text, lexicon(), AnnotateOptions::training());
  EXPECT_EQ(s.size(), 1u);
  return s.front();
}

std::string tag_string(const std::vector<Tag>& tags) {
  std::string out;
  for (Tag t : tags) {
    if (!out.empty()) out += ' ';
    out += to_string(t);
  }
  return out;
}

TEST(LabelSentence, CompositionSumsToKbCount) {
  auto s = training_sentence("three biological and three adopted");
  auto tags = label_sentence(s, 6, 10);
  ASSERT_TRUE(tags);
  EXPECT_EQ(tag_string(*tags), "COUNT O COMP COUNT O");
}

TEST(LabelSentence, MentionAboveKbCountWithinBoundExcludes) {
  auto s = training_sentence("He had five sons");
  EXPECT_FALSE(label_sentence(s, 3, 7));
}

TEST(LabelSentence, MentionAboveBoundIsNegative) {
  auto s = training_sentence("He had twelve sons");
  auto tags = label_sentence(s, 3, 7);
  ASSERT_TRUE(tags);
  EXPECT_EQ(tag_string(*tags), "O O O O");
}

TEST(LabelSentence, JolieSentence) {
  auto s = training_sentence(
      "Jolie brought her twins , one daughter and three adopted children to "
      "the gala .");
  auto tags = label_sentence(s, 6, 8);
  ASSERT_TRUE(tags);
  EXPECT_EQ(tag_string(*tags),
            "O O O COUNT COMP COUNT O COMP COUNT O O O O O O");
}

TEST(LabelSentence, TrumpSonsAndDaughters) {
  auto s = training_sentence("Trump has three sons and two daughters");
  auto tags = label_sentence(s, 5, 8);
  ASSERT_TRUE(tags);
  EXPECT_EQ(tag_string(*tags), "O O COUNT O COMP COUNT O");
}

TEST(LabelSentence, ExactMatchWinsOverComposition) {
  auto s = training_sentence("two and three");
  auto tags = label_sentence(s, 3, 5);
  ASSERT_TRUE(tags);
  EXPECT_EQ(tag_string(*tags), "O O COUNT");
}

TEST(LabelSentence, CompositionNeedsCue) {
  auto s = training_sentence("three biological three adopted");
  auto tags = label_sentence(s, 6, 10);
  ASSERT_TRUE(tags);
  EXPECT_EQ(tag_string(*tags), "O O O O");
}

TEST(LabelSentence, CompositionRunIsAtMostFour) {
  auto four = training_sentence("one , one , one and one");
  EXPECT_EQ(tag_string(*label_sentence(four, 4, 4)),
            "COUNT COMP COUNT COMP COUNT COMP COUNT");
  auto five = training_sentence("one , one , one , one and one");
  EXPECT_EQ(tag_string(*label_sentence(five, 5, 5)), "O O O O O O O O O");
}

TEST(LabelSentence, NumTermMatchesOnDecodedPrefix) {
  auto s = training_sentence("the trilogy ended");
  EXPECT_EQ(tag_string(*label_sentence(s, 3, 5)), "O COUNT O");
  EXPECT_EQ(tag_string(*label_sentence(s, 4, 5)), "O O O");
}

TEST(LabelSentence, SpecialTermSeedsCanBeDisabled) {
  auto s = training_sentence("she had twins");
  SeedPolicy policy;
  EXPECT_EQ(tag_string(*label_sentence(s, 2, 3, policy)), "O O COUNT");
  policy.train_special_terms_as_seeds = false;
  EXPECT_EQ(tag_string(*label_sentence(s, 2, 3, policy)), "O O O");
}

TEST(LabelSentence, OrdinalEqualToCountIsSeed) {
  auto s = training_sentence("his third wife");
  EXPECT_EQ(tag_string(*label_sentence(s, 3, 4)), "O COUNT O");
  EXPECT_EQ(tag_string(*label_sentence(s, 4, 4)), "O O O");
}

TEST(LabelSentence, ArticlesNeverSeed) {
  auto s = preprocess("a son", lexicon(), AnnotateOptions::inference()).front();
  EXPECT_EQ(tag_string(*label_sentence(s, 1, 3)), "O O");
}

// Independent rule table for a single-mention sentence.
enum class Outcome { Count, Negative, Excluded };

Outcome expected_outcome(Count kb, Count ub, Count v) {
  if (v == kb) return Outcome::Count;
  if (v < kb) return Outcome::Negative;
  if (v <= ub) return Outcome::Excluded;
  return Outcome::Negative;
}

TEST(LabelSentence, RuleTableOnRandomTriples) {
  std::mt19937 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    Count kb = 1 + rng() % 20;
    Count ub = rng() % 30;
    Count v = 1 + rng() % 40;
    auto s = training_sentence("they had " + std::to_string(v) + " kids");
    auto tags = label_sentence(s, kb, ub);
    switch (expected_outcome(kb, ub, v)) {
      case Outcome::Count:
        ASSERT_TRUE(tags);
        EXPECT_EQ((*tags)[2], Tag::Count);
        break;
      case Outcome::Negative:
        ASSERT_TRUE(tags);
        EXPECT_EQ((*tags)[2], Tag::O);
        break;
      case Outcome::Excluded:
        EXPECT_FALSE(tags);
        break;
    }
  }
}

TEST(LabelSentence, CompositionSumInvariant) {
  std::mt19937 rng(99);
  const std::vector<std::string> words = {"one", "two", "three", "four",
                                          "five", ",", "and", "sons",
                                          "daughters", "books"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    for (int i = 0; i < 3 + static_cast<int>(rng() % 10); ++i)
      text += words[rng() % words.size()] + " ";
    auto sentences = preprocess(text, lexicon(), AnnotateOptions::training());
    if (sentences.empty()) continue;
    const auto& s = sentences.front();
    Count kb = 1 + rng() % 10;
    auto tags = label_sentence(s, kb, kb + rng() % 4);
    if (!tags) continue;
    ASSERT_EQ(tags->size(), s.size());
    bool comp = false;
    Count sum = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if ((*tags)[i] == Tag::Comp) {
        comp = true;
        EXPECT_TRUE(s.tokens[i].surface == "," || s.tokens[i].surface == "and");
      }
      if ((*tags)[i] == Tag::Count) {
        ASSERT_TRUE(s.tokens[i].mention);
        // Exact matches carry the full count; only composed members are
        // smaller.
        if (s.tokens[i].mention->value < kb) sum += s.tokens[i].mention->value;
      }
    }
    if (comp) {
      EXPECT_EQ(sum, kb) << text;
    }
  }
}

TEST(NumberEntropy, SingleOccurrenceIsZero) {
  auto doc = preprocess("He has three sons.", lexicon(), AnnotateOptions::training());
  EXPECT_DOUBLE_EQ(number_entropy(doc, 3), 0.0);
  EXPECT_EQ(count_occurrences(doc, 3), 1u);
}

TEST(NumberEntropy, FourDistinctContextsIsTwoBits) {
  auto doc = preprocess(
      "He has three sons. She won three awards. They built three houses. "
      "We saw three birds.",
      lexicon(), AnnotateOptions::training());
  EXPECT_DOUBLE_EQ(number_entropy(doc, 3), 2.0);
}

TEST(NumberEntropy, OneRepeatedContextIsZero) {
  auto doc = preprocess(
      "He has three sons. He has three sons. He has three sons. He has three "
      "sons.",
      lexicon(), AnnotateOptions::training());
  EXPECT_DOUBLE_EQ(number_entropy(doc, 3), 0.0);
  EXPECT_EQ(count_occurrences(doc, 3), 4u);
}

TEST(LabelDocument, DropsLowEntropyRepeats) {
  auto doc = preprocess("He has three sons. He has three sons. He left.",
                        lexicon(), AnnotateOptions::training());
  Relation rel{"human", "child", "hasChild"};
  auto out = label_document(doc, "X", rel, 3, 5, SeedPolicy{});
  EXPECT_EQ(out.stats.entropy_dropped, 2u);
  EXPECT_TRUE(out.sentences.empty());
}

KbStore fixture_kb() {
  KbStore kb;
  auto child = [&kb](const std::string& s, int n) {
    kb.add({s, std::string(kInstanceOfToken), "human"});
    for (int i = 0; i < n; ++i) kb.add({s, "child", s + "_c" + std::to_string(i)});
  };
  child("Trump", 5);
  child("Lonely", 0);
  child("Minor", 1);
  kb.add({"Trump", "spouse", "Ivana"});
  kb.add({"Trump", "occupation", "x"});
  return kb;
}

TEST(GenerateTrainingSet, TrumpSentence) {
  Corpus corpus{{"Trump", "Trump has three sons and two daughters."},
                {"Lonely", "Lonely has three cats."}};
  Relation rel{"human", "child", "hasChild"};
  auto set = generate_training_set(fixture_kb(), corpus, rel, lexicon());
  ASSERT_EQ(set.sentences.size(), 1u);
  EXPECT_EQ(set.sentences[0].subject, "Trump");
  EXPECT_EQ(tag_string(set.sentences[0].tags), "O O COUNT O COMP COUNT O O");
  EXPECT_EQ(set.stats.positive, 1u);
  EXPECT_EQ(set.stats.subjects_zero_count, 1u);
}

TEST(GenerateTrainingSet, UnpopularSubjectContributesNothing) {
  Corpus corpus{{"Trump", "Trump has five children."},
                {"Minor", "Minor has one child."}};
  Relation rel{"human", "child", "hasChild"};
  SeedPolicy policy;
  policy.popularity_top_fraction = 0.3;
  auto set = generate_training_set(fixture_kb(), corpus, rel, lexicon(), policy);
  ASSERT_EQ(set.sentences.size(), 1u);
  EXPECT_EQ(set.sentences[0].subject, "Trump");
}

TEST(GenerateTrainingSet, EmptyResultIsWarning) {
  Relation rel{"human", "child", "hasChild"};
  auto set = generate_training_set(fixture_kb(), Corpus{}, rel, lexicon());
  EXPECT_TRUE(set.sentences.empty());
  EXPECT_FALSE(set.stats.warnings.empty());
}

TEST(GenerateTrainingSet, DeterministicAcrossWorkerCounts) {
  KbStore kb;
  Corpus corpus;
  for (int i = 0; i < 60; ++i) {
    std::string s = "E" + std::to_string(100 + i);
    kb.add({s, std::string(kInstanceOfToken), "human"});
    for (int c = 0; c < 1 + i % 4; ++c) kb.add({s, "child", s + std::to_string(c)});
    corpus[s] = s + " has " + std::to_string(1 + i % 5) + " children. " + s +
                " wrote " + std::to_string(i % 7) + " books and two , three plays.";
  }
  Relation rel{"human", "child", "hasChild"};
  auto render = [&](std::size_t workers) {
    std::ostringstream out;
    write_conll(out, generate_training_set(kb, corpus, rel, lexicon(), {}, workers)
                         .sentences);
    return out.str();
  };
  auto one = render(1);
  EXPECT_FALSE(one.empty());
  EXPECT_EQ(one, render(4));
  EXPECT_EQ(one, render(1));
}

TEST(GenerateTrainingSet, ExcludedRangeNeverLabeled) {
  KbStore kb;
  Corpus corpus;
  std::mt19937 rng(3);
  for (int i = 0; i < 80; ++i) {
    std::string s = "S" + std::to_string(i);
    kb.add({s, std::string(kInstanceOfToken), "c"});
    int n = 1 + static_cast<int>(rng() % 5);
    for (int c = 0; c < n; ++c) kb.add({s, "p", s + std::to_string(c)});
    corpus[s] = "It has " + std::to_string(rng() % 9) + " parts and " +
                std::to_string(rng() % 9) + " pieces.";
  }
  Relation rel{"c", "p", ""};
  auto set = generate_training_set(kb, corpus, rel, lexicon());
  Count ub = set.stats.upper_bound;
  for (const auto& ls : set.sentences) {
    Count kbc = kb.triple_count(ls.subject, "p");
    for (const auto& t : ls.sentence.tokens)
      if (t.mention) {
        EXPECT_FALSE(t.mention->value > kbc && t.mention->value <= ub);
      }
  }
  EXPECT_GT(set.stats.excluded, 0u);
}

TEST(Conll, WriteThenRead) {
  auto s = training_sentence("Trump has three sons and two daughters");
  LabeledSentence ls{s, *label_sentence(s, 5, 8), "Trump", {}};
  std::stringstream buf;
  write_conll(buf, {ls, ls});
  auto back = read_conll(buf);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].tags, ls.tags);
  EXPECT_EQ(back[0].sequence, to_placeholder_sequence(s));
  EXPECT_EQ(back[0].surfaces[2], "three");
}

TEST(Conll, RejectsUnknownTag) {
  std::stringstream buf("a\ta\tX\n");
  EXPECT_THROW(read_conll(buf), FormatError);
  std::stringstream missing("a\ta\n");
  EXPECT_THROW(read_conll(missing), FormatError);
}

}  // namespace
}  // namespace cqx
