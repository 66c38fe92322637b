// Copyright 2026 The InstKG Authors.
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

#include "instkg/ner_eval.h"

#include <random>

#include <gtest/gtest.h>

#include "instkg/error.h"
#include "instkg/io.h"
#include "oracles/eval_oracle.h"

namespace instkg {
namespace {

const std::string kDataDir = INSTKG_TEST_DATA_DIR;

GoldCorpus Corpus(const std::vector<std::vector<std::string>> &tags) {
  GoldCorpus c;
  for (const auto &t : tags) {
    GoldSentence s;
    for (size_t i = 0; i < t.size(); ++i) s.tokens.push_back("w" + std::to_string(i));
    s.tags = t;
    c.sentences.push_back(s);
  }
  return c;
}

TEST(Conll, ParseAndSerialize) {
  GoldCorpus c = ParseConll("CTD\tB-Method\nmeasures\tO\n\n# comment\nsalinity\tB-Data\n");
  ASSERT_EQ(c.sentences.size(), 2u);
  EXPECT_EQ(c.sentences[0].tokens, (std::vector<std::string>{"CTD", "measures"}));
  EXPECT_EQ(ParseConll(SerializeConll(c)), c);
}

TEST(Conll, FormatErrors) {
  EXPECT_THROW(ParseConll("CTD B-Method\n"), CorpusFormatError);
  EXPECT_THROW(ParseConll("CTD\tB-Method\tX\n"), CorpusFormatError);
  EXPECT_THROW(ParseConll("CTD\tB-Thing\n"), CorpusFormatError);
  EXPECT_THROW(ParseConll("a\tO\nb\tI-Data\n"), CorpusFormatError);
}

TEST(Evaluate, IdentityIsPerfect) {
  GoldCorpus gold = LoadConll(kDataDir + "/ner_gold.conll");
  EvalReport r = Evaluate(gold, TagSequences(gold));
  for (const auto &[label, m] : r.per_label) {
    EXPECT_DOUBLE_EQ(m.precision, 1.0) << ToString(label);
    EXPECT_DOUBLE_EQ(m.recall, 1.0);
    EXPECT_DOUBLE_EQ(m.f1, 1.0);
  }
  EXPECT_DOUBLE_EQ(r.micro_f1, 1.0);
}

TEST(Evaluate, OneCorrectOneSpurious) {
  GoldCorpus gold = Corpus({{"B-Data", "O", "B-Data", "I-Data"}});
  EvalReport r = Evaluate(gold, {{"B-Data", "B-Data", "O", "O"}});
  const auto &d = r.per_label.at(EntityLabel::kData);
  EXPECT_EQ(d.tp, 1u);
  EXPECT_EQ(d.fp, 1u);
  EXPECT_EQ(d.fn, 1u);
  EXPECT_DOUBLE_EQ(d.precision, 0.5);
  EXPECT_DOUBLE_EQ(d.recall, 0.5);
  EXPECT_DOUBLE_EQ(d.f1, 0.5);
  EXPECT_EQ(d.support, 2u);
}

TEST(Evaluate, EmptyDenominatorsAreZero) {
  EvalReport r = Evaluate(Corpus({{"O", "O"}}), {{"O", "O"}});
  for (const auto &[label, m] : r.per_label) {
    EXPECT_EQ(m.precision, 0.0);
    EXPECT_EQ(m.recall, 0.0);
    EXPECT_EQ(m.f1, 0.0);
  }
  EXPECT_EQ(r.micro_f1, 0.0);
}

TEST(Evaluate, ShapeMismatch) {
  GoldCorpus gold = Corpus({{"O", "B-Data"}});
  EXPECT_THROW(Evaluate(gold, {}), ShapeMismatch);
  EXPECT_THROW(Evaluate(gold, {{"O"}}), ShapeMismatch);
  EXPECT_THROW(Evaluate(gold, {{"O", "I-Data"}}), InvalidBioSequence);
}

TEST(Evaluate, HandCountedCorpus) {
  GoldCorpus gold = LoadConll(kDataDir + "/ner_gold.conll");
  GoldCorpus pred = LoadConll(kDataDir + "/ner_pred.conll");
  ASSERT_EQ(gold.sentences.size(), 20u);
  Json hand = ReadJsonFile(kDataDir + "/ner_hand_counts.json");
  EvalReport r = Evaluate(gold, TagSequences(pred));
  for (const auto &[name, c] : hand["per_label"].items()) {
    const auto &m = r.per_label.at(ParseEntityLabel(name));
    EXPECT_EQ(m.tp, c["tp"].get<size_t>()) << name;
    EXPECT_EQ(m.fp, c["fp"].get<size_t>()) << name;
    EXPECT_EQ(m.fn, c["fn"].get<size_t>()) << name;
  }
  // Hand-computed fractions.
  EXPECT_NEAR(r.per_label.at(EntityLabel::kLocation).precision, 7.0 / 8, 1e-9);
  EXPECT_NEAR(r.per_label.at(EntityLabel::kLocation).recall, 7.0 / 9, 1e-9);
  EXPECT_NEAR(r.per_label.at(EntityLabel::kLocation).f1, 14.0 / 17, 1e-9);
  EXPECT_NEAR(r.per_label.at(EntityLabel::kMethod).f1, 14.0 / 15, 1e-9);
  EXPECT_NEAR(r.per_label.at(EntityLabel::kProcess).f1, 4.0 / 7, 1e-9);
  EXPECT_NEAR(r.micro_precision, 29.0 / 38, 1e-9);
  EXPECT_NEAR(r.micro_recall, 29.0 / 40, 1e-9);
  EXPECT_NEAR(r.micro_f1, 29.0 / 39, 1e-9);
}

TEST(EvaluateProperty, MatchesSetIntersectionOracle) {
  std::mt19937 rng(8);
  const char *labels[] = {"Data", "Method", "Process", "Material", "Location"};
  auto random_tags = [&](size_t n) {
    std::vector<std::string> tags;
    std::string open;
    for (size_t i = 0; i < n; ++i) {
      int r = static_cast<int>(rng() % 4);
      if (r == 0 && !open.empty()) {
        tags.push_back("I-" + open);
      } else if (r == 1) {
        open = labels[rng() % 5];
        tags.push_back("B-" + open);
      } else {
        open.clear();
        tags.push_back("O");
      }
    }
    return tags;
  };
  for (int round = 0; round < 500; ++round) {
    std::vector<std::vector<std::string>> gold_tags, pred_tags;
    size_t sentences = rng() % 6;
    for (size_t s = 0; s < sentences; ++s) {
      size_t n = rng() % 12;
      gold_tags.push_back(random_tags(n));
      pred_tags.push_back(rng() % 3 ? random_tags(n) : gold_tags.back());
    }
    EvalReport r = Evaluate(Corpus(gold_tags), pred_tags);
    auto expected = oracle::SetIntersectionCounts(gold_tags, pred_tags);
    for (const auto &[label, m] : r.per_label) {
      auto it = expected.find(std::string(ToString(label)));
      oracle::Counts c = it == expected.end() ? oracle::Counts{} : it->second;
      ASSERT_EQ(m.tp, c.tp);
      ASSERT_EQ(m.fp, c.fp);
      ASSERT_EQ(m.fn, c.fn);
      ASSERT_GE(m.f1, 0.0);
      ASSERT_LE(m.f1, 1.0);
    }
  }
}

TEST(Report, TableRowFormat) {
  LabelMetrics m;
  m.precision = 0.89;
  m.recall = 0.94;
  m.f1 = 0.92;
  EXPECT_EQ(FormatMetricCells(m), "0.92 | 0.89 | 0.94");
}

TEST(Report, RendersModelColumnGroups) {
  GoldCorpus gold = LoadConll(kDataDir + "/ner_gold.conll");
  EvalReport perfect = Evaluate(gold, TagSequences(gold));
  std::string table = RenderTable({{"Gazetteer", perfect}, {"Plugin", perfect}});
  EXPECT_EQ(table,
            "| Model | Gazetteer | | | Plugin | | |\n"
            "|---|---|---|---|---|---|---|\n"
            "| Class | F1 | Precision | Recall | F1 | Precision | Recall |\n"
            "| Location | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 |\n"
            "| Data | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 |\n"
            "| Method | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 |\n"
            "| Process | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 |\n"
            "| Material | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 | 1.00 |\n");
}

}  // namespace
}  // namespace instkg
