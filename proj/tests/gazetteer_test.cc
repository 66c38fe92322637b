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

#include "instkg/gazetteer.h"

#include <random>

#include <gtest/gtest.h>

#include "instkg/error.h"
#include "oracles/gazetteer_oracle.h"

namespace instkg {
namespace {

Gazetteer RunningExample() {
  return Gazetteer::FromJson(Json::parse(R"({
    "Process": ["hydroacoustic measurements", "water column studies"],
    "Data": ["backscatter"]})"));
}

TEST(Gazetteer, RunningExampleSentence) {
  auto spans = RunningExample().Extract(
      "The hydroacoustic measurements of backscatter were combined with water column studies.");
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[0].label, EntityLabel::kProcess);
  EXPECT_EQ(spans[0].surface, "hydroacoustic measurements");
  EXPECT_EQ(spans[1].label, EntityLabel::kData);
  EXPECT_EQ(spans[1].surface, "backscatter");
  EXPECT_EQ(spans[1].start, 34u);
  EXPECT_EQ(spans[2].surface, "water column studies");
  for (const auto &s : spans) EXPECT_EQ(s.confidence, 1.0);
}

TEST(Gazetteer, EmptyText) { EXPECT_TRUE(RunningExample().Extract("").empty()); }

TEST(Gazetteer, LongestMatchAndBoundaries) {
  Gazetteer g = RunningExample();
  g.Add(EntityLabel::kMaterial, "water");
  auto spans = g.Extract("water column studies of the water column");
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].surface, "water column studies");
  EXPECT_EQ(spans[0].label, EntityLabel::kProcess);
  EXPECT_EQ(spans[1].surface, "water");
  EXPECT_EQ(spans[1].start, 28u);
  // Inside a longer word there is no match.
  EXPECT_TRUE(g.Extract("underwater backscatters").empty());
}

TEST(Gazetteer, CaseAndWhitespaceInsensitive) {
  auto spans = RunningExample().Extract("HYDROACOUSTIC\n   Measurements");
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].surface, "HYDROACOUSTIC\n   Measurements");
  EXPECT_EQ(spans[0].end, 29u);
}

TEST(Gazetteer, OffsetsCountCodePoints) {
  Gazetteer g;
  g.Add(EntityLabel::kLocation, "Fram Strait");
  auto spans = g.Extract("\xC3\xA9t\xC3\xA9 in Fram Strait");
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].start, 7u);
  EXPECT_EQ(spans[0].end, 18u);
}

TEST(Gazetteer, UnknownLabelRejected) {
  EXPECT_THROW(Gazetteer::FromJson(Json::parse(R"({"Organism":["x"]})")), Error);
}

TEST(GazetteerProperty, MatchesBruteForceOracle) {
  std::mt19937 rng(11);
  const std::vector<std::string> words = {"water", "column", "studies", "ice", "sea", "sea-ice",
                                          "core", "Fram", "strait", "of", "the", "box", "corer"};
  for (int round = 0; round < 500; ++round) {
    Gazetteer g;
    std::map<EntityLabel, std::vector<std::string>> terms;
    int nterms = 1 + static_cast<int>(rng() % 6);
    for (int t = 0; t < nterms; ++t) {
      std::string term = words[rng() % words.size()];
      int extra = static_cast<int>(rng() % 3);
      for (int e = 0; e < extra; ++e) term += " " + words[rng() % words.size()];
      EntityLabel label = kAllLabels[rng() % std::size(kAllLabels)];
      g.Add(label, term);
      terms[label].push_back(term);
    }
    std::string text;
    int nwords = static_cast<int>(rng() % 25);
    const char *seps[] = {" ", "  ", ", ", "\n", "-", ". "};
    for (int w = 0; w < nwords; ++w) {
      if (w) text += seps[rng() % std::size(seps)];
      std::string word = words[rng() % words.size()];
      if (rng() % 4 == 0) word[0] = static_cast<char>(std::toupper(word[0]));
      text += word;
    }
    ASSERT_EQ(g.Extract(text), oracle::BruteForceGazetteer(text, terms)) << text;
  }
}

}  // namespace
}  // namespace instkg
