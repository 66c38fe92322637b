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

#include "instkg/extraction.h"

#include <gtest/gtest.h>

#include "instkg/error.h"
#include "instkg/unicode.h"

namespace instkg {
namespace {

using std::chrono::milliseconds;

const std::string kPlugin = INSTKG_FAKE_PLUGIN;
const std::string kGazetteer = std::string(INSTKG_DATA_DIR) + "/gazetteer.json";
const std::string kSentence =
    "From our running example, hydroacoustic measurements of backscatter and water column "
    "studies were analysed in the Gulf of Mexico.";

std::vector<EntitySpan> RunPlugin(const std::string &mode, const std::string &text,
                                  int timeout_ms = 5000) {
  ProcessExtractor extractor({kPlugin, mode, kGazetteer}, milliseconds(timeout_ms));
  return extractor.Extract(text);
}

TEST(ExtractorConfig, Validation) {
  ExtractorConfig c;
  EXPECT_THROW(c.Validate(), Error);
  c.gazetteer_path = kGazetteer;
  EXPECT_NO_THROW(c.Validate());
  c.command = {"x"};
  EXPECT_THROW(c.Validate(), Error);
  auto ext = ExtractorConfig::FromJson(Json::parse(R"({"kind":"external","command":["a","b"]})"));
  EXPECT_EQ(ext.kind, ExtractorConfig::Kind::kExternalProcess);
  EXPECT_EQ(ext.timeout_ms, 30000);
  EXPECT_THROW(ExtractorConfig::FromJson(Json::parse(R"({"kind":"external"})")), Error);
  EXPECT_THROW(ExtractorConfig::FromJson(Json::parse(R"({"kind":"llm"})")), Error);
}

TEST(ExtractEntities, GazetteerDispatchIsIdentity) {
  ExtractorConfig c;
  c.gazetteer_path = kGazetteer;
  EXPECT_EQ(ExtractEntities(kSentence, c), Gazetteer::Load(kGazetteer).Extract(kSentence));
}

TEST(ExtractEntities, RunningExampleWithBundledGazetteer) {
  ExtractorConfig c;
  c.gazetteer_path = kGazetteer;
  auto spans = ExtractEntities(kSentence, c);
  std::vector<std::pair<EntityLabel, std::string>> got;
  for (const auto &s : spans) got.emplace_back(s.label, s.surface);
  EXPECT_EQ(got, (std::vector<std::pair<EntityLabel, std::string>>{
                     {EntityLabel::kProcess, "hydroacoustic measurements"},
                     {EntityLabel::kData, "backscatter"},
                     {EntityLabel::kProcess, "water column studies"},
                     {EntityLabel::kLocation, "Gulf of Mexico"}}));
}

TEST(Plugin, ValidResponsesMatchGazetteer) {
  auto spans = RunPlugin("gazetteer", kSentence);
  auto expected = Gazetteer::Load(kGazetteer).Extract(kSentence);
  ASSERT_EQ(spans.size(), expected.size());
  for (size_t i = 0; i < spans.size(); ++i) {
    EXPECT_EQ(spans[i].start, expected[i].start);
    EXPECT_EQ(spans[i].surface, expected[i].surface);
    EXPECT_DOUBLE_EQ(spans[i].confidence, 0.9);
  }
}

TEST(Plugin, EmptyTextEmptyEntities) { EXPECT_TRUE(RunPlugin("gazetteer", "").empty()); }

TEST(Plugin, UnicodeOffsets) {
  auto spans = RunPlugin("gazetteer", "\xC3\xA9t\xC3\xA9: backscatter");
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].start, 5u);
  EXPECT_EQ(spans[0].surface, "backscatter");
}

TEST(Plugin, OverlapKeepsHighestConfidence) {
  auto spans = RunPlugin("overlap", "0123456789abcdefghij");
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].start, 0u);
  EXPECT_EQ(spans[0].end, 10u);
  EXPECT_EQ(spans[0].label, EntityLabel::kData);
}

TEST(Plugin, OverlapTieGoesLeftmost) {
  auto spans = RunPlugin("tie", "0123456789abcdefghij");
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].start, 0u);
}

TEST(Plugin, InvalidSpansAreProtocolViolations) {
  for (const char *mode : {"out_of_range", "bad_text", "bad_score", "bad_label", "garbage",
                           "wrong_id", "error", "exit"}) {
    EXPECT_THROW(RunPlugin(mode, "some text here"), ProtocolViolation) << mode;
  }
}

TEST(Plugin, ViolationIncludesOffendingLine) {
  try {
    RunPlugin("out_of_range", "abc");
    FAIL();
  } catch (const ProtocolViolation &e) {
    EXPECT_NE(std::string(e.what()).find("\"end\":4"), std::string::npos) << e.what();
  }
}

TEST(Plugin, TimeoutKillsAndRestarts) {
  ProcessExtractor extractor({kPlugin, "slow", kGazetteer}, milliseconds(100));
  EXPECT_THROW(extractor.Extract("backscatter"), ExtractorTimeout);
  EXPECT_THROW(extractor.Extract("backscatter"), ExtractorTimeout);
  ProcessExtractor patient({kPlugin, "slow", kGazetteer}, milliseconds(5000));
  EXPECT_EQ(patient.Extract("backscatter").size(), 1u);
}

TEST(Plugin, HangTimesOut) {
  auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(RunPlugin("hang", "x", 150), ExtractorTimeout);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(Plugin, ResponsesMatchedByIdNotOrder) {
  PluginProcess process({kPlugin, "reverse", kGazetteer}, milliseconds(5000));
  auto responses = process.Exchange({{{"kind", "extract"}, {"text", "backscatter"}},
                                     {{"kind", "extract"}, {"text", "nothing, then Arctic Ocean"}}});
  ASSERT_EQ(responses.size(), 2u);
  EXPECT_EQ(responses[0]["entities"][0]["text"], "backscatter");
  EXPECT_EQ(responses[1]["entities"][0]["text"], "Arctic Ocean");
  EXPECT_LT(responses[0]["id"].get<long>(), responses[1]["id"].get<long>());
}

TEST(Plugin, MissingExecutable) {
  EXPECT_THROW(PluginProcess({"/nonexistent/plugin"}), Error);
}

TEST(Plugin, ParseExtractResponseDirect) {
  std::u32string text = U"CTD measures salinity";
  auto spans = ParseExtractResponse(
      Json::parse(R"({"id":1,"entities":[{"start":13,"end":21,"label":"Data","text":"salinity","score":0.4}]})"),
      text);
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_DOUBLE_EQ(spans[0].confidence, 0.4);
  EXPECT_THROW(ParseExtractResponse(Json::parse(R"({"id":1})"), text), ProtocolViolation);
  EXPECT_THROW(ParseExtractResponse(
                   Json::parse(R"({"id":1,"entities":[{"start":"0","end":3,"label":"Data"}]})"),
                   text),
               ProtocolViolation);
}

TEST(Classifier, RunningExampleTitle) {
  FieldScore f = KeywordClassifier::Default().Classify(
      "Environmental forcing of the Campeche cold-water coral province, southern Gulf of Mexico",
      "");
  EXPECT_EQ(f.field, "Oceanography");
  EXPECT_GT(f.score, 0);
}

TEST(Classifier, EmptyInputTieBreak) {
  FieldScore f = KeywordClassifier::Default().Classify("", "");
  EXPECT_EQ(f.field, "Atmospheric Sciences");
  EXPECT_EQ(f.score, 0);
}

TEST(Classifier, SingleFieldKeywords) {
  FieldScore f = KeywordClassifier::Default().Classify(
      "", "Neutron diffraction of alloy single crystals reveals the lattice microstructure.");
  EXPECT_EQ(f.field, "Materials Science and Engineering");
  EXPECT_GT(f.score, 0);
}

TEST(Classifier, EmptyTaxonomy) {
  auto c = KeywordClassifier::FromJson(Json::parse(R"({"fields":[]})"));
  EXPECT_THROW(c.Classify("ocean", ""), EmptyTaxonomy);
  EXPECT_THROW(c.Classify("ocean", "", std::vector<std::string>{}), EmptyTaxonomy);
}

TEST(Classifier, ArgmaxInvariantUnderPositiveScaling) {
  Json taxonomy = {{"fields",
                    {{{"label", "A"}, {"keywords", {{"ocean", 1.0}, {"sea ice", 2.5}}}},
                     {{"label", "B"}, {"keywords", {{"crystal", 3.0}, {"ocean", 0.5}}}},
                     {{"label", "C"}, {"keywords", {{"wind", 1.7}}}}}}};
  const std::vector<std::pair<std::string, std::string>> docs = {
      {"Sea ice and ocean", "crystal crystal"},
      {"wind over the ocean", "sea  ice"},
      {"", ""},
      {"Crystal ocean", "wind wind wind"}};
  auto base = KeywordClassifier::FromJson(taxonomy);
  for (double factor : {0.001, 0.5, 3.0, 1000.0}) {
    Json scaled = taxonomy;
    for (auto &field : scaled["fields"]) {
      for (auto &[k, w] : field["keywords"].items()) w = w.get<double>() * factor;
    }
    auto c = KeywordClassifier::FromJson(scaled);
    for (const auto &[title, abstract] : docs) {
      EXPECT_EQ(c.Classify(title, abstract).field, base.Classify(title, abstract).field);
    }
  }
}

TEST(Classifier, ExternalPlugin) {
  ClassifierConfig config;
  config.kind = ClassifierConfig::Kind::kExternalProcess;
  config.command = {kPlugin, "gazetteer"};
  auto c = MakeClassifier(config);
  FieldScore f = c->Classify("t", "a", {"Geology", "Oceanography"});
  EXPECT_EQ(f.field, "Oceanography");
  EXPECT_DOUBLE_EQ(f.score, 0.75);
  ClassifierConfig bad = config;
  bad.command = {kPlugin, "bad_label"};
  EXPECT_THROW(MakeClassifier(bad)->Classify("t", "a", {"Geology"}), ProtocolViolation);
}

}  // namespace
}  // namespace instkg
