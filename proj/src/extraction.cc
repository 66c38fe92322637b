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

#include <algorithm>

#include "instkg/error.h"
#include "instkg/io.h"
#include "instkg/unicode.h"

namespace instkg {
namespace {

// Lowercased maximal word-character runs.
std::vector<std::u32string> Words(std::string_view text) {
  std::vector<std::u32string> words;
  std::u32string cur;
  for (char32_t c : DecodeUtf8(text)) {
    if (IsWordChar(c)) {
      cur.push_back(FoldCase(c));
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

size_t CountOccurrences(const std::vector<std::u32string> &words,
                        const std::vector<std::u32string> &phrase) {
  if (phrase.empty() || phrase.size() > words.size()) return 0;
  size_t count = 0;
  for (size_t i = 0; i + phrase.size() <= words.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<long>(i))) ++count;
  }
  return count;
}

std::vector<std::string> ParseCommand(const Json &j) {
  std::vector<std::string> out;
  if (!j.is_array()) throw Error("command must be an array of strings");
  for (const auto &a : j) out.push_back(a.get<std::string>());
  return out;
}

}  // namespace

void ExtractorConfig::Validate() const {
  if (timeout_ms <= 0) throw Error("extractor timeout_ms must be positive");
  if (kind == Kind::kGazetteer) {
    if (gazetteer_path.empty()) throw Error("gazetteer extractor needs gazetteer_path");
    if (!command.empty()) throw Error("gazetteer extractor takes no command");
  } else {
    if (command.empty()) throw Error("external extractor needs a command");
    if (!gazetteer_path.empty()) throw Error("external extractor takes no gazetteer_path");
  }
}

ExtractorConfig ExtractorConfig::FromJson(const Json &j) {
  ExtractorConfig c;
  std::string kind = j.value("kind", "gazetteer");
  if (kind == "gazetteer") {
    c.kind = Kind::kGazetteer;
  } else if (kind == "external") {
    c.kind = Kind::kExternalProcess;
  } else {
    throw Error("unknown extractor kind '" + kind + "'");
  }
  if (j.contains("gazetteer_path")) c.gazetteer_path = j["gazetteer_path"].get<std::string>();
  if (j.contains("command")) c.command = ParseCommand(j["command"]);
  c.timeout_ms = j.value("timeout_ms", 30000);
  c.Validate();
  return c;
}

std::vector<EntitySpan> GazetteerExtractor::Extract(std::string_view text) {
  return gazetteer_.Extract(text);
}

ProcessExtractor::ProcessExtractor(std::vector<std::string> command,
                                   std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

std::vector<EntitySpan> ProcessExtractor::Extract(std::string_view text) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!process_ || !process_->running()) {
    process_ = std::make_unique<PluginProcess>(command_, timeout_);
  }
  Json response = process_->Call({{"kind", "extract"}, {"text", std::string(text)}});
  return ResolveOverlaps(ParseExtractResponse(response, DecodeUtf8(text)));
}

std::unique_ptr<Extractor> MakeExtractor(const ExtractorConfig &config) {
  config.Validate();
  if (config.kind == ExtractorConfig::Kind::kGazetteer) {
    return std::make_unique<GazetteerExtractor>(Gazetteer::Load(config.gazetteer_path));
  }
  return std::make_unique<ProcessExtractor>(config.command,
                                            std::chrono::milliseconds(config.timeout_ms));
}

std::vector<EntitySpan> ExtractEntities(std::string_view text, const ExtractorConfig &config) {
  return MakeExtractor(config)->Extract(text);
}

KeywordClassifier KeywordClassifier::FromJson(const Json &j) {
  KeywordClassifier c;
  for (const auto &field : j.at("fields")) {
    std::string label = field.at("label").get<std::string>();
    auto &entries = c.fields_[label];
    const Json keywords = field.value("keywords", Json::object());
    for (const auto &[keyword, weight] : keywords.items()) {
      double w = weight.get<double>();
      if (w < 0) throw Error("keyword weights must be non-negative: " + keyword);
      entries.emplace_back(Words(keyword), w);
    }
  }
  return c;
}

KeywordClassifier KeywordClassifier::Load(const std::filesystem::path &path) {
  return FromJson(ReadJsonFile(path));
}

const KeywordClassifier &KeywordClassifier::Default() {
  static const KeywordClassifier kDefault =
      Load(std::filesystem::path(INSTKG_DATA_DIR) / "research_fields.json");
  return kDefault;
}

std::vector<std::string> KeywordClassifier::labels() const {
  std::vector<std::string> out;
  for (const auto &[label, entries] : fields_) out.push_back(label);
  return out;
}

std::map<std::string, double> KeywordClassifier::Scores(std::string_view title,
                                                        std::string_view abstract) const {
  std::vector<std::u32string> words = Words(title);
  for (auto &w : Words(abstract)) words.push_back(std::move(w));
  std::map<std::string, double> out;
  for (const auto &[label, entries] : fields_) {
    double score = 0;
    for (const auto &[phrase, weight] : entries) {
      score += weight * static_cast<double>(CountOccurrences(words, phrase));
    }
    out[label] = score;
  }
  return out;
}

FieldScore KeywordClassifier::ClassifyAmong(std::string_view title, std::string_view abstract,
                                            const std::vector<std::string> &labels) const {
  if (labels.empty()) throw EmptyTaxonomy("no research fields to choose from");
  std::map<std::string, double> scores = Scores(title, abstract);
  FieldScore best;
  bool first = true;
  for (const auto &label : labels) {
    auto it = scores.find(label);
    double s = it == scores.end() ? 0.0 : it->second;
    if (first || s > best.score || (s == best.score && label < best.field)) {
      best = FieldScore{label, s};
      first = false;
    }
  }
  return best;
}

FieldScore KeywordClassifier::Classify(std::string_view title, std::string_view abstract) const {
  return ClassifyAmong(title, abstract, labels());
}

FieldScore KeywordClassifier::Classify(std::string_view title, std::string_view abstract,
                                       const std::vector<std::string> &labels) {
  return ClassifyAmong(title, abstract, labels);
}

ProcessClassifier::ProcessClassifier(std::vector<std::string> command,
                                     std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

FieldScore ProcessClassifier::Classify(std::string_view title, std::string_view abstract,
                                       const std::vector<std::string> &labels) {
  if (labels.empty()) throw EmptyTaxonomy("no research fields to choose from");
  std::lock_guard<std::mutex> lock(mu_);
  if (!process_ || !process_->running()) {
    process_ = std::make_unique<PluginProcess>(command_, timeout_);
  }
  Json response = process_->Call({{"kind", "classify"},
                                  {"title", std::string(title)},
                                  {"abstract", std::string(abstract)},
                                  {"labels", labels}});
  const std::string line = response.dump();
  if (!response.contains("label") || !response["label"].is_string()) {
    throw ProtocolViolation("classify response without a label: " + line);
  }
  std::string label = response["label"].get<std::string>();
  if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
    throw ProtocolViolation("classify response label not among the offered labels: " + line);
  }
  double score = 0;
  if (response.contains("score")) {
    if (!response["score"].is_number()) throw ProtocolViolation("non-numeric score: " + line);
    score = response["score"].get<double>();
  }
  return FieldScore{label, score};
}

ClassifierConfig ClassifierConfig::FromJson(const Json &j) {
  ClassifierConfig c;
  std::string kind = j.value("kind", "keyword");
  if (kind == "keyword") {
    c.kind = Kind::kKeyword;
  } else if (kind == "external") {
    c.kind = Kind::kExternalProcess;
  } else {
    throw Error("unknown classifier kind '" + kind + "'");
  }
  if (j.contains("taxonomy_path")) c.taxonomy_path = j["taxonomy_path"].get<std::string>();
  if (j.contains("command")) c.command = ParseCommand(j["command"]);
  c.timeout_ms = j.value("timeout_ms", 30000);
  if (c.kind == Kind::kExternalProcess && c.command.empty()) {
    throw Error("external classifier needs a command");
  }
  return c;
}

std::unique_ptr<FieldClassifier> MakeClassifier(const ClassifierConfig &config) {
  if (config.kind == ClassifierConfig::Kind::kExternalProcess) {
    return std::make_unique<ProcessClassifier>(config.command,
                                               std::chrono::milliseconds(config.timeout_ms));
  }
  if (config.taxonomy_path.empty()) {
    return std::make_unique<KeywordClassifier>(KeywordClassifier::Default());
  }
  return std::make_unique<KeywordClassifier>(KeywordClassifier::Load(config.taxonomy_path));
}

}  // namespace instkg
