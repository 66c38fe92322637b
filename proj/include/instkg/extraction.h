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

#ifndef INSTKG_EXTRACTION_H_
#define INSTKG_EXTRACTION_H_

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "instkg/gazetteer.h"
#include "instkg/model.h"
#include "instkg/plugin.h"

namespace instkg {

struct ExtractorConfig {
  enum class Kind { kGazetteer, kExternalProcess };
  Kind kind = Kind::kGazetteer;
  std::filesystem::path gazetteer_path;  // kGazetteer
  std::vector<std::string> command;      // kExternalProcess
  int timeout_ms = 30000;

  // Throws Error unless exactly the fields for 'kind' are set.
  void Validate() const;

  // {"kind": "gazetteer", "gazetteer_path": "..."} or
  // {"kind": "external", "command": [...], "timeout_ms": 30000}
  static ExtractorConfig FromJson(const Json &j);
};

class Extractor {
 public:
  virtual ~Extractor() = default;
  // Output spans are valid for 'text' and never overlap.
  virtual std::vector<EntitySpan> Extract(std::string_view text) = 0;
};

class GazetteerExtractor : public Extractor {
 public:
  explicit GazetteerExtractor(Gazetteer gazetteer) : gazetteer_(std::move(gazetteer)) {}
  std::vector<EntitySpan> Extract(std::string_view text) override;
  const Gazetteer &gazetteer() const { return gazetteer_; }

 private:
  Gazetteer gazetteer_;
};

// Forwards to a plug-in process; spans are validated and overlaps resolved
// at this boundary. The process is started lazily and restarted after a
// timeout or protocol failure. Calls are serialized.
class ProcessExtractor : public Extractor {
 public:
  ProcessExtractor(std::vector<std::string> command, std::chrono::milliseconds timeout);
  std::vector<EntitySpan> Extract(std::string_view text) override;

 private:
  std::vector<std::string> command_;
  std::chrono::milliseconds timeout_;
  std::mutex mu_;
  std::unique_ptr<PluginProcess> process_;
};

std::unique_ptr<Extractor> MakeExtractor(const ExtractorConfig &config);
std::vector<EntitySpan> ExtractEntities(std::string_view text, const ExtractorConfig &config);

// Research-field taxonomy with weighted keywords:
//   {"fields": [{"label": "Oceanography", "keywords": {"ocean": 2.0, ...}}]}
struct FieldScore {
  std::string field;
  double score = 0;

  bool operator==(const FieldScore &) const = default;
};

class FieldClassifier {
 public:
  virtual ~FieldClassifier() = default;
  // Throws EmptyTaxonomy when 'labels' is empty.
  virtual FieldScore Classify(std::string_view title, std::string_view abstract,
                              const std::vector<std::string> &labels) = 0;
};

// Score = sum over keywords of weight x occurrences, matched on word
// boundaries ignoring case. Argmax; ties go to the smallest label.
class KeywordClassifier : public FieldClassifier {
 public:
  static KeywordClassifier FromJson(const Json &j);
  static KeywordClassifier Load(const std::filesystem::path &path);
  static const KeywordClassifier &Default();

  FieldScore Classify(std::string_view title, std::string_view abstract,
                      const std::vector<std::string> &labels) override;
  FieldScore Classify(std::string_view title, std::string_view abstract) const;
  FieldScore ClassifyAmong(std::string_view title, std::string_view abstract,
                           const std::vector<std::string> &labels) const;

  // Per-label scores, for inspection.
  std::map<std::string, double> Scores(std::string_view title, std::string_view abstract) const;
  std::vector<std::string> labels() const;

 private:
  // label -> (keyword word sequence, weight)
  std::map<std::string, std::vector<std::pair<std::vector<std::u32string>, double>>> fields_;
};

class ProcessClassifier : public FieldClassifier {
 public:
  ProcessClassifier(std::vector<std::string> command, std::chrono::milliseconds timeout);
  FieldScore Classify(std::string_view title, std::string_view abstract,
                      const std::vector<std::string> &labels) override;

 private:
  std::vector<std::string> command_;
  std::chrono::milliseconds timeout_;
  std::mutex mu_;
  std::unique_ptr<PluginProcess> process_;
};

struct ClassifierConfig {
  enum class Kind { kKeyword, kExternalProcess };
  Kind kind = Kind::kKeyword;
  std::filesystem::path taxonomy_path;  // kKeyword; empty = bundled default
  std::vector<std::string> command;     // kExternalProcess
  int timeout_ms = 30000;

  static ClassifierConfig FromJson(const Json &j);
};

std::unique_ptr<FieldClassifier> MakeClassifier(const ClassifierConfig &config);

}  // namespace instkg

#endif  // INSTKG_EXTRACTION_H_
