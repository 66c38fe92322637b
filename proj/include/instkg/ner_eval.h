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

#ifndef INSTKG_NER_EVAL_H_
#define INSTKG_NER_EVAL_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "instkg/model.h"

namespace instkg {

struct GoldSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;

  bool operator==(const GoldSentence &) const = default;
};

struct GoldCorpus {
  std::vector<GoldSentence> sentences;

  bool operator==(const GoldCorpus &) const = default;
};

// token<TAB>tag lines, blank line between sentences. Lines starting with
// "#" are comments. Throws CorpusFormatError; tags are checked for BIO
// validity.
GoldCorpus ParseConll(std::string_view text);
GoldCorpus LoadConll(const std::filesystem::path &path);
std::string SerializeConll(const GoldCorpus &corpus);

// Tag sequences of a corpus, the shape Evaluate expects for predictions.
std::vector<std::vector<std::string>> TagSequences(const GoldCorpus &corpus);

struct LabelMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  size_t support = 0;  // gold spans
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
};

struct EvalReport {
  std::map<EntityLabel, LabelMetrics> per_label;  // every label present
  double micro_precision = 0;
  double micro_recall = 0;
  double micro_f1 = 0;
};

// Exact span match (label and token boundaries). Throws ShapeMismatch when
// sentence or token counts differ, InvalidBioSequence for malformed tags.
EvalReport Evaluate(const GoldCorpus &gold,
                    const std::vector<std::vector<std::string>> &predicted);

// Precision, recall and F1 from raw counts; 0 where undefined.
LabelMetrics MetricsFromCounts(size_t tp, size_t fp, size_t fn);

Json ToJson(const EvalReport &report);

// "0.92 | 0.89 | 0.94" (F1 | Precision | Recall, two decimals).
std::string FormatMetricCells(const LabelMetrics &m);

// Markdown table with one F1/Precision/Recall column group per model and
// rows in Location, Data, Method, Process, Material order.
std::string RenderTable(const std::vector<std::pair<std::string, EvalReport>> &models);

}  // namespace instkg

#endif  // INSTKG_NER_EVAL_H_
