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

#include <array>
#include <cstdio>
#include <set>

#include "instkg/bio.h"
#include "instkg/error.h"
#include "instkg/io.h"

namespace instkg {
namespace {

constexpr EntityLabel kTableOrder[] = {EntityLabel::kLocation, EntityLabel::kData,
                                       EntityLabel::kMethod, EntityLabel::kProcess,
                                       EntityLabel::kMaterial};

std::string Fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

GoldCorpus ParseConll(std::string_view text) {
  GoldCorpus corpus;
  GoldSentence current;
  size_t line_number = 0;
  size_t sentence_start = 1;
  auto flush = [&] {
    if (current.tokens.empty()) return;
    try {
      BioChunks(current.tags);
    } catch (const InvalidBioSequence &e) {
      throw CorpusFormatError("sentence starting at line " + std::to_string(sentence_start) +
                              ": " + e.what());
    }
    corpus.sentences.push_back(std::move(current));
    current = GoldSentence{};
  };
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    if (current.tokens.empty()) sentence_start = line_number;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || line.find('\t', tab + 1) != std::string_view::npos) {
      throw CorpusFormatError("line " + std::to_string(line_number) +
                              ": expected exactly two tab-separated columns");
    }
    std::string tag(line.substr(tab + 1));
    try {
      ParseBioTag(tag);
    } catch (const InvalidBioSequence &e) {
      throw CorpusFormatError("line " + std::to_string(line_number) + ": " + e.what());
    }
    current.tokens.emplace_back(line.substr(0, tab));
    current.tags.push_back(std::move(tag));
  }
  flush();
  return corpus;
}

GoldCorpus LoadConll(const std::filesystem::path &path) { return ParseConll(ReadFile(path)); }

std::string SerializeConll(const GoldCorpus &corpus) {
  std::string out;
  for (size_t s = 0; s < corpus.sentences.size(); ++s) {
    if (s) out += "\n";
    const auto &sentence = corpus.sentences[s];
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      out += sentence.tokens[i] + "\t" + sentence.tags[i] + "\n";
    }
  }
  return out;
}

std::vector<std::vector<std::string>> TagSequences(const GoldCorpus &corpus) {
  std::vector<std::vector<std::string>> out;
  out.reserve(corpus.sentences.size());
  for (const auto &s : corpus.sentences) out.push_back(s.tags);
  return out;
}

LabelMetrics MetricsFromCounts(size_t tp, size_t fp, size_t fn) {
  LabelMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.support = tp + fn;
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

EvalReport Evaluate(const GoldCorpus &gold,
                    const std::vector<std::vector<std::string>> &predicted) {
  if (gold.sentences.size() != predicted.size()) {
    throw ShapeMismatch("gold has " + std::to_string(gold.sentences.size()) +
                        " sentences, prediction has " + std::to_string(predicted.size()));
  }
  std::map<EntityLabel, std::array<size_t, 3>> counts;  // tp, fp, fn
  for (EntityLabel l : kAllLabels) counts[l] = {0, 0, 0};
  for (size_t s = 0; s < predicted.size(); ++s) {
    const auto &gold_tags = gold.sentences[s].tags;
    if (gold_tags.size() != predicted[s].size()) {
      throw ShapeMismatch("sentence " + std::to_string(s) + ": gold has " +
                          std::to_string(gold_tags.size()) + " tags, prediction has " +
                          std::to_string(predicted[s].size()));
    }
    std::vector<Chunk> g = BioChunks(gold_tags);
    std::vector<Chunk> p = BioChunks(predicted[s]);
    std::set<Chunk> gs(g.begin(), g.end());
    std::set<Chunk> ps(p.begin(), p.end());
    for (const auto &c : ps) ++counts[c.label][gs.count(c) ? 0 : 1];
    for (const auto &c : gs) {
      if (!ps.count(c)) ++counts[c.label][2];
    }
  }
  EvalReport report;
  size_t tp = 0, fp = 0, fn = 0;
  for (const auto &[label, c] : counts) {
    report.per_label[label] = MetricsFromCounts(c[0], c[1], c[2]);
    tp += c[0];
    fp += c[1];
    fn += c[2];
  }
  LabelMetrics micro = MetricsFromCounts(tp, fp, fn);
  report.micro_precision = micro.precision;
  report.micro_recall = micro.recall;
  report.micro_f1 = micro.f1;
  return report;
}

Json ToJson(const EvalReport &report) {
  Json per_label = Json::object();
  for (const auto &[label, m] : report.per_label) {
    per_label[std::string(ToString(label))] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support},
        {"tp", m.tp},               {"fp", m.fp},         {"fn", m.fn}};
  }
  return {{"per_label", per_label},
          {"micro_precision", report.micro_precision},
          {"micro_recall", report.micro_recall},
          {"micro_f1", report.micro_f1}};
}

std::string FormatMetricCells(const LabelMetrics &m) {
  return Fixed2(m.f1) + " | " + Fixed2(m.precision) + " | " + Fixed2(m.recall);
}

std::string RenderTable(const std::vector<std::pair<std::string, EvalReport>> &models) {
  std::string out = "| Model |";
  for (const auto &[name, report] : models) out += " " + name + " | | |";
  out += "\n|---|";
  for (size_t i = 0; i < models.size(); ++i) out += "---|---|---|";
  out += "\n| Class |";
  for (size_t i = 0; i < models.size(); ++i) out += " F1 | Precision | Recall |";
  out += "\n";
  for (EntityLabel label : kTableOrder) {
    out += "| " + std::string(ToString(label)) + " |";
    for (const auto &[name, report] : models) {
      auto it = report.per_label.find(label);
      out += " " + FormatMetricCells(it == report.per_label.end() ? LabelMetrics{} : it->second) +
             " |";
    }
    out += "\n";
  }
  return out;
}

}  // namespace instkg
