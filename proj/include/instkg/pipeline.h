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

#ifndef INSTKG_PIPELINE_H_
#define INSTKG_PIPELINE_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "instkg/extraction.h"
#include "instkg/harvest.h"
#include "instkg/stats.h"

namespace instkg {


struct PipelineConfig {
  HarvestConfig harvest;
  // Instrument sources harvested in the first stage.
  std::vector<SourceName> instrument_sources = {SourceName::kAWI, SourceName::kDataCite};
  // Field map file per instrument source; bundled maps otherwise.
  std::map<SourceName, std::filesystem::path> fieldmaps;
  ExtractorConfig extractor;
  ClassifierConfig classifier;
  std::filesystem::path vocabulary_path;  // empty = bundled
  std::filesystem::path aliases_path;     // empty = bundled
  std::filesystem::path registry_seed_path;
  // Load the registry left by a previous run instead of starting fresh.
  bool reuse_registry = false;
  std::filesystem::path output_dir;
  // Reuse cached stage outputs whose inputs did not change.
  bool resume = false;
  // Resolved configuration, used to key the stage cache.
  Json resolved = Json::object();

  // {"harvest": {...HarvestConfig...}, "instrument_sources": ["AWI"],
  //  "fieldmaps": {"AWI": "..."}, "extractor": {...}, "classifier": {...},
  //  "vocabulary": "...", "aliases": "...", "registry_seed": "...",
  //  "reuse_registry": false, "output_dir": "...", "resume": false}
  // Relative paths resolve against 'base_dir'. Every input path is checked
  // here so a bad config fails before any stage runs.
  static PipelineConfig FromJson(const Json &j, const std::filesystem::path &base_dir);
  static PipelineConfig Load(const std::filesystem::path &path);
};

struct BuildSummary {
  std::filesystem::path store_path;     // graph.nt
  std::filesystem::path registry_path;  // registry.json
  std::filesystem::path exports_dir;    // one payload per paper
  std::filesystem::path stats_path;     // stats.json
  std::filesystem::path manifest_path;  // MANIFEST.json
  StatsReport stats;
  size_t triples = 0;
  std::vector<std::string> stages_run;
  std::vector<std::string> stages_cached;
  std::vector<std::string> warnings;

  Json ToJson() const;
};

const std::vector<std::string> &PipelineStages();

// harvest -> harmonize -> link -> analyze -> extract -> classify -> build ->
// store. Each stage writes stages/<name>.json under output_dir and records
// its checksum in MANIFEST.json. The store, registry, exports and stats are
// written only by the last stage. Throws StageFailure naming the stage.
BuildSummary RunPipeline(const PipelineConfig &config);

}  // namespace instkg

#endif  // INSTKG_PIPELINE_H_
