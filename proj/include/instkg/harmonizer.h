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

#ifndef INSTKG_HARMONIZER_H_
#define INSTKG_HARMONIZER_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "instkg/harvest.h"
#include "instkg/model.h"

namespace instkg {

// One source path -> record field. With 'each' set, 'path' names an array
// and every element contributes the value at 'each' (list targets only).
struct FieldMapping {
  std::string path;  // JSON pointer
  std::string target;
  std::string each;
};

struct FieldMap {
  SourceName source = SourceName::kAWI;
  std::vector<FieldMapping> mappings;
  // When set and the payload has no pid, pid = prefix + Slug(name).
  std::string pid_fallback_prefix;

  // Throws Error on undeclared targets, list/scalar misuse, or when pid or
  // name is left unmapped.
  void Validate() const;

  // {"source": "AWI", "pid_fallback_prefix": "awi:",
  //  "mappings": [{"path": "/title", "target": "name"},
  //               {"path": "/components", "each": "/title", "target": "devices"}]}
  static FieldMap FromJson(const Json &j);
  static FieldMap Load(const std::filesystem::path &path);
  // data/fieldmaps/<source>.json
  static FieldMap Default(SourceName source);
};

// Lowercase ASCII letters and digits, other runs collapsed to '-'.
std::string Slug(std::string_view text);

// Maps a payload; unmapped parts of the payload land in 'auxiliary'.
// Throws HarmonizationFailure (missing required fields), MalformedPayload
// (a mapped value of the wrong JSON type), PreconditionViolation (source
// mismatch).
InstrumentRecord Harmonize(const RawRecord &raw, const FieldMap &map);

// Inverse of Harmonize for canonical payloads: mapped fields written back
// over the auxiliary bag.
Json Unharmonize(const InstrumentRecord &record, const FieldMap &map);

struct ConflictingNames {
  std::string pid;
  std::vector<std::string> names;  // distinct, first-appearance order
};

// Merges records with equal canonical pid: first non-empty scalar wins, list
// fields and sources are unioned. Output keeps first-appearance order.
std::vector<InstrumentRecord> Deduplicate(std::span<const InstrumentRecord> records,
                                          std::vector<ConflictingNames> *warnings = nullptr);

struct DanglingReference {
  std::string src;
  std::string dst;
  LinkKind kind = LinkKind::kInstrumentProducedDataset;

  auto operator<=>(const DanglingReference &) const = default;
};

struct LinkGraph {
  std::map<std::string, InstrumentRecord> instruments;  // canonical pid
  std::map<std::string, DatasetRecord> datasets;        // canonical DOI
  std::map<std::string, ArticleRecord> articles;        // canonical DOI
  std::vector<LinkEdge> edges;                           // sorted, unique
  std::vector<DanglingReference> dangling;               // sorted, unique

  // Problems found by a full scan; empty when referential integrity holds.
  std::vector<std::string> CheckIntegrity() const;
};

// Edges come from DatasetRecord.produced_by (Metadata), linked_dataset_dois
// (Metadata) and ArticleRecord.cites (CitationExpansion). Records sharing an
// id are merged. Edges with a missing endpoint are dropped and reported.
LinkGraph BuildLinkGraph(std::span<const InstrumentRecord> instruments,
                         std::span<const DatasetRecord> datasets,
                         std::span<const ArticleRecord> articles,
                         std::span<const LinkEdge> extra_edges = {});

void to_json(Json &j, const LinkGraph &v);
void from_json(const Json &j, LinkGraph &v);

}  // namespace instkg

#endif  // INSTKG_HARMONIZER_H_
