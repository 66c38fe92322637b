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

#ifndef INSTKG_STATS_H_
#define INSTKG_STATS_H_

#include <map>
#include <string>

#include "instkg/kg_builder.h"
#include "instkg/triple_store.h"

namespace instkg {

// Entity rows, in report order.
inline constexpr const char *kStatsEntityNames[] = {
    "Instruments",
    "Instruments from Datacite",
    "Instruments from AWI",
    "Datasets produced by Instruments",
    "Articles linked with datasets",
};

// Counts over a built graph. "entities" counts distinct resources, "links"
// counts edges, "statements" counts triples and typed resources.
struct StatsReport {
  std::map<std::string, size_t> entities;
  std::map<std::string, size_t> links;
  std::map<std::string, size_t> statements;

  // {"entities": {...}, "links": {...}, "statements": {...}}
  Json ToJson() const;
  static StatsReport FromJson(const Json &j);
  // Aligned two-column table, entity rows in report order first.
  std::string ToText() const;

  bool operator==(const StatsReport &) const = default;
};

StatsReport ComputeStats(const TripleStore &store, const VocabularyMap &vocab);

}  // namespace instkg

#endif  // INSTKG_STATS_H_
