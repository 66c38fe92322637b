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

// Dataset content analysis for PANGAEA-style tab files:
//
//   /* DATA DESCRIPTION:
//   Citation:\tHebbeln, D et al. (2014): Physical oceanography ...
//   Location:\tYucatan Strait
//   MinimumDateTime:\t2012-03-21T10:12
//   */
//   Depth water [m]\tSal\tTemp [°C]\tDensity
//   5\t36.2\t26.1\t1024.1
//
// Header lines are "Key:<TAB>Value"; lines starting with whitespace continue
// the previous value.

#ifndef INSTKG_TABULAR_H_
#define INSTKG_TABULAR_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "instkg/model.h"

namespace instkg {

struct ColumnSpec {
  std::string short_name;  // Column header without the unit suffix.
  std::string long_name;   // From the Parameter(s) header, else short_name.
  std::string unit;

  bool operator==(const ColumnSpec &) const = default;
};

struct TabularDataset {
  std::vector<std::pair<std::string, std::string>> header_metadata;
  std::vector<ColumnSpec> columns;
  std::vector<std::vector<std::string>> rows;

  // Case-insensitive key lookup.
  const std::string *HeaderValue(std::string_view key) const;

  bool operator==(const TabularDataset &) const = default;
};

struct ParameterDescriptor {
  std::string name;
  std::string unit;
  std::string source_column;

  // "name (unit)", or just the name when unitless.
  std::string Display() const;

  bool operator==(const ParameterDescriptor &) const = default;
};

struct TemporalBounds {
  std::string start;  // YYYY-MM-DD
  std::string end;

  bool operator==(const TemporalBounds &) const = default;
};

struct GeoName {
  std::string name;
  std::optional<double> latitude;
  std::optional<double> longitude;
};

enum class AxisKind { kNone, kEvent, kDateTime, kLatitude, kLongitude };

// Alias table and axis-column vocabulary, loaded from a data file:
//   {"aliases": {"Sal": "salinity", ...},
//    "axis": {"event": [...], "datetime": [...], "latitude": [...],
//             "longitude": [...]}}
class ParameterAliases {
 public:
  static ParameterAliases FromJson(const Json &j);
  static ParameterAliases Load(const std::filesystem::path &path);
  // data/parameter_aliases.json from the install data directory.
  static const ParameterAliases &Default();

  // Exact match first, then case-insensitive.
  std::optional<std::string> Lookup(std::string_view name) const;
  AxisKind AxisOf(const ColumnSpec &column) const;

 private:
  std::map<std::string, std::string> exact_;
  std::map<std::string, std::string> folded_;
  std::map<std::string, AxisKind> axis_;
};

// Throws MalformedHeader, RaggedRow (0-based data row index).
TabularDataset ParseTabular(std::string_view text);
std::string SerializeTabular(const TabularDataset &dataset);

// One descriptor per distinct non-axis column. Names go through the alias
// table; unknown names pass through verbatim.
std::vector<ParameterDescriptor> ExtractParameters(const TabularDataset &dataset,
                                                   const ParameterAliases &aliases);

// MinimumDateTime/MaximumDateTime header keys win over a scan of the
// date/time columns. Throws NoTemporalData.
TemporalBounds ExtractTemporalBounds(const TabularDataset &dataset,
                                     const ParameterAliases &aliases);

// Name from the Location header, else the LOCATION component of Event(s).
// Coordinates are the mean of the coordinate columns, else header values.
// Throws NoLocationData.
GeoName ExtractLocation(const TabularDataset &dataset, const ParameterAliases &aliases);

// ISO-8601 date or datetime to "YYYY-MM-DD"; nullopt when unparseable or not
// a calendar date.
std::optional<std::string> ParseIsoDate(std::string_view text);

// Runs the three extractors, leaving fields empty where data is missing.
ExperimentDetails AnalyzeDataset(const TabularDataset &dataset,
                                 const ParameterAliases &aliases,
                                 std::optional<Doi> doi = std::nullopt);

}  // namespace instkg

#endif  // INSTKG_TABULAR_H_
