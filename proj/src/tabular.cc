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

#include "instkg/tabular.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>

#include "instkg/error.h"
#include "instkg/io.h"

namespace instkg {
namespace {

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  for (auto &l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return lines;
}

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> cells;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cells.emplace_back(line.substr(start));
      break;
    }
    cells.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cells;
}

// "Name [unit]" -> (Name, unit).
ColumnSpec ParseColumnHeader(std::string_view raw) {
  ColumnSpec col;
  std::string_view s = TrimView(raw);
  if (!s.empty() && s.back() == ']') {
    auto open = s.rfind('[');
    if (open != std::string_view::npos && open > 0) {
      col.short_name = std::string(TrimView(s.substr(0, open)));
      col.unit = std::string(s.substr(open + 1, s.size() - open - 2));
      col.long_name = col.short_name;
      return col;
    }
  }
  col.short_name = std::string(s);
  col.long_name = col.short_name;
  return col;
}

// Parameter(s) entries look like "Salinity (Sal) * PI: ... * METHOD: ...".
// Returns short name -> long name.
std::map<std::string, std::string> ParseParameterHeader(std::string_view value) {
  std::map<std::string, std::string> out;
  for (auto line : SplitLines(value)) {
    std::string_view entry = TrimView(line);
    auto star = entry.find(" * ");
    if (star != std::string_view::npos) entry = entry.substr(0, star);
    entry = TrimView(entry);
    if (entry.empty() || entry.back() != ')') continue;
    auto open = entry.rfind('(');
    if (open == std::string_view::npos) continue;
    std::string shortname(TrimView(entry.substr(open + 1, entry.size() - open - 2)));
    std::string_view longpart = TrimView(entry.substr(0, open));
    // Drop a trailing unit: "Temperature, water [°C]".
    if (!longpart.empty() && longpart.back() == ']') {
      auto b = longpart.rfind('[');
      if (b != std::string_view::npos) longpart = TrimView(longpart.substr(0, b));
    }
    if (!shortname.empty() && !longpart.empty()) out[shortname] = std::string(longpart);
  }
  return out;
}

// Components of an Event(s) value: "label * LATITUDE: 21.5 * LOCATION: X".
std::map<std::string, std::string> EventComponents(std::string_view value) {
  std::map<std::string, std::string> out;
  size_t start = 0;
  while (start <= value.size()) {
    size_t sep = value.find(" * ", start);
    std::string_view part =
        TrimView(value.substr(start, sep == std::string_view::npos ? std::string_view::npos
                                                                   : sep - start));
    auto colon = part.find(": ");
    if (colon != std::string_view::npos) {
      out[Lower(TrimView(part.substr(0, colon)))] = std::string(TrimView(part.substr(colon + 2)));
    }
    if (sep == std::string_view::npos) break;
    start = sep + 3;
  }
  return out;
}

std::optional<double> ParseNumber(std::string_view s) {
  s = TrimView(s);
  if (s.empty()) return std::nullopt;
  std::string tmp(s);
  char *end = nullptr;
  double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size()) return std::nullopt;
  return v;
}

bool IsLeap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int ReadDigits(std::string_view s, size_t pos, size_t count) {
  int v = 0;
  if (pos + count > s.size()) return -1;
  for (size_t i = pos; i < pos + count; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return -1;
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

const std::string *TabularDataset::HeaderValue(std::string_view key) const {
  const std::string wanted = Lower(key);
  for (const auto &[k, v] : header_metadata) {
    if (Lower(k) == wanted) return &v;
  }
  return nullptr;
}

std::string ParameterDescriptor::Display() const {
  return unit.empty() ? name : name + " (" + unit + ")";
}

ParameterAliases ParameterAliases::FromJson(const Json &j) {
  ParameterAliases out;
  if (j.contains("aliases")) {
    for (const auto &[k, v] : j["aliases"].items()) {
      out.exact_[k] = v.get<std::string>();
      out.folded_[Lower(k)] = v.get<std::string>();
    }
  }
  if (j.contains("axis")) {
    const std::pair<const char *, AxisKind> kinds[] = {{"event", AxisKind::kEvent},
                                                       {"datetime", AxisKind::kDateTime},
                                                       {"latitude", AxisKind::kLatitude},
                                                       {"longitude", AxisKind::kLongitude}};
    for (const auto &[name, kind] : kinds) {
      if (!j["axis"].contains(name)) continue;
      for (const auto &v : j["axis"][name]) out.axis_[Lower(v.get<std::string>())] = kind;
    }
  }
  return out;
}

ParameterAliases ParameterAliases::Load(const std::filesystem::path &path) {
  return FromJson(ReadJsonFile(path));
}

const ParameterAliases &ParameterAliases::Default() {
  static const ParameterAliases kDefault =
      Load(std::filesystem::path(INSTKG_DATA_DIR) / "parameter_aliases.json");
  return kDefault;
}

std::optional<std::string> ParameterAliases::Lookup(std::string_view name) const {
  auto it = exact_.find(std::string(name));
  if (it != exact_.end()) return it->second;
  auto f = folded_.find(Lower(name));
  if (f != folded_.end()) return f->second;
  return std::nullopt;
}

AxisKind ParameterAliases::AxisOf(const ColumnSpec &column) const {
  for (const auto *name : {&column.short_name, &column.long_name}) {
    auto it = axis_.find(Lower(*name));
    if (it != axis_.end()) return it->second;
  }
  return AxisKind::kNone;
}

TabularDataset ParseTabular(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string_view> lines = SplitLines(text);
  TabularDataset ds;
  size_t i = 0;
  while (i < lines.size() && TrimView(lines[i]).empty()) ++i;
  if (i == lines.size() || lines[i].substr(0, 2) != "/*") {
    throw MalformedHeader("missing '/*' header block");
  }
  ++i;
  bool closed = false;
  std::set<std::string> seen;
  for (; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.substr(0, 2) == "*/") {
      closed = true;
      ++i;
      break;
    }
    if (TrimView(line).empty()) continue;
    if (line[0] == '\t' || line[0] == ' ') {
      if (ds.header_metadata.empty()) {
        throw MalformedHeader("continuation line before any header key");
      }
      auto &value = ds.header_metadata.back().second;
      value += "\n";
      value += TrimView(line);
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw MalformedHeader("header line without 'Key:' prefix: " + std::string(line));
    }
    std::string key(TrimView(line.substr(0, colon)));
    if (!seen.insert(Lower(key)).second) throw MalformedHeader("duplicate header key " + key);
    ds.header_metadata.emplace_back(key, std::string(TrimView(line.substr(colon + 1))));
  }
  if (!closed) throw MalformedHeader("header block not closed by '*/'");

  while (i < lines.size() && TrimView(lines[i]).empty()) ++i;
  if (i == lines.size()) throw MalformedHeader("missing column header line");
  std::map<std::string, std::string> long_names;
  if (const auto *params = ds.HeaderValue("Parameter(s)")) long_names = ParseParameterHeader(*params);
  for (const auto &cell : SplitTabs(lines[i])) {
    ColumnSpec col = ParseColumnHeader(cell);
    auto it = long_names.find(col.short_name);
    if (it != long_names.end()) col.long_name = it->second;
    ds.columns.push_back(std::move(col));
  }
  ++i;

  // Trailing blank lines are not rows.
  size_t last = lines.size();
  while (last > i && lines[last - 1].empty()) --last;
  for (; i < last; ++i) {
    std::vector<std::string> cells = SplitTabs(lines[i]);
    if (cells.size() != ds.columns.size()) {
      throw RaggedRow(ds.rows.size(), cells.size(), ds.columns.size());
    }
    ds.rows.push_back(std::move(cells));
  }
  return ds;
}

std::string SerializeTabular(const TabularDataset &dataset) {
  std::string out = "/* DATA DESCRIPTION:\n";
  for (const auto &[key, value] : dataset.header_metadata) {
    out += key + ":\t";
    size_t start = 0;
    bool first = true;
    while (true) {
      size_t nl = value.find('\n', start);
      if (!first) out += "\t";
      out += value.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
      out += "\n";
      first = false;
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
  }
  out += "*/\n";
  for (size_t c = 0; c < dataset.columns.size(); ++c) {
    if (c) out += "\t";
    const auto &col = dataset.columns[c];
    out += col.short_name;
    if (!col.unit.empty()) out += " [" + col.unit + "]";
  }
  out += "\n";
  for (const auto &row : dataset.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += "\t";
      out += row[c];
    }
    out += "\n";
  }
  return out;
}

std::optional<std::string> ParseIsoDate(std::string_view text) {
  std::string_view s = TrimView(text);
  if (s.size() < 10) return std::nullopt;
  int y = ReadDigits(s, 0, 4);
  int m = ReadDigits(s, 5, 2);
  int d = ReadDigits(s, 8, 2);
  if (y < 0 || m < 0 || d < 0 || s[4] != '-' || s[7] != '-') return std::nullopt;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12) return std::nullopt;
  int dim = kDays[m - 1] + (m == 2 && IsLeap(y) ? 1 : 0);
  if (d < 1 || d > dim) return std::nullopt;
  if (s.size() > 10) {
    // Datetime: 'T' or ' ' then HH:MM[:SS[.fff]][zone]. Time is discarded
    // but must be well-formed.
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    int hh = ReadDigits(s, 11, 2);
    int mm = ReadDigits(s, 14, 2);
    if (hh < 0 || hh > 24 || mm < 0 || mm > 59 || s.size() < 16 || s[13] != ':') {
      return std::nullopt;
    }
  }
  return std::string(s.substr(0, 10));
}

std::vector<ParameterDescriptor> ExtractParameters(const TabularDataset &dataset,
                                                   const ParameterAliases &aliases) {
  std::vector<ParameterDescriptor> out;
  std::set<std::string> seen;
  for (const auto &col : dataset.columns) {
    if (aliases.AxisOf(col) != AxisKind::kNone) continue;
    std::string source = col.short_name + (col.unit.empty() ? "" : " [" + col.unit + "]");
    if (!seen.insert(source).second) continue;
    ParameterDescriptor p;
    if (auto alias = aliases.Lookup(col.short_name)) {
      p.name = *alias;
    } else if (auto long_alias = aliases.Lookup(col.long_name)) {
      p.name = *long_alias;
    } else {
      p.name = col.long_name.empty() ? col.short_name : col.long_name;
    }
    p.unit = col.unit;
    p.source_column = std::move(source);
    out.push_back(std::move(p));
  }
  return out;
}

TemporalBounds ExtractTemporalBounds(const TabularDataset &dataset,
                                     const ParameterAliases &aliases) {
  const std::string *min_h = dataset.HeaderValue("MinimumDateTime");
  const std::string *max_h = dataset.HeaderValue("MaximumDateTime");
  if (min_h && max_h) {
    auto lo = ParseIsoDate(*min_h);
    auto hi = ParseIsoDate(*max_h);
    if (lo && hi && *lo <= *hi) return TemporalBounds{*lo, *hi};
  }
  std::optional<std::string> lo, hi;
  for (size_t c = 0; c < dataset.columns.size(); ++c) {
    if (aliases.AxisOf(dataset.columns[c]) != AxisKind::kDateTime) continue;
    for (const auto &row : dataset.rows) {
      auto d = ParseIsoDate(row[c]);
      if (!d) continue;
      if (!lo || *d < *lo) lo = d;
      if (!hi || *d > *hi) hi = d;
    }
  }
  if (!lo) throw NoTemporalData("no parseable dates in header or date/time columns");
  return TemporalBounds{*lo, *hi};
}

GeoName ExtractLocation(const TabularDataset &dataset, const ParameterAliases &aliases) {
  GeoName geo;
  std::map<std::string, std::string> event;
  if (const auto *ev = dataset.HeaderValue("Event(s)")) event = EventComponents(*ev);
  if (const auto *loc = dataset.HeaderValue("Location")) {
    geo.name = std::string(TrimView(*loc));
  } else if (auto it = event.find("location"); it != event.end()) {
    geo.name = it->second;
  }

  double lat_sum = 0, lon_sum = 0;
  size_t lat_n = 0, lon_n = 0;
  for (size_t c = 0; c < dataset.columns.size(); ++c) {
    AxisKind kind = aliases.AxisOf(dataset.columns[c]);
    if (kind != AxisKind::kLatitude && kind != AxisKind::kLongitude) continue;
    for (const auto &row : dataset.rows) {
      auto v = ParseNumber(row[c]);
      if (!v) continue;
      if (kind == AxisKind::kLatitude && *v >= -90 && *v <= 90) {
        lat_sum += *v;
        ++lat_n;
      } else if (kind == AxisKind::kLongitude && *v >= -180 && *v <= 180) {
        lon_sum += *v;
        ++lon_n;
      }
    }
  }
  if (lat_n > 0 && lon_n > 0) {
    geo.latitude = lat_sum / static_cast<double>(lat_n);
    geo.longitude = lon_sum / static_cast<double>(lon_n);
  } else {
    std::optional<double> lat, lon;
    if (const auto *h = dataset.HeaderValue("Latitude")) lat = ParseNumber(*h);
    if (const auto *h = dataset.HeaderValue("Longitude")) lon = ParseNumber(*h);
    if (!lat && event.count("latitude")) lat = ParseNumber(event["latitude"]);
    if (!lon && event.count("longitude")) lon = ParseNumber(event["longitude"]);
    if (lat && lon && *lat >= -90 && *lat <= 90 && *lon >= -180 && *lon <= 180) {
      geo.latitude = lat;
      geo.longitude = lon;
    }
  }
  if (geo.name.empty() && !geo.latitude) {
    throw NoLocationData("no Location header, Event(s) location or coordinate columns");
  }
  return geo;
}

ExperimentDetails AnalyzeDataset(const TabularDataset &dataset, const ParameterAliases &aliases,
                                 std::optional<Doi> doi) {
  ExperimentDetails details;
  details.dataset_doi = std::move(doi);
  for (const auto &p : ExtractParameters(dataset, aliases)) details.parameters.push_back(p.name);
  try {
    TemporalBounds bounds = ExtractTemporalBounds(dataset, aliases);
    details.temporal_start = bounds.start;
    details.temporal_end = bounds.end;
  } catch (const NoTemporalData &) {
  }
  try {
    GeoName geo = ExtractLocation(dataset, aliases);
    if (!geo.name.empty()) details.location = geo.name;
  } catch (const NoLocationData &) {
  }
  return details;
}

}  // namespace instkg
