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

#include "instkg/harmonizer.h"

#include <algorithm>
#include <set>

#include "instkg/error.h"
#include "instkg/io.h"

namespace instkg {
namespace {

using Pointer = Json::json_pointer;

constexpr const char *kScalarTargets[] = {"pid",          "name",           "description",
                                          "manufacturer", "owner",          "landing_page",
                                          "instrument_type"};
constexpr const char *kListTargets[] = {"related_article_pids", "devices"};

bool IsScalarTarget(std::string_view t) {
  return std::find(std::begin(kScalarTargets), std::end(kScalarTargets), t) !=
         std::end(kScalarTargets);
}

bool IsListTarget(std::string_view t) {
  return std::find(std::begin(kListTargets), std::end(kListTargets), t) != std::end(kListTargets);
}

std::string *ScalarField(InstrumentRecord &r, std::string_view target) {
  if (target == "pid") return &r.pid;
  if (target == "name") return &r.name;
  if (target == "description") return &r.description;
  if (target == "manufacturer") return &r.manufacturer;
  if (target == "owner") return &r.owner;
  if (target == "landing_page") return &r.landing_page;
  if (target == "instrument_type") return &r.instrument_type;
  return nullptr;
}

const std::string *ScalarField(const InstrumentRecord &r, std::string_view target) {
  return ScalarField(const_cast<InstrumentRecord &>(r), target);
}

std::vector<std::string> ListField(const InstrumentRecord &r, std::string_view target) {
  if (target == "devices") return r.devices;
  std::vector<std::string> out;
  for (const auto &d : r.related_article_pids) out.push_back(d.value());
  return out;
}

// Erases the value at 'ptr' and any objects left empty above it.
void EraseAt(Json &root, Pointer ptr) {
  while (!ptr.empty()) {
    Pointer parent = ptr.parent_pointer();
    if (!root.contains(parent)) return;
    Json &container = root.at(parent);
    if (!container.is_object()) return;
    container.erase(ptr.back());
    if (!container.empty() || parent.empty()) return;
    ptr = parent;
  }
}

std::string ScalarText(const Json &v, const std::string &where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw MalformedPayload(where + ": expected a scalar, got " + v.dump());
}

void Append(InstrumentRecord &r, std::string_view target, const std::string &value, bool *kept) {
  *kept = true;
  if (target == "devices") {
    r.devices.push_back(value);
    return;
  }
  auto doi = Doi::TryNormalize(value);
  if (!doi) {
    *kept = false;
    return;
  }
  r.related_article_pids.push_back(*doi);
}

InstrumentSource ToInstrumentSource(SourceName s) {
  switch (s) {
    case SourceName::kAWI: return InstrumentSource::kAWI;
    case SourceName::kDataCite: return InstrumentSource::kDataCite;
    default: return InstrumentSource::kOther;
  }
}

template <typename T>
void AppendUnique(std::vector<T> &into, const std::vector<T> &from) {
  for (const auto &v : from) {
    if (std::find(into.begin(), into.end(), v) == into.end()) into.push_back(v);
  }
}

}  // namespace

std::string Slug(std::string_view text) {
  std::string out;
  bool dash = false;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      if (dash && !out.empty()) out.push_back('-');
      out.push_back(static_cast<char>(std::tolower(c)));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out;
}

void FieldMap::Validate() const {
  bool pid = !pid_fallback_prefix.empty(), name = false;
  for (const auto &m : mappings) {
    if (m.path.empty() || m.path[0] != '/') {
      throw Error("field map path must be a JSON pointer: '" + m.path + "'");
    }
    if (!m.each.empty() && m.each[0] != '/') {
      throw Error("field map 'each' must be a JSON pointer: '" + m.each + "'");
    }
    if (IsScalarTarget(m.target)) {
      if (!m.each.empty()) throw Error("scalar target '" + m.target + "' cannot use 'each'");
    } else if (!IsListTarget(m.target)) {
      throw Error("field map target '" + m.target + "' is not an instrument field");
    }
    pid = pid || m.target == "pid";
    name = name || m.target == "name";
  }
  if (!pid || !name) throw Error("field map must map pid and name");
}

FieldMap FieldMap::FromJson(const Json &j) {
  FieldMap map;
  map.source = ParseSourceName(j.at("source").get<std::string>());
  map.pid_fallback_prefix = j.value("pid_fallback_prefix", std::string());
  for (const auto &m : j.at("mappings")) {
    map.mappings.push_back(FieldMapping{m.at("path").get<std::string>(),
                                        m.at("target").get<std::string>(),
                                        m.value("each", std::string())});
  }
  map.Validate();
  return map;
}

FieldMap FieldMap::Load(const std::filesystem::path &path) {
  return FromJson(ReadJsonFile(path));
}

FieldMap FieldMap::Default(SourceName source) {
  std::string name(FixtureDir(source));
  return Load(std::filesystem::path(INSTKG_DATA_DIR) / "fieldmaps" / (name + ".json"));
}

InstrumentRecord Harmonize(const RawRecord &raw, const FieldMap &map) {
  if (raw.source != map.source) {
    throw PreconditionViolation("record from " + std::string(ToString(raw.source)) +
                                " given a field map for " + std::string(ToString(map.source)));
  }
  const std::string where(ToString(raw.source));
  if (!raw.payload.is_object()) throw MalformedPayload(where + ": payload is not an object");

  InstrumentRecord r;
  r.source = ToInstrumentSource(raw.source);
  Json aux = raw.payload;
  std::set<std::string> filled;

  for (const auto &m : map.mappings) {
    const Pointer ptr(m.path);
    if (!raw.payload.contains(ptr)) continue;
    const Json &value = raw.payload.at(ptr);
    if (value.is_null()) continue;

    if (IsScalarTarget(m.target)) {
      std::string text = ScalarText(value, where + " " + m.path);
      if (filled.count(m.target)) continue;
      *ScalarField(r, m.target) = std::move(text);
      filled.insert(m.target);
      EraseAt(aux, ptr);
      continue;
    }

    if (m.each.empty()) {
      if (value.is_string()) {
        bool kept;
        Append(r, m.target, value.get<std::string>(), &kept);
        if (kept) EraseAt(aux, ptr);
        continue;
      }
      if (!value.is_array()) throw MalformedPayload(where + " " + m.path + ": expected a list");
      bool all_kept = true;
      for (const auto &item : value) {
        bool kept;
        Append(r, m.target, ScalarText(item, where + " " + m.path), &kept);
        all_kept = all_kept && kept;
      }
      if (all_kept) EraseAt(aux, ptr);
      continue;
    }

    if (!value.is_array()) throw MalformedPayload(where + " " + m.path + ": expected an array");
    const Pointer sub(m.each);
    Json *aux_items = aux.contains(ptr) ? &aux.at(ptr) : nullptr;
    for (size_t i = 0; i < value.size(); ++i) {
      const Json &item = value[i];
      if (!item.is_object()) {
        throw MalformedPayload(where + " " + m.path + ": array element is not an object");
      }
      if (!item.contains(sub) || item.at(sub).is_null()) continue;
      bool kept;
      Append(r, m.target, ScalarText(item.at(sub), where + " " + m.path + m.each), &kept);
      if (kept && aux_items) EraseAt((*aux_items)[i], sub);
    }
    if (aux_items && !aux_items->empty() &&
        std::all_of(aux_items->begin(), aux_items->end(),
                    [](const Json &e) { return e.is_object() && e.empty(); })) {
      EraseAt(aux, ptr);
    }
  }

  r.pid = CanonicalPid(r.pid);
  if (r.pid.empty() && !map.pid_fallback_prefix.empty() && !Slug(r.name).empty()) {
    r.pid = map.pid_fallback_prefix + Slug(r.name);
  }
  r.auxiliary = std::move(aux);

  ValidationReport report = ValidateInstrument(r);
  if (!report.ok()) throw HarmonizationFailure(report.problems);
  return r;
}

Json Unharmonize(const InstrumentRecord &record, const FieldMap &map) {
  Json out = record.auxiliary.is_object() ? record.auxiliary : Json::object();
  std::set<std::string> written;
  const bool fallback_pid = !map.pid_fallback_prefix.empty() &&
                            record.pid == map.pid_fallback_prefix + Slug(record.name);
  for (const auto &m : map.mappings) {
    if (!written.insert(m.target).second) continue;
    const Pointer ptr(m.path);
    if (IsScalarTarget(m.target)) {
      const std::string &value = *ScalarField(record, m.target);
      if (value.empty() || (m.target == "pid" && fallback_pid)) continue;
      out[ptr] = value;
      continue;
    }
    std::vector<std::string> values = ListField(record, m.target);
    if (values.empty()) continue;
    if (m.each.empty()) {
      out[ptr] = values;
      continue;
    }
    const Pointer sub(m.each);
    if (!out.contains(ptr) || !out.at(ptr).is_array() || out.at(ptr).size() != values.size()) {
      out[ptr] = Json::array();
      for (size_t i = 0; i < values.size(); ++i) out.at(ptr).push_back(Json::object());
    }
    for (size_t i = 0; i < values.size(); ++i) out.at(ptr)[i][sub] = values[i];
  }
  return out;
}

std::vector<InstrumentRecord> Deduplicate(std::span<const InstrumentRecord> records,
                                          std::vector<ConflictingNames> *warnings) {
  std::vector<InstrumentRecord> out;
  std::map<std::string, size_t> index;
  std::map<std::string, std::vector<std::string>> names;
  for (const auto &in : records) {
    const std::string pid = CanonicalPid(in.pid);
    auto [it, inserted] = index.try_emplace(pid, out.size());
    auto &seen = names[pid];
    if (!in.name.empty() && std::find(seen.begin(), seen.end(), in.name) == seen.end()) {
      seen.push_back(in.name);
    }
    if (inserted) {
      out.push_back(in);
      out.back().pid = pid;
      continue;
    }
    InstrumentRecord &r = out[it->second];
    for (const char *target : kScalarTargets) {
      std::string *dst = ScalarField(r, target);
      if (dst->empty()) *dst = *ScalarField(in, target);
    }
    AppendUnique(r.related_article_pids, in.related_article_pids);
    AppendUnique(r.devices, in.devices);
    std::vector<InstrumentSource> sources = {in.source};
    AppendUnique(sources, in.additional_sources);
    for (auto s : sources) {
      if (s != r.source && std::find(r.additional_sources.begin(), r.additional_sources.end(),
                                     s) == r.additional_sources.end()) {
        r.additional_sources.push_back(s);
      }
    }
    if (in.auxiliary.is_object()) {
      for (const auto &[k, v] : in.auxiliary.items()) {
        if (!r.auxiliary.contains(k)) r.auxiliary[k] = v;
      }
    }
  }
  if (warnings) {
    for (const auto &r : out) {
      const auto &seen = names[r.pid];
      if (seen.size() > 1) warnings->push_back(ConflictingNames{r.pid, seen});
    }
  }
  return out;
}

std::vector<std::string> LinkGraph::CheckIntegrity() const {
  std::vector<std::string> problems;
  auto has = [&](const std::string &id) {
    return instruments.count(id) || datasets.count(id) || articles.count(id);
  };
  for (size_t i = 0; i < edges.size(); ++i) {
    const auto &e = edges[i];
    if (!has(e.src)) problems.push_back("edge source '" + e.src + "' unknown");
    if (!has(e.dst)) problems.push_back("edge target '" + e.dst + "' unknown");
    if (e.src == e.dst) problems.push_back("self-loop on '" + e.src + "'");
    if (i > 0 && !(edges[i - 1] < e)) problems.push_back("edges not sorted and unique");
  }
  return problems;
}

LinkGraph BuildLinkGraph(std::span<const InstrumentRecord> instruments,
                         std::span<const DatasetRecord> datasets,
                         std::span<const ArticleRecord> articles,
                         std::span<const LinkEdge> extra_edges) {
  LinkGraph g;
  for (const auto &r : Deduplicate(instruments)) g.instruments.emplace(r.pid, r);
  for (const auto &d : datasets) {
    auto [it, inserted] = g.datasets.try_emplace(d.doi.value(), d);
    if (!inserted) {
      DatasetRecord &m = it->second;
      if (m.title.empty()) m.title = d.title;
      if (m.content_uri.empty()) m.content_uri = d.content_uri;
      AppendUnique(m.produced_by, d.produced_by);
    }
  }
  for (const auto &a : articles) {
    auto [it, inserted] = g.articles.try_emplace(a.doi.value(), a);
    if (!inserted) {
      ArticleRecord &m = it->second;
      if (m.title.empty()) m.title = a.title;
      if (m.abstract.empty()) m.abstract = a.abstract;
      if (m.fulltext_uri.empty()) m.fulltext_uri = a.fulltext_uri;
      if (m.research_field.empty()) m.research_field = a.research_field;
      m.cites_instrument_paper = m.cites_instrument_paper || a.cites_instrument_paper;
      AppendUnique(m.linked_dataset_dois, a.linked_dataset_dois);
      AppendUnique(m.cites, a.cites);
    }
  }

  std::set<LinkEdge> edges;
  std::set<DanglingReference> dangling;
  auto add = [&](const std::string &src, const std::string &dst, LinkKind kind,
                 LinkProvenance provenance, bool src_ok, bool dst_ok) {
    if (src == dst) return;
    if (src_ok && dst_ok) {
      edges.insert(LinkEdge{src, dst, kind, provenance});
    } else {
      dangling.insert(DanglingReference{src, dst, kind});
    }
  };
  for (const auto &[doi, d] : g.datasets) {
    for (const auto &pid : d.produced_by) {
      std::string p = CanonicalPid(pid);
      add(p, doi, LinkKind::kInstrumentProducedDataset, LinkProvenance::kMetadata,
          g.instruments.count(p) > 0, true);
    }
  }
  for (const auto &[doi, a] : g.articles) {
    for (const auto &ds : a.linked_dataset_dois) {
      add(ds.value(), doi, LinkKind::kDatasetDescribedByArticle, LinkProvenance::kMetadata,
          g.datasets.count(ds.value()) > 0, true);
    }
    for (const auto &paper : a.cites) {
      add(doi, paper.value(), LinkKind::kArticleCitesInstrumentPaper,
          LinkProvenance::kCitationExpansion, true, g.articles.count(paper.value()) > 0);
    }
  }
  auto exists = [&](const std::string &id) {
    return g.instruments.count(id) || g.datasets.count(id) || g.articles.count(id);
  };
  for (const auto &e : extra_edges) {
    add(e.src, e.dst, e.kind, e.provenance, exists(e.src), exists(e.dst));
  }
  g.edges.assign(edges.begin(), edges.end());
  g.dangling.assign(dangling.begin(), dangling.end());
  return g;
}

void to_json(Json &j, const LinkGraph &v) {
  j = Json::object();
  j["instruments"] = Json::array();
  for (const auto &[k, r] : v.instruments) j["instruments"].push_back(r);
  j["datasets"] = Json::array();
  for (const auto &[k, r] : v.datasets) j["datasets"].push_back(r);
  j["articles"] = Json::array();
  for (const auto &[k, r] : v.articles) j["articles"].push_back(r);
  j["edges"] = v.edges;
  j["dangling"] = Json::array();
  for (const auto &d : v.dangling) {
    j["dangling"].push_back({{"src", d.src}, {"dst", d.dst}, {"kind", ToString(d.kind)}});
  }
}

void from_json(const Json &j, LinkGraph &v) {
  v = LinkGraph{};
  for (const auto &r : j.at("instruments")) {
    auto rec = r.get<InstrumentRecord>();
    v.instruments.emplace(rec.pid, rec);
  }
  for (const auto &r : j.at("datasets")) {
    auto rec = r.get<DatasetRecord>();
    v.datasets.emplace(rec.doi.value(), rec);
  }
  for (const auto &r : j.at("articles")) {
    auto rec = r.get<ArticleRecord>();
    v.articles.emplace(rec.doi.value(), rec);
  }
  v.edges = j.at("edges").get<std::vector<LinkEdge>>();
  for (const auto &d : j.value("dangling", Json::array())) {
    v.dangling.push_back(DanglingReference{d.at("src").get<std::string>(),
                                           d.at("dst").get<std::string>(),
                                           ParseLinkKind(d.at("kind").get<std::string>())});
  }
}

}  // namespace instkg
