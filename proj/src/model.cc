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

#include "instkg/model.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "instkg/error.h"
#include "instkg/unicode.h"

namespace instkg {
namespace {

constexpr std::array<std::string_view, 7> kResolverPrefixes = {
    "https://doi.org/", "http://doi.org/",  "https://dx.doi.org/",
    "http://dx.doi.org/", "doi.org/",       "dx.doi.org/",
    "doi:"};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool ValidCanonicalDoi(std::string_view v) {
  auto slash = v.find('/');
  if (slash == std::string_view::npos || v.find('/', slash + 1) != std::string_view::npos) {
    return false;
  }
  std::string_view prefix = v.substr(0, slash);
  std::string_view suffix = v.substr(slash + 1);
  if (suffix.empty() || prefix.substr(0, 3) != "10.") return false;
  // Registrant code: 4+ digits, optionally followed by ".digits" groups.
  size_t digits = 0;
  size_t i = 3;
  while (i < prefix.size() && std::isdigit(static_cast<unsigned char>(prefix[i]))) {
    ++digits;
    ++i;
  }
  if (digits < 4) return false;
  while (i < prefix.size()) {
    if (prefix[i] != '.' || i + 1 >= prefix.size()) return false;
    ++i;
    size_t group = 0;
    while (i < prefix.size() && std::isdigit(static_cast<unsigned char>(prefix[i]))) {
      ++group;
      ++i;
    }
    if (group == 0) return false;
  }
  for (char c : suffix) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isspace(u) || std::iscntrl(u)) return false;
    if (std::isupper(u)) return false;
  }
  return true;
}

template <typename E, size_t N>
E ParseEnum(std::string_view name, const std::array<E, N> &values, const char *what) {
  for (E v : values) {
    if (ToString(v) == name) return v;
  }
  throw Error(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

void PutIfNotEmpty(Json &j, const char *key, const std::string &value) {
  if (!value.empty()) j[key] = value;
}

std::string GetString(const Json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return "";
  return it->get<std::string>();
}

}  // namespace

std::optional<Doi> Doi::TryNormalize(std::string_view raw) {
  std::string_view s = Trim(raw);
  std::string lowered = Lower(s);
  std::string_view view = lowered;
  for (auto prefix : kResolverPrefixes) {
    if (view.substr(0, prefix.size()) == prefix) {
      view.remove_prefix(prefix.size());
      break;
    }
  }
  view = Trim(view);
  if (!ValidCanonicalDoi(view)) return std::nullopt;
  return Doi(std::string(view));
}

Doi Doi::Normalize(std::string_view raw) {
  if (Trim(raw).empty()) throw MalformedDoi("empty DOI");
  auto doi = TryNormalize(raw);
  if (!doi) throw MalformedDoi("malformed DOI '" + std::string(raw) + "'");
  return *doi;
}

std::string CanonicalPid(std::string_view raw) {
  if (auto doi = Doi::TryNormalize(raw)) return doi->value();
  return std::string(Trim(raw));
}

std::string IdentifierKey(std::string_view id) {
  auto scheme = id.find("://");
  if (scheme != std::string_view::npos) id.remove_prefix(scheme + 3);
  std::string out(id);
  for (auto &c : out) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '.' || c == '_' || c == '-')) c = '_';
  }
  return out;
}

std::string_view ToString(InstrumentSource v) {
  switch (v) {
    case InstrumentSource::kDataCite: return "DataCite";
    case InstrumentSource::kAWI: return "AWI";
    case InstrumentSource::kOther: return "Other";
  }
  return "Other";
}

std::string_view ToString(Repository v) {
  switch (v) {
    case Repository::kPangaea: return "PANGAEA";
    case Repository::kDataCite: return "DataCite";
    case Repository::kOther: return "Other";
  }
  return "Other";
}

std::string_view ToString(EntityLabel v) {
  switch (v) {
    case EntityLabel::kData: return "Data";
    case EntityLabel::kMethod: return "Method";
    case EntityLabel::kProcess: return "Process";
    case EntityLabel::kMaterial: return "Material";
    case EntityLabel::kLocation: return "Location";
  }
  return "Data";
}

std::string_view ToString(LinkKind v) {
  switch (v) {
    case LinkKind::kInstrumentProducedDataset: return "InstrumentProducedDataset";
    case LinkKind::kDatasetDescribedByArticle: return "DatasetDescribedByArticle";
    case LinkKind::kArticleCitesInstrumentPaper: return "ArticleCitesInstrumentPaper";
  }
  return "";
}

std::string_view ToString(LinkProvenance v) {
  switch (v) {
    case LinkProvenance::kMetadata: return "Metadata";
    case LinkProvenance::kCitationExpansion: return "CitationExpansion";
    case LinkProvenance::kFulltextExtraction: return "FulltextExtraction";
  }
  return "";
}

InstrumentSource ParseInstrumentSource(std::string_view name) {
  return ParseEnum(name, std::array{InstrumentSource::kDataCite, InstrumentSource::kAWI,
                                    InstrumentSource::kOther},
                   "instrument source");
}

Repository ParseRepository(std::string_view name) {
  return ParseEnum(name, std::array{Repository::kPangaea, Repository::kDataCite,
                                    Repository::kOther},
                   "repository");
}

std::optional<EntityLabel> TryParseEntityLabel(std::string_view name) {
  for (EntityLabel l : kAllLabels) {
    if (ToString(l) == name) return l;
  }
  return std::nullopt;
}

EntityLabel ParseEntityLabel(std::string_view name) {
  if (auto l = TryParseEntityLabel(name)) return *l;
  throw Error("unknown entity label '" + std::string(name) + "'");
}

LinkKind ParseLinkKind(std::string_view name) {
  return ParseEnum(name, std::array{LinkKind::kInstrumentProducedDataset,
                                    LinkKind::kDatasetDescribedByArticle,
                                    LinkKind::kArticleCitesInstrumentPaper},
                   "link kind");
}

LinkProvenance ParseLinkProvenance(std::string_view name) {
  return ParseEnum(name, std::array{LinkProvenance::kMetadata,
                                    LinkProvenance::kCitationExpansion,
                                    LinkProvenance::kFulltextExtraction},
                   "link provenance");
}

ValidationReport ValidateInstrument(const InstrumentRecord &record) {
  ValidationReport report;
  if (Trim(record.pid).empty()) report.problems.push_back("pid missing");
  if (Trim(record.name).empty()) report.problems.push_back("name missing");
  return report;
}

std::string CheckSpan(const EntitySpan &span, std::u32string_view text) {
  if (span.start >= span.end) return "empty or inverted span";
  if (span.end > text.size()) return "span end beyond text length";
  if (EncodeUtf8(text.substr(span.start, span.end - span.start)) != span.surface) {
    return "surface does not match text slice";
  }
  if (!(span.confidence >= 0.0 && span.confidence <= 1.0)) {
    return "confidence outside [0,1]";
  }
  return "";
}

bool SpansDisjoint(std::vector<EntitySpan> spans) {
  std::sort(spans.begin(), spans.end(),
            [](const EntitySpan &a, const EntitySpan &b) { return a.start < b.start; });
  for (size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].start < spans[i - 1].end) return false;
  }
  return true;
}

void to_json(Json &j, const Doi &v) { j = v.value(); }

void from_json(const Json &j, Doi &v) {
  const auto &s = j.get_ref<const std::string &>();
  v = s.empty() ? Doi() : Doi::Normalize(s);
}

void to_json(Json &j, const InstrumentRecord &v) {
  j = Json::object();
  j["pid"] = v.pid;
  j["name"] = v.name;
  PutIfNotEmpty(j, "description", v.description);
  PutIfNotEmpty(j, "manufacturer", v.manufacturer);
  PutIfNotEmpty(j, "owner", v.owner);
  PutIfNotEmpty(j, "landing_page", v.landing_page);
  PutIfNotEmpty(j, "instrument_type", v.instrument_type);
  j["source"] = ToString(v.source);
  j["related_article_pids"] = v.related_article_pids;
  if (!v.devices.empty()) j["devices"] = v.devices;
  if (!v.additional_sources.empty()) {
    Json sources = Json::array();
    for (auto s : v.additional_sources) sources.push_back(ToString(s));
    j["additional_sources"] = sources;
  }
  if (!v.auxiliary.empty()) j["auxiliary"] = v.auxiliary;
}

void from_json(const Json &j, InstrumentRecord &v) {
  v = InstrumentRecord();
  v.pid = GetString(j, "pid");
  v.name = GetString(j, "name");
  v.description = GetString(j, "description");
  v.manufacturer = GetString(j, "manufacturer");
  v.owner = GetString(j, "owner");
  v.landing_page = GetString(j, "landing_page");
  v.instrument_type = GetString(j, "instrument_type");
  v.source = ParseInstrumentSource(j.at("source").get<std::string>());
  if (j.contains("related_article_pids")) {
    v.related_article_pids = j["related_article_pids"].get<std::vector<Doi>>();
  }
  if (j.contains("devices")) v.devices = j["devices"].get<std::vector<std::string>>();
  if (j.contains("additional_sources")) {
    for (const auto &s : j["additional_sources"]) {
      v.additional_sources.push_back(ParseInstrumentSource(s.get<std::string>()));
    }
  }
  if (j.contains("auxiliary")) v.auxiliary = j["auxiliary"];
}

void to_json(Json &j, const DatasetRecord &v) {
  j = Json::object();
  j["doi"] = v.doi;
  j["title"] = v.title;
  j["produced_by"] = v.produced_by;
  j["repository"] = ToString(v.repository);
  PutIfNotEmpty(j, "content_uri", v.content_uri);
}

void from_json(const Json &j, DatasetRecord &v) {
  v = DatasetRecord();
  v.doi = j.at("doi").get<Doi>();
  v.title = GetString(j, "title");
  if (j.contains("produced_by")) v.produced_by = j["produced_by"].get<std::vector<std::string>>();
  v.repository = ParseRepository(j.value("repository", std::string("Other")));
  v.content_uri = GetString(j, "content_uri");
}

void to_json(Json &j, const ArticleRecord &v) {
  j = Json::object();
  j["doi"] = v.doi;
  j["title"] = v.title;
  PutIfNotEmpty(j, "abstract", v.abstract);
  j["linked_dataset_dois"] = v.linked_dataset_dois;
  j["cites_instrument_paper"] = v.cites_instrument_paper;
  if (!v.cites.empty()) j["cites"] = v.cites;
  PutIfNotEmpty(j, "fulltext_uri", v.fulltext_uri);
  PutIfNotEmpty(j, "research_field", v.research_field);
}

void from_json(const Json &j, ArticleRecord &v) {
  v = ArticleRecord();
  v.doi = j.at("doi").get<Doi>();
  v.title = GetString(j, "title");
  v.abstract = GetString(j, "abstract");
  if (j.contains("linked_dataset_dois")) {
    v.linked_dataset_dois = j["linked_dataset_dois"].get<std::vector<Doi>>();
  }
  v.cites_instrument_paper = j.value("cites_instrument_paper", false);
  if (j.contains("cites")) v.cites = j["cites"].get<std::vector<Doi>>();
  v.fulltext_uri = GetString(j, "fulltext_uri");
  v.research_field = GetString(j, "research_field");
}

void to_json(Json &j, const LinkEdge &v) {
  j = Json{{"src", v.src},
           {"dst", v.dst},
           {"kind", ToString(v.kind)},
           {"provenance", ToString(v.provenance)}};
}

void from_json(const Json &j, LinkEdge &v) {
  v.src = j.at("src").get<std::string>();
  v.dst = j.at("dst").get<std::string>();
  v.kind = ParseLinkKind(j.at("kind").get<std::string>());
  v.provenance = ParseLinkProvenance(j.at("provenance").get<std::string>());
}

void to_json(Json &j, const EntitySpan &v) {
  j = Json{{"start", v.start},
           {"end", v.end},
           {"label", ToString(v.label)},
           {"surface", v.surface},
           {"confidence", v.confidence}};
}

void from_json(const Json &j, EntitySpan &v) {
  v.start = j.at("start").get<size_t>();
  v.end = j.at("end").get<size_t>();
  v.label = ParseEntityLabel(j.at("label").get<std::string>());
  v.surface = j.at("surface").get<std::string>();
  v.confidence = j.value("confidence", 1.0);
}

void to_json(Json &j, const ExperimentDetails &v) {
  j = Json::object();
  if (v.dataset_doi) j["dataset_doi"] = *v.dataset_doi;
  j["parameters"] = v.parameters;
  if (v.temporal_start) j["temporal_start"] = *v.temporal_start;
  if (v.temporal_end) j["temporal_end"] = *v.temporal_end;
  if (v.location) j["location"] = *v.location;
  j["entities"] = v.entities;
}

void from_json(const Json &j, ExperimentDetails &v) {
  v = ExperimentDetails();
  if (j.contains("dataset_doi")) v.dataset_doi = j["dataset_doi"].get<Doi>();
  if (j.contains("parameters")) v.parameters = j["parameters"].get<std::vector<std::string>>();
  if (j.contains("temporal_start")) v.temporal_start = j["temporal_start"].get<std::string>();
  if (j.contains("temporal_end")) v.temporal_end = j["temporal_end"].get<std::string>();
  if (v.temporal_start && v.temporal_end && *v.temporal_start > *v.temporal_end) {
    throw Error("temporal_start after temporal_end");
  }
  if (j.contains("location")) v.location = j["location"].get<std::string>();
  if (j.contains("entities")) v.entities = j["entities"].get<std::vector<EntitySpan>>();
}

}  // namespace instkg
