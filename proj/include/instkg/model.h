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

#ifndef INSTKG_MODEL_H_
#define INSTKG_MODEL_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace instkg {

using Json = nlohmann::json;

// A canonical DOI: lowercase, no resolver prefix, "10.<4+ digits>/<suffix>"
// with exactly one slash. A default-constructed Doi is empty and stands for
// "no identifier"; every non-empty Doi satisfies the invariant.
class Doi {
 public:
  Doi() = default;

  // Strips resolver prefixes and whitespace, lowercases, then validates.
  // Throws MalformedDoi.
  static Doi Normalize(std::string_view raw);
  static std::optional<Doi> TryNormalize(std::string_view raw);

  const std::string &value() const { return value_; }
  bool empty() const { return value_.empty(); }

  auto operator<=>(const Doi &) const = default;

 private:
  explicit Doi(std::string value) : value_(std::move(value)) {}
  std::string value_;
};

inline Doi NormalizeDoi(std::string_view raw) { return Doi::Normalize(raw); }

// Instrument pids are DOIs or IRIs. DOIs are canonicalized, anything else is
// whitespace-trimmed and kept verbatim.
std::string CanonicalPid(std::string_view raw);

// File-name key for an identifier: a leading "scheme://" is dropped and every
// character outside [A-Za-z0-9._-] becomes '_'. For DOIs this is exactly
// "slashes as underscores".
std::string IdentifierKey(std::string_view id);

enum class InstrumentSource { kDataCite, kAWI, kOther };
enum class Repository { kPangaea, kDataCite, kOther };
enum class EntityLabel { kData, kMethod, kProcess, kMaterial, kLocation };
enum class LinkKind {
  kInstrumentProducedDataset,
  kDatasetDescribedByArticle,
  kArticleCitesInstrumentPaper
};
enum class LinkProvenance { kMetadata, kCitationExpansion, kFulltextExtraction };

inline constexpr EntityLabel kAllLabels[] = {
    EntityLabel::kData, EntityLabel::kMethod, EntityLabel::kProcess,
    EntityLabel::kMaterial, EntityLabel::kLocation};

std::string_view ToString(InstrumentSource v);
std::string_view ToString(Repository v);
std::string_view ToString(EntityLabel v);
std::string_view ToString(LinkKind v);
std::string_view ToString(LinkProvenance v);

// Parsers throw instkg::Error on unknown names.
InstrumentSource ParseInstrumentSource(std::string_view name);
Repository ParseRepository(std::string_view name);
EntityLabel ParseEntityLabel(std::string_view name);
std::optional<EntityLabel> TryParseEntityLabel(std::string_view name);
LinkKind ParseLinkKind(std::string_view name);
LinkProvenance ParseLinkProvenance(std::string_view name);

// PIDINST-shaped instrument description.
struct InstrumentRecord {
  std::string pid;
  std::string name;
  std::string description;
  std::string manufacturer;
  std::string owner;
  std::string landing_page;
  std::string instrument_type;
  InstrumentSource source = InstrumentSource::kOther;
  std::vector<Doi> related_article_pids;

  // Named device models attached to the instrument (e.g. "CTD RBR").
  std::vector<std::string> devices;
  // Sources merged in by deduplication, excluding 'source' itself.
  std::vector<InstrumentSource> additional_sources;
  // Unmapped payload fields kept for provenance. Always a JSON object.
  Json auxiliary = Json::object();

  bool operator==(const InstrumentRecord &) const = default;
};

struct DatasetRecord {
  Doi doi;
  std::string title;
  std::vector<std::string> produced_by;
  Repository repository = Repository::kOther;
  std::string content_uri;

  bool operator==(const DatasetRecord &) const = default;
};

struct ArticleRecord {
  Doi doi;
  std::string title;
  std::string abstract;
  std::vector<Doi> linked_dataset_dois;
  bool cites_instrument_paper = false;
  // Instrument papers this article was found to cite (citation expansion).
  std::vector<Doi> cites;
  std::string fulltext_uri;
  std::string research_field;

  bool operator==(const ArticleRecord &) const = default;
};

struct LinkEdge {
  std::string src;
  std::string dst;
  LinkKind kind = LinkKind::kInstrumentProducedDataset;
  LinkProvenance provenance = LinkProvenance::kMetadata;

  auto operator<=>(const LinkEdge &) const = default;
};

// [start, end) in Unicode scalar values.
struct EntitySpan {
  size_t start = 0;
  size_t end = 0;
  EntityLabel label = EntityLabel::kData;
  std::string surface;
  double confidence = 1.0;

  bool operator==(const EntitySpan &) const = default;
};

struct ExperimentDetails {
  std::optional<Doi> dataset_doi;
  std::vector<std::string> parameters;
  std::optional<std::string> temporal_start;  // YYYY-MM-DD
  std::optional<std::string> temporal_end;
  std::optional<std::string> location;
  std::vector<EntitySpan> entities;

  bool operator==(const ExperimentDetails &) const = default;
};

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

// Required PIDINST fields are pid and name. Never throws.
ValidationReport ValidateInstrument(const InstrumentRecord &record);

// Checks 0 <= start < end <= |text|, surface == text[start, end) and
// confidence in [0, 1]. Returns an empty string when valid, else the reason.
std::string CheckSpan(const EntitySpan &span, std::u32string_view text);

// True when no two spans overlap (order-independent).
bool SpansDisjoint(std::vector<EntitySpan> spans);

void to_json(Json &j, const Doi &v);
void from_json(const Json &j, Doi &v);
void to_json(Json &j, const InstrumentRecord &v);
void from_json(const Json &j, InstrumentRecord &v);
void to_json(Json &j, const DatasetRecord &v);
void from_json(const Json &j, DatasetRecord &v);
void to_json(Json &j, const ArticleRecord &v);
void from_json(const Json &j, ArticleRecord &v);
void to_json(Json &j, const LinkEdge &v);
void from_json(const Json &j, LinkEdge &v);
void to_json(Json &j, const EntitySpan &v);
void from_json(const Json &j, EntitySpan &v);
void to_json(Json &j, const ExperimentDetails &v);
void from_json(const Json &j, ExperimentDetails &v);

}  // namespace instkg

#endif  // INSTKG_MODEL_H_
