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

#ifndef INSTKG_KG_BUILDER_H_
#define INSTKG_KG_BUILDER_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "instkg/model.h"
#include "instkg/rdf.h"

namespace instkg {

// Semantic names for predicates and classes.
class VocabularyMap {
 public:
  // {"predicates": {"contribution": "http://...P31", ...}, "classes": {...}}
  // Throws Error on relative IRIs.
  static VocabularyMap FromJson(const Json &j);
  static VocabularyMap Load(const std::filesystem::path &path);
  // data/vocabulary.json
  static const VocabularyMap &Default();

  // Throw MissingVocabulary.
  const std::string &Predicate(std::string_view name) const;
  const std::string &Class(std::string_view name) const;
  Term P(std::string_view name) const { return Term::Iri(Predicate(name)); }
  Term C(std::string_view name) const { return Term::Iri(Class(name)); }

  // Semantic name for a predicate IRI, nullopt when absent.
  std::optional<std::string> NameOf(const std::string &predicate_iri) const;
  bool HasPredicateIri(const std::string &iri) const { return reverse_.count(iri) > 0; }

  void SetPredicate(std::string name, std::string iri);
  Json ToJson() const;

 private:
  std::map<std::string, std::string, std::less<>> predicates_;
  std::map<std::string, std::string, std::less<>> classes_;
  std::map<std::string, std::string> reverse_;
};

// Mints namespace + "R" + counter for each new (kind, key) and remembers the
// assignment. Seeded entries pin chosen IRIs; the counter skips any IRI
// already taken. Thread-safe.
class IriRegistry {
 public:
  static constexpr char kDefaultNamespace[] = "http://orkg.org/orkg/resource/";

  explicit IriRegistry(std::string ns = kDefaultNamespace, uint64_t counter = 1);
  IriRegistry(IriRegistry &&other) noexcept;
  IriRegistry &operator=(IriRegistry &&other) noexcept;

  std::string Mint(std::string_view kind, std::string_view key);
  std::optional<std::string> Lookup(std::string_view kind, std::string_view key) const;
  // Throws Error when (kind, key) or the IRI is already bound elsewhere.
  void Seed(std::string_view kind, std::string_view key, std::string iri);

  size_t size() const;
  uint64_t counter() const;
  const std::string &ns() const { return ns_; }

  // {"namespace": ..., "counter": n, "entries": [{"kind","key","iri"}...]}
  // with entries sorted by (kind, key).
  Json ToJson() const;
  static IriRegistry FromJson(const Json &j);
  void Save(const std::filesystem::path &path) const;
  static IriRegistry Load(const std::filesystem::path &path);
  // Seeds every entry of a registry-shaped file into this registry.
  void SeedFrom(const Json &j);

 private:
  std::string ns_;
  uint64_t counter_;
  std::map<std::pair<std::string, std::string>, std::string> map_;
  std::set<std::string> taken_;
  mutable std::mutex mu_;
};

// Registry kinds.
namespace kind {
inline constexpr char kInstrument[] = "Instrument";
inline constexpr char kDevice[] = "Device";
inline constexpr char kDataset[] = "Dataset";
inline constexpr char kPaper[] = "Paper";
inline constexpr char kContribution[] = "Contribution";
inline constexpr char kLocation[] = "Location";
inline constexpr char kEntity[] = "Entity";
inline constexpr char kResearchField[] = "ResearchField";
}  // namespace kind

// Instrument typed Instrument with label and pid; description, manufacturer,
// owner, landing page, type, source and devices when present.
std::vector<Triple> BuildInstrumentTriples(const InstrumentRecord &instrument,
                                           const VocabularyMap &vocab, IriRegistry &registry);

// Dataset label, doi and producedBy links.
std::vector<Triple> BuildDatasetTriples(const DatasetRecord &dataset, const VocabularyMap &vocab,
                                        IriRegistry &registry);

struct ContributionInput {
  DatasetRecord dataset;
  ExperimentDetails details;
};

struct PaperInput {
  ArticleRecord article;
  std::vector<ContributionInput> contributions;  // one per linked dataset
  std::vector<EntitySpan> entities;              // from the article text
};

// Paper -> contribution per dataset (entities only when there is none)
// carrying data, parameters, location, temporal bounds and the extracted
// entities; dataset triples included. Throws PreconditionViolation when
// there are neither datasets nor entities, MissingVocabulary.
std::vector<Triple> BuildPaperTriples(const PaperInput &paper, const VocabularyMap &vocab,
                                      IriRegistry &registry);

// Nested view of one paper's subgraph. Statement keys are semantic
// predicate names; every key maps to an array. Throws OrphanTriple when a
// triple is not reachable from the single Paper-typed resource, and
// PreconditionViolation when there is no such resource.
Json ExportOrkgPayload(std::span<const Triple> paper_triples, const VocabularyMap &vocab);

// Full scan: predicates missing from the vocabulary.
std::vector<std::string> UnknownPredicates(std::span<const Triple> triples,
                                           const VocabularyMap &vocab);

}  // namespace instkg

#endif  // INSTKG_KG_BUILDER_H_
