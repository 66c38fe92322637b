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

#include "instkg/kg_builder.h"

#include <algorithm>
#include <deque>

#include "instkg/error.h"
#include "instkg/io.h"

namespace instkg {
namespace {

std::string_view EntityPredicate(EntityLabel label) {
  switch (label) {
    case EntityLabel::kData: return "dataMention";
    case EntityLabel::kMethod: return "method";
    case EntityLabel::kProcess: return "process";
    case EntityLabel::kMaterial: return "material";
    case EntityLabel::kLocation: return "locationMention";
  }
  return "dataMention";
}

std::string CollapseSpaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

// Collects triples, skipping empty literals.
class Emitter {
 public:
  explicit Emitter(const VocabularyMap &vocab) : vocab_(vocab) {}

  void Link(const std::string &s, std::string_view p, const std::string &o) {
    out_.push_back(MakeTriple(Term::Iri(s), vocab_.P(p), Term::Iri(o)));
  }
  void Type(const std::string &s, std::string_view cls) {
    out_.push_back(MakeTriple(Term::Iri(s), vocab_.P("type"), vocab_.C(cls)));
  }
  void Text(const std::string &s, std::string_view p, const std::string &value,
            std::string datatype = "") {
    if (value.empty()) return;
    out_.push_back(
        MakeTriple(Term::Iri(s), vocab_.P(p), Term::Literal(value, std::move(datatype))));
  }

  std::vector<Triple> Take() {
    std::sort(out_.begin(), out_.end());
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return std::move(out_);
  }

 private:
  const VocabularyMap &vocab_;
  std::vector<Triple> out_;
};

void EmitDataset(const DatasetRecord &d, Emitter &e, IriRegistry &registry) {
  const std::string iri = registry.Mint(kind::kDataset, d.doi.value());
  e.Text(iri, "label", d.title.empty() ? d.doi.value() : d.title);
  e.Text(iri, "doi", d.doi.value());
  for (const auto &pid : d.produced_by) {
    e.Link(iri, "producedBy", registry.Mint(kind::kInstrument, CanonicalPid(pid)));
  }
}

}  // namespace

// Vocabulary.

VocabularyMap VocabularyMap::FromJson(const Json &j) {
  VocabularyMap v;
  for (const auto &[name, iri] : j.at("predicates").items()) {
    v.SetPredicate(name, iri.get<std::string>());
  }
  for (const auto &[name, iri] : j.at("classes").items()) {
    if (!IsAbsoluteIri(iri.get<std::string>())) {
      throw Error("vocabulary class '" + name + "' is not an absolute IRI");
    }
    v.classes_[name] = iri.get<std::string>();
  }
  return v;
}

VocabularyMap VocabularyMap::Load(const std::filesystem::path &path) {
  return FromJson(ReadJsonFile(path));
}

const VocabularyMap &VocabularyMap::Default() {
  static const VocabularyMap v =
      Load(std::filesystem::path(INSTKG_DATA_DIR) / "vocabulary.json");
  return v;
}

void VocabularyMap::SetPredicate(std::string name, std::string iri) {
  if (!IsAbsoluteIri(iri)) throw Error("vocabulary predicate '" + name + "' is not an absolute IRI");
  auto old = predicates_.find(name);
  if (old != predicates_.end()) reverse_.erase(old->second);
  auto [it, inserted] = reverse_.emplace(iri, name);
  if (!inserted && it->second != name) {
    throw Error("predicate IRI " + iri + " bound to both '" + it->second + "' and '" + name + "'");
  }
  predicates_[std::move(name)] = std::move(iri);
}

const std::string &VocabularyMap::Predicate(std::string_view name) const {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) {
    throw MissingVocabulary("no predicate for '" + std::string(name) + "'");
  }
  return it->second;
}

const std::string &VocabularyMap::Class(std::string_view name) const {
  auto it = classes_.find(name);
  if (it == classes_.end()) throw MissingVocabulary("no class for '" + std::string(name) + "'");
  return it->second;
}

std::optional<std::string> VocabularyMap::NameOf(const std::string &predicate_iri) const {
  auto it = reverse_.find(predicate_iri);
  if (it == reverse_.end()) return std::nullopt;
  return it->second;
}

Json VocabularyMap::ToJson() const {
  Json j;
  j["predicates"] = Json::object();
  for (const auto &[k, v] : predicates_) j["predicates"][k] = v;
  j["classes"] = Json::object();
  for (const auto &[k, v] : classes_) j["classes"][k] = v;
  return j;
}

// Registry.

IriRegistry::IriRegistry(std::string ns, uint64_t counter) : ns_(std::move(ns)), counter_(counter) {
  if (!IsAbsoluteIri(ns_)) throw Error("registry namespace must be an absolute IRI");
}

IriRegistry::IriRegistry(IriRegistry &&other) noexcept
    : ns_(std::move(other.ns_)),
      counter_(other.counter_),
      map_(std::move(other.map_)),
      taken_(std::move(other.taken_)) {}

IriRegistry &IriRegistry::operator=(IriRegistry &&other) noexcept {
  ns_ = std::move(other.ns_);
  counter_ = other.counter_;
  map_ = std::move(other.map_);
  taken_ = std::move(other.taken_);
  return *this;
}

std::string IriRegistry::Mint(std::string_view kind, std::string_view key) {
  std::lock_guard lock(mu_);
  auto k = std::make_pair(std::string(kind), std::string(key));
  auto it = map_.find(k);
  if (it != map_.end()) return it->second;
  std::string iri;
  do {
    iri = ns_ + "R" + std::to_string(counter_++);
  } while (taken_.count(iri));
  taken_.insert(iri);
  map_.emplace(std::move(k), iri);
  return iri;
}

std::optional<std::string> IriRegistry::Lookup(std::string_view kind, std::string_view key) const {
  std::lock_guard lock(mu_);
  auto it = map_.find({std::string(kind), std::string(key)});
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void IriRegistry::Seed(std::string_view kind, std::string_view key, std::string iri) {
  if (!IsAbsoluteIri(iri)) throw Error("seeded IRI must be absolute: " + iri);
  std::lock_guard lock(mu_);
  auto k = std::make_pair(std::string(kind), std::string(key));
  auto it = map_.find(k);
  if (it != map_.end()) {
    if (it->second == iri) return;
    throw Error("registry already maps " + k.first + " '" + k.second + "' to " + it->second);
  }
  if (taken_.count(iri)) throw Error("registry IRI " + iri + " is already assigned");
  taken_.insert(iri);
  map_.emplace(std::move(k), std::move(iri));
}

size_t IriRegistry::size() const {
  std::lock_guard lock(mu_);
  return map_.size();
}

uint64_t IriRegistry::counter() const {
  std::lock_guard lock(mu_);
  return counter_;
}

Json IriRegistry::ToJson() const {
  std::lock_guard lock(mu_);
  Json entries = Json::array();
  for (const auto &[k, iri] : map_) {
    entries.push_back({{"kind", k.first}, {"key", k.second}, {"iri", iri}});
  }
  return Json{{"namespace", ns_}, {"counter", counter_}, {"entries", entries}};
}

IriRegistry IriRegistry::FromJson(const Json &j) {
  IriRegistry r(j.value("namespace", std::string(kDefaultNamespace)), j.value("counter", 1));
  r.SeedFrom(j);
  return r;
}

void IriRegistry::SeedFrom(const Json &j) {
  for (const auto &e : j.value("entries", Json::array())) {
    Seed(e.at("kind").get<std::string>(), e.at("key").get<std::string>(),
         e.at("iri").get<std::string>());
  }
}

void IriRegistry::Save(const std::filesystem::path &path) const {
  WriteJsonFile(path, ToJson());
}

IriRegistry IriRegistry::Load(const std::filesystem::path &path) {
  return FromJson(ReadJsonFile(path));
}

// Triples.

std::vector<Triple> BuildInstrumentTriples(const InstrumentRecord &r, const VocabularyMap &vocab,
                                           IriRegistry &registry) {
  Emitter e(vocab);
  const std::string pid = CanonicalPid(r.pid);
  const std::string iri = registry.Mint(kind::kInstrument, pid);
  e.Type(iri, "Instrument");
  e.Text(iri, "label", r.name);
  e.Text(iri, "pid", pid);
  e.Text(iri, "description", r.description);
  e.Text(iri, "manufacturer", r.manufacturer);
  e.Text(iri, "owner", r.owner);
  e.Text(iri, "landingPage", r.landing_page);
  e.Text(iri, "instrumentType", r.instrument_type);
  std::vector<InstrumentSource> sources = {r.source};
  sources.insert(sources.end(), r.additional_sources.begin(), r.additional_sources.end());
  for (auto s : sources) {
    if (s != InstrumentSource::kOther) e.Text(iri, "source", std::string(ToString(s)));
  }
  for (const auto &device : r.devices) {
    const std::string name = CollapseSpaces(device);
    if (name.empty()) continue;
    const std::string d = registry.Mint(kind::kDevice, name);
    e.Link(iri, "devices", d);
    e.Text(d, "label", name);
  }
  return e.Take();
}

std::vector<Triple> BuildDatasetTriples(const DatasetRecord &dataset, const VocabularyMap &vocab,
                                        IriRegistry &registry) {
  Emitter e(vocab);
  EmitDataset(dataset, e, registry);
  return e.Take();
}

std::vector<Triple> BuildPaperTriples(const PaperInput &paper, const VocabularyMap &vocab,
                                      IriRegistry &registry) {
  const ArticleRecord &a = paper.article;
  if (paper.contributions.empty() && paper.entities.empty()) {
    throw PreconditionViolation("article " + a.doi.value() +
                                " has neither linked datasets nor extracted entities");
  }
  Emitter e(vocab);
  const std::string iri = registry.Mint(kind::kPaper, a.doi.value());
  e.Type(iri, "Paper");
  e.Text(iri, "label", a.title);
  e.Text(iri, "doi", a.doi.value());
  if (!a.research_field.empty()) {
    const std::string field = registry.Mint(kind::kResearchField, a.research_field);
    e.Link(iri, "researchField", field);
    e.Text(field, "label", a.research_field);
  }

  auto attach_entities = [&](const std::string &contribution) {
    for (const auto &span : paper.entities) {
      const std::string surface = CollapseSpaces(span.surface);
      if (surface.empty()) continue;
      const std::string key = std::string(ToString(span.label)) + ":" + surface;
      const std::string entity = registry.Mint(kind::kEntity, key);
      e.Link(contribution, EntityPredicate(span.label), entity);
      e.Text(entity, "label", surface);
    }
  };

  std::vector<const ContributionInput *> ordered;
  for (const auto &c : paper.contributions) ordered.push_back(&c);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto *x, const auto *y) {
    return x->dataset.doi < y->dataset.doi;
  });

  int n = 0;
  for (const ContributionInput *c : ordered) {
    const std::string contribution =
        registry.Mint(kind::kContribution, a.doi.value() + "#" + c->dataset.doi.value());
    e.Link(iri, "contribution", contribution);
    e.Type(contribution, "Contribution");
    e.Text(contribution, "label", "Contribution " + std::to_string(++n));

    const std::string dataset = registry.Mint(kind::kDataset, c->dataset.doi.value());
    e.Link(contribution, "data", dataset);
    e.Link(contribution, "data_alias", dataset);
    EmitDataset(c->dataset, e, registry);

    for (const auto &p : c->details.parameters) e.Text(contribution, "parameters", p);
    if (c->details.location && !c->details.location->empty()) {
      const std::string loc = registry.Mint(kind::kLocation, *c->details.location);
      e.Link(contribution, "location", loc);
      e.Text(loc, "label", *c->details.location);
    }
    if (c->details.temporal_start) {
      e.Text(contribution, "temporalStart", *c->details.temporal_start, vocab::kXsdDate);
    }
    if (c->details.temporal_end) {
      e.Text(contribution, "temporalEnd", *c->details.temporal_end, vocab::kXsdDate);
    }
    attach_entities(contribution);
  }
  if (ordered.empty()) {
    const std::string contribution = registry.Mint(kind::kContribution, a.doi.value() + "#text");
    e.Link(iri, "contribution", contribution);
    e.Type(contribution, "Contribution");
    e.Text(contribution, "label", "Contribution 1");
    attach_entities(contribution);
  }
  return e.Take();
}

// Export.

namespace {

struct Outgoing {
  std::map<std::string, std::vector<std::pair<std::string, Term>>> by_subject;
};

Json Node(const std::string &iri, const Outgoing &graph, const VocabularyMap &vocab,
          std::set<std::string> &path) {
  Json node = Json::object();
  node["@id"] = iri;
  auto it = graph.by_subject.find(iri);
  if (it == graph.by_subject.end() || !path.insert(iri).second) return node;
  const std::string &label = vocab.Predicate("label");
  const std::string &type = vocab.Predicate("type");
  for (const auto &[p, o] : it->second) {
    if (p == label && o.is_literal() && !node.contains("label")) {
      node["label"] = o.value();
      continue;
    }
    if (p == type) {
      node["@type"].push_back(o.value());
      continue;
    }
    const std::string key = vocab.NameOf(p).value_or(p);
    if (o.is_literal()) {
      node[key].push_back(o.value());
    } else {
      node[key].push_back(Node(o.value(), graph, vocab, path));
    }
  }
  path.erase(iri);
  return node;
}

}  // namespace

Json ExportOrkgPayload(std::span<const Triple> triples, const VocabularyMap &vocab) {
  const std::string &type = vocab.Predicate("type");
  const std::string &paper_class = vocab.Class("Paper");
  std::vector<std::string> roots;
  Outgoing graph;
  for (const auto &t : triples) {
    if (t.predicate.value() == type && t.object.value() == paper_class) {
      roots.push_back(t.subject.value());
    }
    graph.by_subject[t.subject.value()].emplace_back(t.predicate.value(), t.object);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  if (roots.size() != 1) {
    throw PreconditionViolation("expected one Paper-typed resource, found " +
                                std::to_string(roots.size()));
  }
  for (auto &[s, edges] : graph.by_subject) std::sort(edges.begin(), edges.end());

  std::set<std::string> reached = {roots[0]};
  std::deque<std::string> queue = {roots[0]};
  while (!queue.empty()) {
    auto it = graph.by_subject.find(queue.front());
    queue.pop_front();
    if (it == graph.by_subject.end()) continue;
    for (const auto &[p, o] : it->second) {
      if (o.is_iri() && reached.insert(o.value()).second) queue.push_back(o.value());
    }
  }
  for (const auto &t : triples) {
    if (!reached.count(t.subject.value())) throw OrphanTriple(t.ToNTriples());
  }

  std::set<std::string> path;
  Json paper = Node(roots[0], graph, vocab, path);
  Json contributions = Json::array();
  const std::string contribution_key = vocab.NameOf(vocab.Predicate("contribution")).value();
  if (paper.contains(contribution_key)) {
    contributions = paper[contribution_key];
    paper.erase(contribution_key);
  }
  return Json{{"paper", paper}, {"contributions", contributions}};
}

std::vector<std::string> UnknownPredicates(std::span<const Triple> triples,
                                           const VocabularyMap &vocab) {
  std::set<std::string> unknown;
  for (const auto &t : triples) {
    if (!vocab.HasPredicateIri(t.predicate.value())) unknown.insert(t.predicate.value());
  }
  return {unknown.begin(), unknown.end()};
}

}  // namespace instkg
