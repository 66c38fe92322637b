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

#include "instkg/stats.h"

#include <algorithm>
#include <set>

namespace instkg {

namespace {

std::set<std::string> Subjects(const TripleStore &store, const Term &p, const Term &o) {
  std::set<std::string> out;
  store.Match(std::nullopt, p, o, [&](const Triple &t) {
    out.insert(t.subject.value());
    return true;
  });
  return out;
}

}  // namespace

StatsReport ComputeStats(const TripleStore &store, const VocabularyMap &vocab) {
  const Term type = vocab.P("type");
  const Term source = vocab.P("source");
  const Term produced_by = vocab.P("producedBy");
  const Term contribution = vocab.P("contribution");
  const Term data = vocab.P("data");

  const auto instruments = Subjects(store, type, vocab.C("Instrument"));
  const auto papers = Subjects(store, type, vocab.C("Paper"));
  auto count_source = [&](std::string_view name) {
    size_t n = 0;
    for (const auto &s : Subjects(store, source, Term::Literal(std::string(name)))) {
      n += instruments.count(s);
    }
    return n;
  };

  std::set<std::string> produced;
  size_t produced_edges = 0;
  store.Match(std::nullopt, produced_by, std::nullopt, [&](const Triple &t) {
    produced.insert(t.subject.value());
    ++produced_edges;
    return true;
  });

  std::set<std::string> datasets;
  size_t data_edges = 0;
  std::map<std::string, std::set<std::string>> datasets_of_contribution;
  store.Match(std::nullopt, data, std::nullopt, [&](const Triple &t) {
    datasets.insert(t.object.value());
    datasets_of_contribution[t.subject.value()].insert(t.object.value());
    ++data_edges;
    return true;
  });

  std::set<std::string> linked_papers;
  std::set<std::pair<std::string, std::string>> paper_dataset;
  size_t contributions = 0;
  store.Match(std::nullopt, contribution, std::nullopt, [&](const Triple &t) {
    ++contributions;
    auto it = datasets_of_contribution.find(t.object.value());
    if (it == datasets_of_contribution.end() || !papers.count(t.subject.value())) return true;
    linked_papers.insert(t.subject.value());
    for (const auto &d : it->second) paper_dataset.emplace(t.subject.value(), d);
    return true;
  });

  StatsReport r;
  r.entities["Instruments"] = instruments.size();
  r.entities["Instruments from Datacite"] = count_source("DataCite");
  r.entities["Instruments from AWI"] = count_source("AWI");
  r.entities["Datasets produced by Instruments"] = produced.size();
  r.entities["Articles linked with datasets"] = linked_papers.size();
  r.links["producedBy edges"] = produced_edges;
  r.links["contribution-dataset edges"] = data_edges;
  r.links["paper-dataset pairs"] = paper_dataset.size();
  r.statements["triples"] = store.size();
  r.statements["papers"] = papers.size();
  r.statements["contributions"] = contributions;
  r.statements["datasets"] = datasets.size();
  return r;
}

Json StatsReport::ToJson() const {
  return Json{{"entities", entities}, {"links", links}, {"statements", statements}};
}

StatsReport StatsReport::FromJson(const Json &j) {
  StatsReport r;
  r.entities = j.at("entities").get<std::map<std::string, size_t>>();
  r.links = j.at("links").get<std::map<std::string, size_t>>();
  r.statements = j.at("statements").get<std::map<std::string, size_t>>();
  return r;
}

std::string StatsReport::ToText() const {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const char *name : kStatsEntityNames) {
    auto it = entities.find(name);
    rows.emplace_back(name, std::to_string(it == entities.end() ? 0 : it->second));
  }
  for (const auto &[k, v] : links) rows.emplace_back(k, std::to_string(v));
  for (const auto &[k, v] : statements) rows.emplace_back(k, std::to_string(v));
  size_t w1 = 6, w2 = 5;
  for (const auto &[k, v] : rows) {
    w1 = std::max(w1, k.size());
    w2 = std::max(w2, v.size());
  }
  auto line = [&](const std::string &k, const std::string &v) {
    return k + std::string(w1 - k.size() + 2, ' ') + std::string(w2 - v.size(), ' ') + v + "\n";
  };
  std::string out = line("Entity", "Count");
  out += std::string(w1 + 2 + w2, '-') + "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i == std::size(kStatsEntityNames)) out += "\n";
    out += line(rows[i].first, rows[i].second);
  }
  return out;
}

}  // namespace instkg
