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

// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "instkg/gazetteer.h"
#include "instkg/io.h"
#include "instkg/ner_eval.h"
#include "instkg/pipeline.h"
#include "instkg/query.h"
#include "instkg/rdf_io.h"
#include "instkg/stats.h"
#include "instkg/tabular.h"
#include "instkg/unicode.h"
#include "oracles/eval_oracle.h"
#include "oracles/fixture_recount.h"
#include "oracles/naive_sparql.h"
#include "test_util.h"

namespace instkg {
namespace {
namespace fs = std::filesystem;

constexpr double kMetricTolerance = 1e-9;
constexpr double kPipelineBudgetSeconds = 5.0;
constexpr double kQueryBudgetSeconds = 2.0;

const fs::path kFixtures = INSTKG_FIXTURES_DIR;
const std::string kR = "http://orkg.org/orkg/resource/";

// Collects failed checks for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok) failures_.push_back(what);
  }
  void Note(const std::string &s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return failures_.empty(); }
  std::string Detail() const {
    std::string out = notes_;
    for (const auto &f : failures_) out += (out.empty() ? "" : "; ") + ("failed: " + f);
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::string notes_;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

BuildSummary RunCtd(const fs::path &out, Json overrides = Json::object()) {
  Json j = {{"harvest", {{"mode", "offline"}, {"fixtures_dir", "."}}},
            {"registry_seed", "registry_seed.json"},
            {"output_dir", out.string()}};
  j.update(overrides);
  return RunPipeline(PipelineConfig::FromJson(j, kFixtures / "ctd"));
}

void GraphShape(Check &c) {
  testing::ScopedTempDir dir;
  auto start = std::chrono::steady_clock::now();
  BuildSummary a = RunCtd(dir.path() / "a");
  const double elapsed = Seconds(start);
  BuildSummary b = RunCtd(dir.path() / "b");
  BuildSummary replay = RunCtd(dir.path() / "a", {{"reuse_registry", true}});
  c.Expect(ReadFile(a.store_path) == ReadFile(b.store_path), "two runs give identical graphs");
  c.Expect(ReadFile(replay.store_path) == ReadFile(b.store_path), "registry replay is identical");

  const TripleStore store = LoadRdfFile(a.store_path);
  const std::string shape = R"(
    PREFIX orkgp: <http://orkg.org/orkg/predicate/>
    PREFIX orkgc: <http://orkg.org/orkg/class/>
    PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
    SELECT ?paper ?details ?dataset ?parameter ?device_label WHERE {
      ?paper a orkgc:Paper ; orkgp:P31 ?details .
      ?details orkgp:P2005 ?dataset ; orkgp:P15680 ?parameter .
      ?dataset orkgp:P146018 <http://orkg.org/orkg/resource/R741211> .
      <http://orkg.org/orkg/resource/R741211> orkgp:devices ?device .
      ?device rdfs:label ?device_label .
    })";
  Query q = ParseQuery(shape);
  ResultTable got = EvaluateQuery(store, q);
  c.Expect(got == oracle::NaiveEvaluate(store.Triples(), q), "shape query equals oracle");
  std::set<std::string> devices, params;
  for (const auto &row : got.rows) {
    params.insert(row[3]->value());
    devices.insert(row[4]->value());
  }
  c.Expect(devices == std::set<std::string>{"CTD RBR", "CTD_Seabird-SBE-19-0"}, "device labels");
  c.Expect(params.count("salinity") && params.count("water temperature"), "parameters");
  c.Expect(elapsed < kPipelineBudgetSeconds, "runtime under budget");
  c.Note(std::to_string(got.rows.size()) + " shape rows, " + std::to_string(store.size()) +
         " triples, " + Fmt(elapsed) + " s (budget " + Fmt(kPipelineBudgetSeconds) + " s)");
}

void ExampleQueries(Check &c) {
  testing::ScopedTempDir dir;
  const TripleStore store = LoadRdfFile(RunCtd(dir.path() / "out").store_path);
  std::string sizes;
  for (const char *name : {"query1.rq", "query2.rq", "query3.rq"}) {
    Query q = ParseQuery(ReadFile(kFixtures / "queries" / name));
    ResultTable got = EvaluateQuery(store, q);
    ResultTable want = oracle::NaiveEvaluate(store.Triples(), q);
    c.Expect(got == want, std::string(name) + " equals the nested-loop oracle");
    c.Expect(!got.rows.empty(), std::string(name) + " is nonempty");
    sizes += std::string(sizes.empty() ? "" : ", ") + name + "=" + std::to_string(got.rows.size());
  }
  c.Note("rows " + sizes);
}

void AnalyzerExample(Check &c) {
  const std::string text =
      ReadFile(kFixtures / "ctd" / "pangaea" / "content" / "10.1594_pangaea.832320.tab");
  ExperimentDetails d = AnalyzeDataset(ParseTabular(text), ParameterAliases::Default());
  c.Expect(d.temporal_start == "2012-03-21", "start " + d.temporal_start.value_or(""));
  c.Expect(d.temporal_end == "2012-03-24", "end " + d.temporal_end.value_or(""));
  c.Expect(d.location == "Yucatan Strait", "location " + d.location.value_or(""));
  std::set<std::string> params(d.parameters.begin(), d.parameters.end());
  for (const char *p : {"salinity", "density", "water temperature"}) {
    c.Expect(params.count(p) > 0, std::string("parameter ") + p);
  }
  c.Note(d.temporal_start.value_or("") + ".." + d.temporal_end.value_or("") + ", " +
         d.location.value_or("") + ", " + std::to_string(params.size()) + " parameters");
}

void GazetteerExample(Check &c) {
  Gazetteer g = Gazetteer::Load(fs::path(INSTKG_DATA_DIR) / "gazetteer.json");
  auto spans = g.Extract(ReadFile(kFixtures / "ctd" / "articles" / "10.5194_bg-11-1799-2014.txt"));
  std::set<std::pair<std::string, std::string>> found;
  for (const auto &s : spans) {
    found.emplace(std::string(ToString(s.label)), EncodeUtf8(FoldCase(DecodeUtf8(s.surface))));
  }
  c.Expect(found.count({"Data", "backscatter"}) > 0, "Data backscatter");
  c.Expect(found.count({"Process", "hydroacoustic measurements"}) > 0,
           "Process hydroacoustic measurements");
  c.Expect(found.count({"Process", "water column studies"}) > 0, "Process water column studies");
  c.Note(std::to_string(spans.size()) + " spans");
}

void MetricsHarness(Check &c) {
  const fs::path data = INSTKG_TEST_DATA_DIR;
  GoldCorpus gold = LoadConll(data / "ner_gold.conll");
  GoldCorpus pred = LoadConll(data / "ner_pred.conll");
  c.Expect(gold.sentences.size() == 20, "20 sentences");
  Json hand = ReadJsonFile(data / "ner_hand_counts.json");
  EvalReport r = Evaluate(gold, TagSequences(pred));
  auto oracle_counts = oracle::SetIntersectionCounts(TagSequences(gold), TagSequences(pred));
  double worst = 0;
  auto near = [&](double got, double want, const std::string &what) {
    worst = std::max(worst, std::abs(got - want));
    c.Expect(std::abs(got - want) <= kMetricTolerance, what);
  };
  auto ratio = [](size_t a, size_t b) { return b == 0 ? 0.0 : double(a) / double(b); };
  const Json per_label = hand["per_label"];
  for (const auto &[name, h] : per_label.items()) {
    const size_t tp = h["tp"], fp = h["fp"], fn = h["fn"];
    const auto &m = r.per_label.at(ParseEntityLabel(name));
    c.Expect(m.tp == tp && m.fp == fp && m.fn == fn, name + " counts");
    const auto &o = oracle_counts[name];
    c.Expect(o.tp == tp && o.fp == fp && o.fn == fn, name + " oracle counts");
    const double p = ratio(tp, tp + fp), rc = ratio(tp, tp + fn);
    near(m.precision, p, name + " precision");
    near(m.recall, rc, name + " recall");
    near(m.f1, ratio(2 * tp, 2 * tp + fp + fn), name + " f1");
  }
  const size_t tp = hand["micro"]["tp"], fp = hand["micro"]["fp"], fn = hand["micro"]["fn"];
  near(r.micro_precision, ratio(tp, tp + fp), "micro precision");
  near(r.micro_recall, ratio(tp, tp + fn), "micro recall");
  near(r.micro_f1, ratio(2 * tp, 2 * tp + fp + fn), "micro f1");

  std::string table = RenderTable({{"A", r}, {"B", r}});
  std::istringstream lines(table);
  std::string header;
  while (std::getline(lines, header) && header.rfind("| Class", 0) != 0) {
  }
  size_t groups = 0;
  for (size_t pos = 0; (pos = header.find("F1 | Precision | Recall", pos)) != std::string::npos;
       ++pos) {
    ++groups;
  }
  c.Expect(groups == 2, "one F1 | Precision | Recall group per model");
  char buf[64];
  std::snprintf(buf, sizeof buf, "max abs error %.3g (tolerance %.0e)", worst, kMetricTolerance);
  c.Note(buf);
}

void StatsSchemaAndRecount(Check &c) {
  const fs::path root = kFixtures / "scale100";
  testing::ScopedTempDir dir;
  Json j = {{"harvest", {{"mode", "offline"}, {"fixtures_dir", "."}}},
            {"output_dir", (dir.path() / "out").string()}};
  BuildSummary summary = RunPipeline(PipelineConfig::FromJson(j, root));
  StatsReport got = ComputeStats(LoadRdfFile(summary.store_path), VocabularyMap::Default());
  oracle::FixtureCounts want = oracle::RecountFixtures(root);

  c.Expect(got.entities["Instruments"] == want.awi + want.datacite, "Instruments");
  c.Expect(got.entities["Instruments from AWI"] == want.awi, "Instruments from AWI");
  c.Expect(got.entities["Instruments from Datacite"] == want.datacite,
           "Instruments from Datacite");
  c.Expect(got.entities["Datasets produced by Instruments"] == want.datasets.size(),
           "Datasets produced by Instruments");
  c.Expect(got.entities["Articles linked with datasets"] == want.linked_articles.size(),
           "Articles linked with datasets");
  c.Expect(got.links["producedBy edges"] == want.produced.size(), "producedBy edges");
  c.Expect(got.links["paper-dataset pairs"] == want.article_dataset.size(), "paper-dataset pairs");

  std::set<std::string> names;
  for (const auto &[k, v] : got.entities) names.insert(k);
  c.Expect(names == std::set<std::string>(std::begin(kStatsEntityNames),
                                          std::end(kStatsEntityNames)),
           "report entity names");
  c.Note(std::to_string(got.entities["Instruments"]) + " instruments, " +
         std::to_string(got.entities["Datasets produced by Instruments"]) + " datasets, " +
         std::to_string(got.entities["Articles linked with datasets"]) +
         " articles; paper-scale counts are not reproducible offline");
}

void PropertySuites(Check &c) {
  ::testing::GTEST_FLAG(filter) = "TripleStoreProperty.*:Doi.*Property:BioProperty.*:QueryProperties.*";
  auto &listeners = ::testing::UnitTest::GetInstance()->listeners();
  delete listeners.Release(listeners.default_result_printer());
  const int status = RUN_ALL_TESTS();
  const auto *unit = ::testing::UnitTest::GetInstance();
  c.Expect(status == 0, "all property tests pass");
  std::set<std::string> suites;
  for (int i = 0; i < unit->total_test_suite_count(); ++i) {
    const auto *suite = unit->GetTestSuite(i);
    if (suite->test_to_run_count() > 0) suites.insert(suite->name());
    for (int k = 0; k < suite->total_test_count(); ++k) {
      const auto *info = suite->GetTestInfo(k);
      if (info->should_run() && info->result()->Failed()) {
        c.Expect(false, std::string(suite->name()) + "." + info->name());
      }
    }
  }
  for (const char *s : {"TripleStoreProperty", "Doi", "BioProperty", "QueryProperties"}) {
    c.Expect(suites.count(s) > 0, std::string("suite ") + s + " ran");
  }
  c.Note(std::to_string(unit->test_to_run_count()) + " property tests, " +
         std::to_string(unit->successful_test_count()) + " passed");
}

void QueryBudget(Check &c) {
  const std::string p = "http://orkg.org/orkg/predicate/";
  const Term type = Term::Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
  const Term label = Term::Iri("http://www.w3.org/2000/01/rdf-schema#label");
  const Term paper_class = Term::Iri("http://orkg.org/orkg/class/Paper");
  constexpr int kInstruments = 50;
  TripleStore synthetic;
  for (int i = 0; i < kInstruments; ++i) {
    synthetic.Insert(MakeTriple(Term::Iri(kR + "I" + std::to_string(i)), label,
                                Term::Literal("Instrument " + std::to_string(i))));
  }
  int papers = 0;
  while (synthetic.size() + 7 <= 100000) {
    const std::string n = std::to_string(papers);
    const Term paper = Term::Iri(kR + "P" + n), contribution = Term::Iri(kR + "C" + n),
               object = Term::Iri(kR + "D" + n);
    synthetic.Insert(MakeTriple(paper, type, paper_class));
    synthetic.Insert(MakeTriple(paper, label, Term::Literal("Paper " + n)));
    synthetic.Insert(MakeTriple(paper, Term::Iri(p + "P31"), contribution));
    synthetic.Insert(MakeTriple(contribution, Term::Iri(p + "P4017"), object));
    synthetic.Insert(MakeTriple(object, Term::Iri(p + "P146018"),
                                Term::Iri(kR + "I" + std::to_string(papers % kInstruments))));
    synthetic.Insert(MakeTriple(object, label, Term::Literal("Dataset " + n)));
    synthetic.Insert(MakeTriple(object, Term::Iri(p + "P2005"), Term::Literal("x" + n)));
    ++papers;
  }
  for (int i = 0; synthetic.size() < 100000; ++i) {
    synthetic.Insert(MakeTriple(Term::Iri(kR + "X" + std::to_string(i)), label,
                                Term::Literal("filler")));
  }
  const std::string text = SerializeNTriples(synthetic);
  std::string query = ReadFile(kFixtures / "queries" / "query1.rq");
  const std::string target = kR + "R741211";
  query.replace(query.find(target), target.size(), kR + "I0");

  auto start = std::chrono::steady_clock::now();
  TripleStore store = LoadNTriples(text);
  ResultTable got = EvaluateQuery(store, ParseQuery(query));
  const double elapsed = Seconds(start);
  const size_t expected = (papers + kInstruments - 1) / kInstruments;
  c.Expect(store.size() == 100000, "100000 triples loaded");
  c.Expect(got.rows.size() == expected, "row count");
  c.Expect(elapsed < kQueryBudgetSeconds, "load and query under budget");
  c.Note(std::to_string(store.size()) + " triples, " + std::to_string(got.rows.size()) +
         " rows, " + Fmt(elapsed) + " s (budget " + Fmt(kQueryBudgetSeconds) + " s)");
}

}  // namespace
}  // namespace instkg

int main(int argc, char **argv) {
  ::testing::InitGoogleTest(&argc, argv);
  const std::vector<std::pair<const char *, std::function<void(instkg::Check &)>>> criteria = {
      {"ctd_graph_shape_and_replay", instkg::GraphShape},
      {"example_queries_match_oracle", instkg::ExampleQueries},
      {"analyzer_running_example", instkg::AnalyzerExample},
      {"gazetteer_running_example", instkg::GazetteerExample},
      {"metrics_hand_counts", instkg::MetricsHarness},
      {"stats_schema_and_recount", instkg::StatsSchemaAndRecount},
      {"property_suites", instkg::PropertySuites},
      {"load_and_query_100k_triples", instkg::QueryBudget},
  };
  int failed = 0;
  for (const auto &[name, fn] : criteria) {
    instkg::Check check;
    try {
      fn(check);
    } catch (const std::exception &e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", check.ok() ? "PASS" : "FAIL", name, check.Detail().c_str());
    std::fflush(stdout);
    if (!check.ok()) ++failed;
  }
  return failed;
}
