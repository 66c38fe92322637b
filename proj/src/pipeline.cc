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

#include "instkg/pipeline.h"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "instkg/error.h"
#include "instkg/gazetteer.h"
#include "instkg/harmonizer.h"
#include "instkg/io.h"
#include "instkg/kernels.h"
#include "instkg/kg_builder.h"
#include "instkg/rdf_io.h"
#include "instkg/tabular.h"
#include "instkg/triple_store.h"

namespace instkg {
namespace fs = std::filesystem;

namespace {

constexpr char kManifest[] = "MANIFEST.json";
constexpr char kStagesDir[] = "stages";
constexpr char kGraphFile[] = "graph.nt";
constexpr char kRegistryFile[] = "registry.json";
constexpr char kStatsFile[] = "stats.json";
constexpr char kStatsText[] = "stats.txt";
constexpr char kExportsDir[] = "exports";

fs::path Resolve(const fs::path &base, const std::string &p) {
  if (p.empty()) return {};
  fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

fs::path RequireFile(const fs::path &base, const Json &j, const char *key) {
  if (!j.contains(key)) return {};
  fs::path p = Resolve(base, j.at(key).get<std::string>());
  if (!fs::is_regular_file(p)) {
    throw ConfigError(std::string(key) + ": no such file " + p.string());
  }
  return p;
}

std::vector<std::string> ToLines(const std::vector<Triple> &triples) {
  std::vector<std::string> lines;
  lines.reserve(triples.size());
  for (const auto &t : triples) lines.push_back(t.ToNTriples());
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  return lines;
}

std::vector<Triple> FromLines(const Json &lines) {
  std::string text;
  for (const auto &l : lines) {
    text += l.get<std::string>();
    text += '\n';
  }
  return parallel::ParseNTriples(text);
}

class PipelineRun {
 public:
  explicit PipelineRun(const PipelineConfig &config)
      : config_(config),
        out_(config.output_dir),
        stages_dir_(config.output_dir / kStagesDir) {
    fingerprint_ = config.resolved.dump();
    if (config.reuse_registry && fs::is_regular_file(out_ / kRegistryFile)) {
      previous_registry_ = ReadJsonFile(out_ / kRegistryFile);
      fingerprint_ += previous_registry_->dump();
    }
    if (config.resume && fs::is_regular_file(out_ / kManifest)) {
      old_manifest_ = ReadJsonFile(out_ / kManifest);
    }
    // Final outputs never survive into a new run.
    for (const char *name : {kManifest, kGraphFile, kRegistryFile, kStatsFile, kStatsText}) {
      fs::remove(out_ / name);
    }
    fs::remove_all(out_ / kExportsDir);
    if (!config.resume) fs::remove_all(stages_dir_);
    fs::create_directories(stages_dir_);
    manifest_ = {{"stages", Json::object()}, {"completed", Json::array()}};
    WriteManifest();
  }

  BuildSummary Run() {
    Harvester harvester(config_.harvest);

    const Json harvested = Stage("harvest", [&] { return Harvest(harvester); });
    const Json harmonized = Stage("harmonize", [&] { return HarmonizeAll(harvested); });
    const Json linked = Stage("link", [&] { return Link(harvester, harmonized); });
    const LinkGraph graph = linked.get<LinkGraph>();
    const Json analyzed = Stage("analyze", [&] { return Analyze(harvester, graph); });
    const Json extracted = Stage("extract", [&] { return Extract(harvester, graph); });
    const Json classified = Stage("classify", [&] { return Classify(graph); });
    const Json built = Stage("build", [&] { return Build(graph, analyzed, extracted, classified); });
    Stage("store", [&] { return Store(built); }, /*cacheable=*/false);

    summary_.store_path = out_ / kGraphFile;
    summary_.registry_path = out_ / kRegistryFile;
    summary_.exports_dir = out_ / kExportsDir;
    summary_.stats_path = out_ / kStatsFile;
    summary_.manifest_path = out_ / kManifest;
    for (const char *key : {"rejected", "conflicts"}) {
      for (const auto &w : harmonized.at(key)) summary_.warnings.push_back("harmonize: " + w.dump());
    }
    for (const auto &d : graph.dangling) {
      summary_.warnings.push_back("link: dangling " + std::string(ToString(d.kind)) + " " + d.src +
                                  " -> " + d.dst);
    }
    for (const auto &s : analyzed.at("skipped")) summary_.warnings.push_back("analyze: " + s.dump());
    return summary_;
  }

 private:
  Json Stage(const std::string &name, const std::function<Json()> &compute,
             bool cacheable = true) {
    const std::string input = Fnv1aHex(fingerprint_ + "|" + name + "|" + previous_checksum_);
    const fs::path file = stages_dir_ / (name + ".json");
    if (cacheable && config_.resume && old_manifest_) {
      const Json &stages = (*old_manifest_)["stages"];
      if (stages.contains(name) && stages[name].value("input", "") == input &&
          fs::is_regular_file(file)) {
        std::string text = ReadFile(file);
        const std::string checksum = stages[name].value("checksum", "");
        if (Fnv1aHex(text) == checksum) {
          Record(name, input, checksum);
          summary_.stages_cached.push_back(name);
          return Json::parse(text);
        }
      }
    }
    Json out;
    try {
      out = compute();
    } catch (const StageFailure &) {
      throw;
    } catch (const std::exception &e) {
      throw StageFailure(name, e.what());
    }
    const std::string text = out.dump(1) + "\n";
    WriteFile(file, text);
    Record(name, input, Fnv1aHex(text));
    summary_.stages_run.push_back(name);
    return out;
  }

  void Record(const std::string &name, const std::string &input, const std::string &checksum) {
    manifest_["stages"][name] = {{"input", input}, {"checksum", checksum}};
    manifest_["completed"].push_back(name);
    previous_checksum_ = checksum;
    WriteManifest();
  }

  void WriteManifest() const { WriteJsonFile(out_ / kManifest, manifest_); }

  Json Harvest(Harvester &harvester) const {
    Json records = Json::array();
    for (SourceName source : config_.instrument_sources) {
      for (const auto &r : harvester.HarvestInstruments(source)) records.push_back(r);
    }
    return {{"records", records}};
  }

  Json HarmonizeAll(const Json &harvested) const {
    std::map<SourceName, FieldMap> maps;
    for (SourceName s : config_.instrument_sources) {
      auto it = config_.fieldmaps.find(s);
      maps.emplace(s, it == config_.fieldmaps.end() ? FieldMap::Default(s)
                                                    : FieldMap::Load(it->second));
    }
    std::vector<InstrumentRecord> records;
    Json rejected = Json::array();
    size_t index = 0;
    for (const auto &j : harvested.at("records")) {
      const RawRecord raw = j.get<RawRecord>();
      try {
        records.push_back(Harmonize(raw, maps.at(raw.source)));
      } catch (const HarmonizationFailure &e) {
        rejected.push_back({{"index", index}, {"source", ToString(raw.source)}, {"reason", e.what()}});
      } catch (const MalformedPayload &e) {
        rejected.push_back({{"index", index}, {"source", ToString(raw.source)}, {"reason", e.what()}});
      }
      ++index;
    }
    std::vector<ConflictingNames> conflicts;
    std::vector<InstrumentRecord> merged = Deduplicate(records, &conflicts);
    Json conflict_json = Json::array();
    for (const auto &c : conflicts) conflict_json.push_back({{"pid", c.pid}, {"names", c.names}});
    return {{"instruments", merged}, {"rejected", rejected}, {"conflicts", conflict_json}};
  }

  Json Link(Harvester &harvester, const Json &harmonized) const {
    const auto instruments = harmonized.at("instruments").get<std::vector<InstrumentRecord>>();
    std::vector<DatasetRecord> datasets;
    for (auto &batch : harvester.FetchDatasetsForInstruments(instruments)) {
      for (auto &d : batch) datasets.push_back(std::move(d));
    }
    std::vector<ArticleRecord> articles;
    for (const auto &d : datasets) {
      for (auto &a : harvester.FetchArticlesForDataset(d)) articles.push_back(std::move(a));
    }
    // Instrument papers go last so that a fuller record of the same article
    // wins the merge.
    std::set<Doi> instrument_papers;
    for (const auto &i : instruments) {
      instrument_papers.insert(i.related_article_pids.begin(), i.related_article_pids.end());
    }
    std::vector<ArticleRecord> stubs;
    for (const Doi &doi : instrument_papers) {
      ArticleRecord stub;
      stub.doi = doi;
      for (auto &a : harvester.FetchCitingArticles(stub)) articles.push_back(std::move(a));
      stubs.push_back(std::move(stub));
    }
    articles.insert(articles.end(), stubs.begin(), stubs.end());
    return BuildLinkGraph(instruments, datasets, articles);
  }

  Json Analyze(Harvester &harvester, const LinkGraph &graph) const {
    const ParameterAliases aliases = config_.aliases_path.empty()
                                         ? ParameterAliases::Default()
                                         : ParameterAliases::Load(config_.aliases_path);
    std::vector<TabularDataset> tables;
    std::vector<std::string> dois;
    Json skipped = Json::array();
    for (const auto &[doi, dataset] : graph.datasets) {
      auto content = harvester.FetchDatasetContent(dataset);
      if (!content) continue;
      try {
        tables.push_back(ParseTabular(*content));
        dois.push_back(doi);
      } catch (const Error &e) {
        skipped.push_back({{"doi", doi}, {"reason", e.what()}});
      }
    }
    auto details = parallel::AnalyzeAll(tables, aliases);
    Json out = Json::object();
    for (size_t i = 0; i < details.size(); ++i) {
      details[i].dataset_doi = Doi::Normalize(dois[i]);
      out[dois[i]] = details[i];
    }
    return {{"details", out}, {"skipped", skipped}};
  }

  Json Extract(Harvester &harvester, const LinkGraph &graph) const {
    std::vector<std::string> dois, texts;
    Json skipped = Json::array();
    for (const auto &[doi, article] : graph.articles) {
      try {
        texts.push_back(harvester.ReadFulltext(harvester.ResolveFulltext(article)));
        dois.push_back(doi);
      } catch (const FulltextUnavailable &e) {
        skipped.push_back({{"doi", doi}, {"reason", e.what()}});
      }
    }
    std::vector<std::vector<EntitySpan>> spans;
    if (config_.extractor.kind == ExtractorConfig::Kind::kGazetteer) {
      spans = parallel::ExtractAll(texts, Gazetteer::Load(config_.extractor.gazetteer_path));
    } else {
      auto extractor = MakeExtractor(config_.extractor);
      for (const auto &t : texts) spans.push_back(extractor->Extract(t));
    }
    Json out = Json::object();
    for (size_t i = 0; i < dois.size(); ++i) out[dois[i]] = spans[i];
    return {{"entities", out}, {"skipped", skipped}};
  }

  Json Classify(const LinkGraph &graph) const {
    auto classifier = MakeClassifier(config_.classifier);
    const std::vector<std::string> labels =
        (config_.classifier.taxonomy_path.empty()
             ? KeywordClassifier::Default()
             : KeywordClassifier::Load(config_.classifier.taxonomy_path))
            .labels();
    Json out = Json::object();
    for (const auto &[doi, article] : graph.articles) {
      if (article.title.empty() && article.abstract.empty()) continue;
      FieldScore score = classifier->Classify(article.title, article.abstract, labels);
      if (score.score <= 0) continue;
      out[doi] = {{"field", score.field}, {"score", score.score}};
    }
    return {{"fields", out}};
  }

  const VocabularyMap &Vocabulary() {
    if (!vocab_) {
      vocab_ = config_.vocabulary_path.empty() ? VocabularyMap::Default()
                                               : VocabularyMap::Load(config_.vocabulary_path);
    }
    return *vocab_;
  }

  Json Build(const LinkGraph &graph, const Json &analyzed, const Json &extracted,
             const Json &classified) {
    const VocabularyMap &vocab = Vocabulary();
    IriRegistry registry = previous_registry_ ? IriRegistry::FromJson(*previous_registry_)
                                              : IriRegistry();
    if (!config_.registry_seed_path.empty()) {
      registry.SeedFrom(ReadJsonFile(config_.registry_seed_path));
    }
    std::vector<Triple> all;
    for (const auto &[pid, instrument] : graph.instruments) {
      auto t = BuildInstrumentTriples(instrument, vocab, registry);
      all.insert(all.end(), t.begin(), t.end());
    }
    for (const auto &[doi, dataset] : graph.datasets) {
      auto t = BuildDatasetTriples(dataset, vocab, registry);
      all.insert(all.end(), t.begin(), t.end());
    }
    const Json &details = analyzed.at("details");
    const Json &entities = extracted.at("entities");
    const Json &fields = classified.at("fields");
    Json papers = Json::object();
    for (const auto &[doi, article] : graph.articles) {
      PaperInput input;
      input.article = article;
      if (auto it = fields.find(doi); it != fields.end()) {
        input.article.research_field = it->at("field").get<std::string>();
      }
      for (const Doi &d : article.linked_dataset_dois) {
        auto ds = graph.datasets.find(d.value());
        if (ds == graph.datasets.end()) continue;
        ContributionInput c;
        c.dataset = ds->second;
        if (auto it = details.find(d.value()); it != details.end()) {
          c.details = it->get<ExperimentDetails>();
        } else {
          c.details.dataset_doi = d;
        }
        input.contributions.push_back(std::move(c));
      }
      if (auto it = entities.find(doi); it != entities.end()) {
        input.entities = it->get<std::vector<EntitySpan>>();
      }
      if (input.contributions.empty() && input.entities.empty()) continue;
      auto t = BuildPaperTriples(input, vocab, registry);
      papers[doi] = ToLines(t);
      all.insert(all.end(), t.begin(), t.end());
    }
    return {{"registry", registry.ToJson()}, {"papers", papers}, {"graph", ToLines(all)}};
  }

  Json Store(const Json &built) {
    const VocabularyMap &vocab = Vocabulary();
    TripleStore store;
    const std::vector<Triple> triples = FromLines(built.at("graph"));
    store.InsertAll(triples);
    const std::string nt = SerializeNTriples(store);
    WriteFile(out_ / kGraphFile, nt);
    WriteJsonFile(out_ / kRegistryFile, built.at("registry"));
    Json exports = Json::object();
    for (const auto &[doi, lines] : built.at("papers").items()) {
      const std::vector<Triple> paper = FromLines(lines);
      const std::string name = DoiFileStem(Doi::Normalize(doi)) + ".json";
      WriteJsonFile(out_ / kExportsDir / name, ExportOrkgPayload(paper, vocab));
      exports[doi] = name;
    }
    summary_.stats = ComputeStats(store, vocab);
    WriteJsonFile(out_ / kStatsFile, summary_.stats.ToJson());
    WriteFile(out_ / kStatsText, summary_.stats.ToText());
    summary_.triples = store.size();
    return {{"graph_checksum", Fnv1aHex(nt)}, {"triples", store.size()}, {"exports", exports}};
  }

  const PipelineConfig &config_;
  fs::path out_;
  fs::path stages_dir_;
  std::string fingerprint_;
  std::string previous_checksum_;
  std::optional<Json> previous_registry_;
  std::optional<Json> old_manifest_;
  std::optional<VocabularyMap> vocab_;
  Json manifest_;
  BuildSummary summary_;
};

}  // namespace

const std::vector<std::string> &PipelineStages() {
  static const std::vector<std::string> k = {"harvest", "harmonize", "link",  "analyze",
                                             "extract", "classify",  "build", "store"};
  return k;
}

PipelineConfig PipelineConfig::FromJson(const Json &j, const fs::path &base_dir) {
  if (!j.is_object()) throw ConfigError("pipeline config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "harvest",  "instrument_sources", "fieldmaps",     "extractor",      "classifier",
      "vocabulary", "aliases",          "registry_seed", "reuse_registry", "output_dir",
      "resume"};
  for (const auto &[key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown pipeline config key '" + key + "'");
  }
  PipelineConfig c;
  try {
    c.harvest = HarvestConfig::FromJson(j.value("harvest", Json::object()), base_dir);
    if (j.contains("instrument_sources")) {
      c.instrument_sources.clear();
      for (const auto &s : j.at("instrument_sources")) {
        SourceName name = ParseSourceName(s.get<std::string>());
        if (name != SourceName::kAWI && name != SourceName::kDataCite) {
          throw ConfigError("instrument_sources: " + s.get<std::string>() +
                            " is not an instrument source");
        }
        c.instrument_sources.push_back(name);
      }
    }
    const Json fieldmaps = j.value("fieldmaps", Json::object());
    for (const auto &[source, path] : fieldmaps.items()) {
      c.fieldmaps[ParseSourceName(source)] = RequireFile(base_dir, fieldmaps, source.c_str());
    }

    Json extractor = j.value("extractor", Json{{"kind", "gazetteer"}});
    if (extractor.value("kind", "gazetteer") == "gazetteer") {
      extractor["gazetteer_path"] =
          extractor.contains("gazetteer_path")
              ? RequireFile(base_dir, extractor, "gazetteer_path").string()
              : (fs::path(INSTKG_DATA_DIR) / "gazetteer.json").string();
    } else if (extractor.contains("command") && extractor["command"].is_array() &&
               !extractor["command"].empty()) {
      std::string program = extractor["command"][0].get<std::string>();
      if (program.find('/') != std::string::npos) {
        extractor["command"][0] = Resolve(base_dir, program).string();
      }
    }
    c.extractor = ExtractorConfig::FromJson(extractor);

    Json classifier = j.value("classifier", Json::object());
    if (classifier.contains("taxonomy_path")) {
      classifier["taxonomy_path"] = RequireFile(base_dir, classifier, "taxonomy_path").string();
    }
    c.classifier = ClassifierConfig::FromJson(classifier);

    c.vocabulary_path = RequireFile(base_dir, j, "vocabulary");
    c.aliases_path = RequireFile(base_dir, j, "aliases");
    c.registry_seed_path = RequireFile(base_dir, j, "registry_seed");
    c.reuse_registry = j.value("reuse_registry", false);
    c.resume = j.value("resume", false);
    if (!j.contains("output_dir")) throw ConfigError("output_dir is required");
    c.output_dir = Resolve(base_dir, j.at("output_dir").get<std::string>());

    // Loaded once here so that malformed inputs fail before the first stage.
    if (!c.vocabulary_path.empty()) VocabularyMap::Load(c.vocabulary_path);
    if (!c.aliases_path.empty()) ParameterAliases::Load(c.aliases_path);
    if (!c.registry_seed_path.empty()) IriRegistry().SeedFrom(ReadJsonFile(c.registry_seed_path));
    for (const auto &[source, path] : c.fieldmaps) {
      if (FieldMap::Load(path).source != source) {
        throw ConfigError("fieldmaps: " + path.string() + " is not a map for " +
                          std::string(ToString(source)));
      }
    }
    if (c.extractor.kind == ExtractorConfig::Kind::kGazetteer) {
      Gazetteer::Load(c.extractor.gazetteer_path);
    }

    Json resolved = j;
    resolved["extractor"] = extractor;
    resolved["classifier"] = classifier;
    resolved["resume"] = false;
    for (const char *key : {"vocabulary", "aliases", "registry_seed"}) {
      if (j.contains(key)) resolved[key] = Resolve(base_dir, j.at(key)).string();
    }
    if (j.contains("harvest")) {
      Json h = j.at("harvest");
      if (h.contains("fixtures_dir")) h["fixtures_dir"] = Resolve(base_dir, h["fixtures_dir"]).string();
      resolved["harvest"] = h;
    }
    resolved.erase("output_dir");
    c.resolved = resolved;
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &e) {
    throw ConfigError(e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::Load(const fs::path &path) {
  Json j;
  try {
    j = ReadJsonFile(path);
  } catch (const std::exception &e) {
    throw ConfigError(e.what());
  }
  return FromJson(j, fs::absolute(path).parent_path());
}

Json BuildSummary::ToJson() const {
  return {{"store", store_path.string()},
          {"registry", registry_path.string()},
          {"exports", exports_dir.string()},
          {"stats_file", stats_path.string()},
          {"manifest", manifest_path.string()},
          {"triples", triples},
          {"stats", stats.ToJson()},
          {"stages_run", stages_run},
          {"stages_cached", stages_cached},
          {"warnings", warnings}};
}

BuildSummary RunPipeline(const PipelineConfig &config) {
  if (config.output_dir.empty()) throw ConfigError("output_dir is required");
  PipelineRun run(config);
  return run.Run();
}

}  // namespace instkg
