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

// instkg: command-line front end.
//
//   instkg build   --config pipeline.json [--out DIR] [--resume] [--reuse-registry]
//   instkg harvest --config pipeline.json [--source AWI] [--out records.json]
//   instkg analyze --file dataset.tab [--aliases aliases.json]
//   instkg extract --text article.txt [--gazetteer g.json | --plugin "cmd args"]
//   instkg stats   --store graph.nt [--format json|text]
//   instkg query   --store graph.nt (--file q.rq | --query TEXT) [--format json|tsv]
//   instkg serve   --store graph.nt [--host 127.0.0.1] [--port 8080]
//   instkg eval    --gold gold.conll --pred pred.conll [--model NAME] [--format json|table]
//
// Exit codes: 0 success, 1 usage (bad flags, config or query), 2 failure
// while running.

#include <signal.h>

#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "instkg/error.h"
#include "instkg/extraction.h"
#include "instkg/harvest.h"
#include "instkg/io.h"
#include "instkg/ner_eval.h"
#include "instkg/pipeline.h"
#include "instkg/query.h"
#include "instkg/rdf_io.h"
#include "instkg/service.h"
#include "instkg/stats.h"
#include "instkg/tabular.h"

namespace instkg {
namespace {

constexpr int kUsage = 1;
constexpr int kFailure = 2;

void Emit(const std::string &text, const std::string &out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    WriteFile(out_path, text.back() == '\n' ? text : text + "\n");
  }
}

std::vector<std::string> SplitCommand(const std::string &command) {
  std::istringstream in(command);
  std::vector<std::string> argv;
  for (std::string word; in >> word;) argv.push_back(word);
  return argv;
}

int Main(int argc, char **argv) {
  CLI::App app{"Instrument knowledge graph toolkit"};
  app.require_subcommand(1);

  std::string config_path, out, source, file, aliases, text_path, gazetteer, plugin;
  std::string store_path, query_text, format, host = "127.0.0.1", gold, pred;
  std::string model = "model";
  bool resume = false, reuse_registry = false;
  int port = 8080;

  auto *build = app.add_subcommand("build", "Run the full pipeline");
  build->add_option("--config", config_path, "Pipeline config (JSON)")->required();
  build->add_option("--out", out, "Output directory, overrides the config");
  build->add_flag("--resume", resume, "Reuse cached stages from the MANIFEST");
  build->add_flag("--reuse-registry", reuse_registry, "Keep IRIs minted by the last run");

  auto *harvest = app.add_subcommand("harvest", "Harvest raw instrument records");
  harvest->add_option("--config", config_path, "Pipeline config (JSON)")->required();
  harvest->add_option("--source", source, "AWI or DataCite; default all configured");
  harvest->add_option("--out", out, "Write records here instead of stdout");

  auto *analyze = app.add_subcommand("analyze", "Analyze one tabular dataset");
  analyze->add_option("--file", file, "Tab-delimited dataset")->required();
  analyze->add_option("--aliases", aliases, "Parameter alias table");

  auto *extract = app.add_subcommand("extract", "Extract entities from a text file");
  extract->add_option("--text", text_path, "UTF-8 text file")->required();
  auto *gaz_opt = extract->add_option("--gazetteer", gazetteer, "Gazetteer JSON");
  extract->add_option("--plugin", plugin, "Extractor plug-in command line")->excludes(gaz_opt);

  auto *stats = app.add_subcommand("stats", "Statistics of a stored graph");
  stats->add_option("--store", store_path, "N-Triples or Turtle file")->required();
  stats->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto *query = app.add_subcommand("query", "Run a SPARQL query over a stored graph");
  query->add_option("--store", store_path, "N-Triples or Turtle file")->required();
  auto *file_opt = query->add_option("--file", file, "Query file");
  query->add_option("--query", query_text, "Query text")->excludes(file_opt);
  query->add_option("--format", format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));

  auto *serve = app.add_subcommand("serve", "Serve a stored graph over HTTP");
  serve->add_option("--store", store_path, "N-Triples or Turtle file")->required();
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port, 0 for any")->check(CLI::Range(0, 65535));

  auto *eval = app.add_subcommand("eval", "Score predicted BIO tags against gold");
  eval->add_option("--gold", gold, "Gold CoNLL file")->required();
  eval->add_option("--pred", pred, "Predicted CoNLL file")->required();
  eval->add_option("--model", model, "Model name for the table header");
  eval->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*build) {
      PipelineConfig config = PipelineConfig::Load(config_path);
      if (!out.empty()) config.output_dir = std::filesystem::absolute(out);
      config.resume = config.resume || resume;
      config.reuse_registry = config.reuse_registry || reuse_registry;
      BuildSummary summary = RunPipeline(config);
      std::cout << summary.ToJson().dump(2) << '\n';
    } else if (*harvest) {
      PipelineConfig config = PipelineConfig::Load(config_path);
      std::vector<SourceName> sources = config.instrument_sources;
      if (!source.empty()) sources = {ParseSourceName(source)};
      Harvester harvester(config.harvest);
      Json records = Json::array();
      for (SourceName s : sources) {
        for (const auto &r : harvester.HarvestInstruments(s)) records.push_back(r);
      }
      Emit(records.dump(2), out);
    } else if (*analyze) {
      const ParameterAliases a =
          aliases.empty() ? ParameterAliases::Default() : ParameterAliases::Load(aliases);
      Json details = AnalyzeDataset(ParseTabular(ReadFile(file)), a);
      Emit(details.dump(2), "");
    } else if (*extract) {
      ExtractorConfig config;
      if (!plugin.empty()) {
        config.kind = ExtractorConfig::Kind::kExternalProcess;
        config.command = SplitCommand(plugin);
      } else {
        config.gazetteer_path = gazetteer.empty()
                                    ? std::filesystem::path(INSTKG_DATA_DIR) / "gazetteer.json"
                                    : std::filesystem::path(gazetteer);
      }
      Json spans = ExtractEntities(ReadFile(text_path), config);
      Emit(spans.dump(2), "");
    } else if (*stats) {
      StatsReport report = ComputeStats(LoadRdfFile(store_path), VocabularyMap::Default());
      Emit(format == "text" ? report.ToText() : report.ToJson().dump(2), "");
    } else if (*query) {
      if (file.empty() && query_text.empty()) {
        std::cerr << "query: one of --file or --query is required\n";
        return kUsage;
      }
      const std::string text = file.empty() ? query_text : ReadFile(file);
      const ResultFormat f = format == "tsv" ? ResultFormat::kTsv : ResultFormat::kJson;
      const TripleStore store = LoadRdfFile(store_path);
      HttpReply reply = AnswerQuery(store, text, f);
      if (reply.status != 200) {
        std::cerr << reply.body;
        return kUsage;
      }
      std::cout << reply.body;
    } else if (*serve) {
      auto store = std::make_shared<const TripleStore>(LoadRdfFile(store_path));
      // Block the stop signals before the server threads start so that only
      // the waiting thread below receives them.
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
      SparqlService service(store);
      const int bound = service.Bind(host, port);
      std::cerr << "serving " << store->size() << " triples on http://" << host << ":" << bound
                << "/sparql\n";
      std::thread server([&] { service.Run(); });
      int sig = 0;
      sigwait(&stop_signals, &sig);
      service.Stop();
      server.join();
    } else if (*eval) {
      GoldCorpus g = LoadConll(gold);
      GoldCorpus p = LoadConll(pred);
      EvalReport report = Evaluate(g, TagSequences(p));
      Emit(format == "table" ? RenderTable({{model, report}}) : ToJson(report).dump(2), "");
    }
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const StageFailure &e) {
    std::cerr << "pipeline failed: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return 0;
}

}  // namespace
}  // namespace instkg

int main(int argc, char **argv) { return instkg::Main(argc, argv); }
