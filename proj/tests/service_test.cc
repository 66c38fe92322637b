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

#include "instkg/service.h"

#include <gtest/gtest.h>
#include <httplib.h>

#include <cstdio>
#include <thread>

#include "instkg/io.h"
#include "instkg/pipeline.h"
#include "instkg/rdf_io.h"
#include "test_util.h"

namespace instkg {
namespace {
namespace fs = std::filesystem;

std::string Query1() {
  return ReadFile(fs::path(INSTKG_FIXTURES_DIR) / "queries" / "query1.rq");
}

// Builds the fixture graph once per test binary.
const fs::path &FixtureGraph() {
  static testing::ScopedTempDir *dir = new testing::ScopedTempDir();
  static const fs::path path = [] {
    Json j = {{"harvest", {{"mode", "offline"}, {"fixtures_dir", "."}}},
              {"registry_seed", "registry_seed.json"},
              {"output_dir", (dir->path() / "out").string()}};
    return RunPipeline(PipelineConfig::FromJson(j, testing::CtdFixtures())).store_path;
  }();
  return path;
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    store_ = std::make_shared<const TripleStore>(LoadRdfFile(FixtureGraph()));
    service_ = std::make_unique<SparqlService>(store_);
    port_ = service_->Bind("127.0.0.1", 0);
    thread_ = std::thread([this] { service_->Run(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int i = 0; i < 100 && !client_->Get("/healthz"); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }
  void TearDown() override {
    service_->Stop();
    thread_.join();
  }

  std::shared_ptr<const TripleStore> store_;
  std::unique_ptr<SparqlService> service_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(ServiceTest, HealthAndQueries) {
  auto health = client_->Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->body, "ok");

  const std::string expected =
      SerializeResults(EvaluateQuery(*store_, ParseQuery(Query1())), ResultFormat::kJson);
  auto post = client_->Post("/sparql", Query1(), "application/sparql-query");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 200);
  EXPECT_EQ(post->body, expected);
  EXPECT_EQ(post->get_header_value("Content-Type"), "application/sparql-results+json");

  auto get = client_->Get("/sparql?query=" + httplib::detail::encode_query_param(Query1()));
  ASSERT_TRUE(get);
  EXPECT_EQ(get->body, expected);

  auto tsv = client_->Post("/sparql", {{"Accept", "text/tab-separated-values"}}, Query1(),
                           "application/sparql-query");
  ASSERT_TRUE(tsv);
  EXPECT_EQ(tsv->body,
            SerializeResults(EvaluateQuery(*store_, ParseQuery(Query1())), ResultFormat::kTsv));

  httplib::Params form = {{"query", Query1()}};
  auto posted_form = client_->Post("/sparql", form);
  ASSERT_TRUE(posted_form);
  EXPECT_EQ(posted_form->body, expected);
}

TEST_F(ServiceTest, Errors) {
  auto missing = client_->Get("/sparql");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 400);

  auto syntax = client_->Post("/sparql", "SELECT ?s WHERE { ?s ?p", "application/sparql-query");
  ASSERT_TRUE(syntax);
  EXPECT_EQ(syntax->status, 400);
  EXPECT_NE(syntax->body.find("offset"), std::string::npos);

  auto unsupported = client_->Post("/sparql", "SELECT ?s WHERE { ?s ?p ?o } GROUP BY ?s",
                                   "application/sparql-query");
  ASSERT_TRUE(unsupported);
  EXPECT_EQ(unsupported->status, 400);
  EXPECT_EQ(unsupported->body.rfind("unsupported:", 0), 0u) << unsupported->body;

  auto unknown = client_->Get("/nothing");
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 404);
}

TEST_F(ServiceTest, ConcurrentClients) {
  const std::string expected =
      SerializeResults(EvaluateQuery(*store_, ParseQuery(Query1())), ResultFormat::kJson);
  std::vector<std::thread> clients;
  std::atomic<int> ok{0};
  for (int i = 0; i < 8; ++i) {
    clients.emplace_back([&] {
      httplib::Client c("127.0.0.1", port_);
      for (int k = 0; k < 5; ++k) {
        auto r = c.Post("/sparql", Query1(), "application/sparql-query");
        if (r && r->status == 200 && r->body == expected) ++ok;
      }
    });
  }
  for (auto &t : clients) t.join();
  EXPECT_EQ(ok.load(), 40);
}

TEST_F(ServiceTest, PortInUse) {
  SparqlService other(store_);
  EXPECT_THROW(other.Bind("127.0.0.1", port_), Error);
}

std::string RunCli(const std::string &args, int *status) {
  std::string cmd = std::string(INSTKG_CLI) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  *status = WEXITSTATUS(pclose(pipe));
  return out;
}

TEST_F(ServiceTest, CliAndHttpReturnIdenticalBytes) {
  const fs::path q = fs::path(INSTKG_FIXTURES_DIR) / "queries";
  for (const char *name : {"query1.rq", "query2.rq", "query3.rq"}) {
    for (const char *format : {"json", "tsv"}) {
      int status = -1;
      std::string cli = RunCli("query --store " + FixtureGraph().string() + " --file " +
                                   (q / name).string() + " --format " + format,
                               &status);
      EXPECT_EQ(status, 0);
      httplib::Headers headers;
      if (std::string(format) == "tsv") headers = {{"Accept", "text/tab-separated-values"}};
      auto http = client_->Post("/sparql", headers, ReadFile(q / name), "application/sparql-query");
      ASSERT_TRUE(http);
      EXPECT_EQ(cli, http->body) << name << " " << format;
    }
  }
}

TEST(Cli, ExitCodes) {
  int status = -1;
  RunCli("", &status);
  EXPECT_EQ(status, 1);
  RunCli("query --store /nonexistent.nt --query 'SELECT ?s WHERE { ?s ?p ?o }'", &status);
  EXPECT_EQ(status, 2);
  RunCli("query --store " + FixtureGraph().string() + " --query 'SELECT * WHERE { ?s ?p ?o }'",
         &status);
  EXPECT_EQ(status, 1);
  RunCli("build --config /nonexistent.json", &status);
  EXPECT_EQ(status, 1);

  testing::ScopedTempDir dir;
  fs::create_directories(dir.path() / "fx" / "awi");
  WriteFile(dir.path() / "fx" / "awi" / "instruments.json", "[]");
  WriteFile(dir.path() / "cfg.json",
            R"({"harvest": {"mode": "offline", "fixtures_dir": "fx"}, "output_dir": "out"})");
  RunCli("build --config " + (dir.path() / "cfg.json").string(), &status);
  EXPECT_EQ(status, 2);
  EXPECT_FALSE(fs::exists(dir.path() / "out" / "graph.nt"));

  std::string stats = RunCli("stats --store " + FixtureGraph().string(), &status);
  EXPECT_EQ(status, 0);
  EXPECT_TRUE(Json::parse(stats).contains("entities"));
}

}  // namespace
}  // namespace instkg
