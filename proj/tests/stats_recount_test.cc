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

#include <gtest/gtest.h>

#include "instkg/pipeline.h"
#include "instkg/rdf_io.h"
#include "instkg/stats.h"
#include "oracles/fixture_recount.h"
#include "test_util.h"

namespace instkg {
namespace {
namespace fs = std::filesystem;

TEST(ScaleFixture, StatsEqualBruteForceRecount) {
  const fs::path root = fs::path(INSTKG_FIXTURES_DIR) / "scale100";
  testing::ScopedTempDir dir;
  Json j = {{"harvest", {{"mode", "offline"}, {"fixtures_dir", "."}}},
            {"output_dir", (dir.path() / "out").string()}};
  BuildSummary summary = RunPipeline(PipelineConfig::FromJson(j, root));

  oracle::FixtureCounts want = oracle::RecountFixtures(root);
  ASSERT_EQ(want.datasets.size(), 520u);
  ASSERT_EQ(want.linked_articles.size(), 43u);

  StatsReport got = ComputeStats(LoadRdfFile(summary.store_path), VocabularyMap::Default());
  EXPECT_EQ(got, summary.stats);
  EXPECT_EQ(got.entities["Instruments"], want.awi + want.datacite);
  EXPECT_EQ(got.entities["Instruments from AWI"], want.awi);
  EXPECT_EQ(got.entities["Instruments from Datacite"], want.datacite);
  EXPECT_EQ(got.entities["Datasets produced by Instruments"], want.datasets.size());
  EXPECT_EQ(got.entities["Articles linked with datasets"], want.linked_articles.size());
  EXPECT_EQ(got.links["producedBy edges"], want.produced.size());
  EXPECT_EQ(got.links["paper-dataset pairs"], want.article_dataset.size());
  EXPECT_EQ(got.statements["papers"], want.linked_articles.size());

  std::vector<std::string> names;
  for (const auto &[k, v] : got.entities) names.push_back(k);
  std::vector<std::string> table(std::begin(kStatsEntityNames), std::end(kStatsEntityNames));
  std::sort(table.begin(), table.end());
  EXPECT_EQ(names, table);
}

}  // namespace
}  // namespace instkg
