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

#include "instkg/tabular.h"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "instkg/error.h"
#include "instkg/io.h"

namespace instkg {
namespace {

const ParameterAliases &Aliases() { return ParameterAliases::Default(); }

std::string CtdText() {
  return ReadFile(std::string(INSTKG_FIXTURES_DIR) +
                  "/ctd/pangaea/content/10.1594_pangaea.832320.tab");
}

TEST(ParseTabular, CtdColumns) {
  TabularDataset ds = ParseTabular(CtdText());
  ASSERT_EQ(ds.columns.size(), 4u);
  EXPECT_EQ(ds.columns[0].short_name, "Depth water");
  EXPECT_EQ(ds.columns[0].unit, "m");
  EXPECT_EQ(ds.columns[0].long_name, "Depth, water");
  EXPECT_EQ(ds.columns[1].short_name, "Sal");
  EXPECT_EQ(ds.columns[2].unit, "\xC2\xB0""C");
  EXPECT_EQ(ds.columns[3].short_name, "Density");
  EXPECT_EQ(ds.rows.size(), 24u);
  ASSERT_NE(ds.HeaderValue("location"), nullptr);
  EXPECT_EQ(*ds.HeaderValue("LOCATION"), "Yucatan Strait");
}

TEST(ParseTabular, ZeroRows) {
  TabularDataset ds = ParseTabular("/* DATA DESCRIPTION:\nLocation:\tX\n*/\nA\tB\n");
  EXPECT_EQ(ds.columns.size(), 2u);
  EXPECT_TRUE(ds.rows.empty());
}

TEST(ParseTabular, RaggedRowReportsIndex) {
  const char *text = "/*\nLocation:\tX\n*/\nA\tB\tC\tD\n1\t2\t3\t4\n1\t2\t3\n";
  try {
    ParseTabular(text);
    FAIL();
  } catch (const RaggedRow &e) {
    EXPECT_EQ(e.row(), 1u);
  }
}

TEST(ParseTabular, MalformedHeaders) {
  EXPECT_THROW(ParseTabular("A\tB\n1\t2\n"), MalformedHeader);
  EXPECT_THROW(ParseTabular("/*\nLocation:\tX\nA\tB\n"), MalformedHeader);
  EXPECT_THROW(ParseTabular("/*\nLocation:\tX\nlocation:\tY\n*/\nA\n"), MalformedHeader);
  EXPECT_THROW(ParseTabular("/*\nno colon here\n*/\nA\n"), MalformedHeader);
  EXPECT_THROW(ParseTabular("/*\nLocation:\tX\n*/\n"), MalformedHeader);
}

TEST(ParseTabular, SerializeRoundTrip) {
  TabularDataset ds = ParseTabular(CtdText());
  TabularDataset again = ParseTabular(SerializeTabular(ds));
  EXPECT_EQ(again, ds);
}

TEST(ExtractParameters, CtdRunningExample) {
  auto params = ExtractParameters(ParseTabular(CtdText()), Aliases());
  std::vector<std::string> shown;
  for (const auto &p : params) shown.push_back(p.Display());
  EXPECT_EQ(shown, (std::vector<std::string>{"depth water (m)", "salinity",
                                             "water temperature (\xC2\xB0""C)", "density"}));
  EXPECT_EQ(params[0].source_column, "Depth water [m]");
}

TEST(ExtractParameters, AxisOnlyIsEmpty) {
  auto ds = ParseTabular("/*\nX:\ty\n*/\nDate/Time\tLatitude\tLongitude\n2012-01-01\t1\t2\n");
  EXPECT_TRUE(ExtractParameters(ds, Aliases()).empty());
}

TEST(ExtractParameters, UnknownPassesThrough) {
  auto ds = ParseTabular("/*\nX:\ty\n*/\nChl a fluor [\xC2\xB5g/l]\n1\n");
  auto params = ExtractParameters(ds, Aliases());
  ASSERT_EQ(params.size(), 1u);
  EXPECT_EQ(params[0].name, "Chl a fluor");
  EXPECT_EQ(params[0].unit, "\xC2\xB5g/l");
}

TEST(ExtractParameters, DuplicateColumnsCollapse) {
  auto ds = ParseTabular("/*\nX:\ty\n*/\nSal\tSal\tEvent\n1\t2\tA\n");
  EXPECT_EQ(ExtractParameters(ds, Aliases()).size(), 1u);
}

TEST(TemporalBounds, CtdHeader) {
  auto b = ExtractTemporalBounds(ParseTabular(CtdText()), Aliases());
  EXPECT_EQ(b.start, "2012-03-21");
  EXPECT_EQ(b.end, "2012-03-24");
}

TEST(TemporalBounds, SingleRow) {
  auto ds = ParseTabular("/*\nX:\ty\n*/\nDate/Time\tSal\n2012-03-21T10:00\t35\n");
  auto b = ExtractTemporalBounds(ds, Aliases());
  EXPECT_EQ(b.start, "2012-03-21");
  EXPECT_EQ(b.end, "2012-03-21");
}

TEST(TemporalBounds, NoData) {
  auto ds = ParseTabular("/*\nX:\ty\n*/\nSal\n35\n");
  EXPECT_THROW(ExtractTemporalBounds(ds, Aliases()), NoTemporalData);
}

TEST(TemporalBounds, ShuffledDatesMatchScanOracle) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::string text = "/*\nX:\ty\n*/\nDate/Time\tSal\n";
    std::vector<std::string> dates;
    for (int i = 0; i < 50; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", 1990 + static_cast<int>(rng() % 30),
                    1 + static_cast<int>(rng() % 12), 1 + static_cast<int>(rng() % 28),
                    static_cast<int>(rng() % 24), static_cast<int>(rng() % 60));
      dates.push_back(buf);
    }
    std::shuffle(dates.begin(), dates.end(), rng);
    for (const auto &d : dates) text += d + "\t1\n";
    std::string lo = "9999", hi = "0000";
    for (const auto &d : dates) {
      lo = std::min(lo, d.substr(0, 10));
      hi = std::max(hi, d.substr(0, 10));
    }
    auto b = ExtractTemporalBounds(ParseTabular(text), Aliases());
    EXPECT_EQ(b.start, lo);
    EXPECT_EQ(b.end, hi);
  }
}

TEST(ParseIsoDate, Forms) {
  EXPECT_EQ(ParseIsoDate("2012-03-21"), "2012-03-21");
  EXPECT_EQ(ParseIsoDate("2012-03-21T14:05:00Z"), "2012-03-21");
  EXPECT_EQ(ParseIsoDate("2012-03-21 14:05"), "2012-03-21");
  EXPECT_EQ(ParseIsoDate("2013-02-29"), std::nullopt);
  EXPECT_EQ(ParseIsoDate("2012-02-29"), "2012-02-29");
  EXPECT_EQ(ParseIsoDate("2012-13-01"), std::nullopt);
  EXPECT_EQ(ParseIsoDate("yesterday"), std::nullopt);
}

TEST(ExtractLocation, CtdHeader) {
  GeoName g = ExtractLocation(ParseTabular(CtdText()), Aliases());
  EXPECT_EQ(g.name, "Yucatan Strait");
}

TEST(ExtractLocation, EventComponent) {
  auto ds = ParseTabular("/*\nEvent(s):\tPS1 * LATITUDE: 78.5 * LONGITUDE: 5.0 * LOCATION: Fram Strait\n*/\nSal\n1\n");
  GeoName g = ExtractLocation(ds, Aliases());
  EXPECT_EQ(g.name, "Fram Strait");
  EXPECT_DOUBLE_EQ(*g.latitude, 78.5);
  EXPECT_DOUBLE_EQ(*g.longitude, 5.0);
}

TEST(ExtractLocation, ConstantCoordinateColumns) {
  auto ds = ParseTabular("/*\nX:\ty\n*/\nLatitude\tLongitude\tSal\n21.5\t-86.0\t1\n21.5\t-86.0\t2\n");
  GeoName g = ExtractLocation(ds, Aliases());
  EXPECT_DOUBLE_EQ(*g.latitude, 21.5);
  EXPECT_DOUBLE_EQ(*g.longitude, -86.0);
}

TEST(ExtractLocation, NoData) {
  auto ds = ParseTabular("/*\nX:\ty\n*/\nSal\n1\n");
  EXPECT_THROW(ExtractLocation(ds, Aliases()), NoLocationData);
}

TEST(AnalyzeDataset, CtdRunningExample) {
  ExperimentDetails d = AnalyzeDataset(ParseTabular(CtdText()), Aliases());
  EXPECT_EQ(d.temporal_start, "2012-03-21");
  EXPECT_EQ(d.temporal_end, "2012-03-24");
  EXPECT_EQ(d.location, "Yucatan Strait");
  EXPECT_EQ(d.parameters,
            (std::vector<std::string>{"depth water", "salinity", "water temperature", "density"}));
}

TEST(ParameterAliases, CaseInsensitiveFallback) {
  auto a = ParameterAliases::FromJson(Json::parse(R"({"aliases":{"Sal":"salinity"}})"));
  EXPECT_EQ(a.Lookup("Sal"), "salinity");
  EXPECT_EQ(a.Lookup("SAL"), "salinity");
  EXPECT_EQ(a.Lookup("Temp"), std::nullopt);
}

}  // namespace
}  // namespace instkg
