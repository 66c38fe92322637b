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

#include "instkg/triple_store.h"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "instkg/rdf_io.h"
#include "oracles/store_oracle.h"

namespace instkg {
namespace {

using namespace vocab;

Term I(const std::string &s) { return Term::Iri(s); }

class RandomTerms {
 public:
  explicit RandomTerms(uint32_t seed) : rng_(seed) {}

  Term Resource(int pool) { return I("http://ex.org/r" + std::to_string(rng_() % pool)); }
  Term Predicate(int pool) { return I("http://ex.org/p" + std::to_string(rng_() % pool)); }
  Term Object(int pool) {
    switch (rng_() % 4) {
      case 0: return Term::Literal(RandomString());
      case 1: return Term::Literal(std::to_string(rng_() % pool), kXsdInteger);
      case 2: return Term::Literal("w" + std::to_string(rng_() % pool), "", "en");
      default: return Resource(pool);
    }
  }
  Triple Next(int pool) { return MakeTriple(Resource(pool), Predicate(pool), Object(pool)); }

  std::string RandomString() {
    static const char *pieces[] = {"a", "B", " ", "\"", "\\", "\n", "\t", "\r", "\x01",
                                   "\xC3\xA9", "\xE2\x80\x93", "\xF0\x9F\x8C\x8A", "#", "<>", "."};
    std::string s;
    size_t len = rng_() % 6;
    for (size_t i = 0; i < len; ++i) s += pieces[rng_() % std::size(pieces)];
    return s;
  }

  std::mt19937 &rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

TEST(TripleStore, SetSemantics) {
  TripleStore store;
  Triple t = MakeTriple(I("http://a"), I("http://b"), I("http://c"));
  EXPECT_TRUE(store.Insert(t));
  EXPECT_FALSE(store.Insert(t));
  EXPECT_EQ(store.size(), 1u);
  EXPECT_TRUE(store.Contains(t));
}

TEST(TripleStore, FullyBoundAbsentIsEmpty) {
  TripleStore store;
  store.Insert(MakeTriple(I("http://a"), I("http://b"), I("http://c")));
  EXPECT_TRUE(store.Match(I("http://a"), I("http://b"), I("http://d")).empty());
  EXPECT_TRUE(store.Match(I("http://zz"), std::nullopt, std::nullopt).empty());
}

TEST(TripleStore, IndexChoiceFollowsBoundPrefix) {
  using Index = TripleStore::Index;
  EXPECT_EQ(TripleStore::ChooseIndex(false, false, false), Index::kSpo);
  EXPECT_EQ(TripleStore::ChooseIndex(true, false, false), Index::kSpo);
  EXPECT_EQ(TripleStore::ChooseIndex(true, true, false), Index::kSpo);
  EXPECT_EQ(TripleStore::ChooseIndex(true, true, true), Index::kSpo);
  EXPECT_EQ(TripleStore::ChooseIndex(false, true, false), Index::kPos);
  EXPECT_EQ(TripleStore::ChooseIndex(false, true, true), Index::kPos);
  EXPECT_EQ(TripleStore::ChooseIndex(false, false, true), Index::kOsp);
  EXPECT_EQ(TripleStore::ChooseIndex(true, false, true), Index::kOsp);
}

TEST(TripleStore, EarlyStop) {
  TripleStore store;
  for (int i = 0; i < 10; ++i) {
    store.Insert(MakeTriple(I("http://a"), I("http://p"), Term::Literal(std::to_string(i))));
  }
  int seen = 0;
  store.Match(std::nullopt, I("http://p"), std::nullopt, [&](const Triple &) {
    return ++seen < 3;
  });
  EXPECT_EQ(seen, 3);
}

// Index coherence: every bound/unbound combination equals a full scan.
TEST(TripleStoreProperty, MatchEqualsFullScan) {
  RandomTerms gen(42);
  int patterns = 0;
  for (int round = 0; round < 1000; ++round) {
    const int pool = 2 + round % 9;
    const size_t n = gen.rng()() % 60;
    std::vector<Triple> all;
    TripleStore store;
    for (size_t i = 0; i < n; ++i) {
      Triple t = gen.Next(pool);
      all.push_back(t);
      if (round % 2) store.Insert(t);
    }
    if (round % 2 == 0) store.InsertAll(all);
    ASSERT_EQ(store.size(), oracle::ScanMatch(all, {}, {}, {}).size());

    for (int mask = 0; mask < 8; ++mask) {
      // Bind from an existing triple half of the time, else from the random pool.
      Triple probe = (!all.empty() && gen.rng()() % 2) ? all[gen.rng()() % all.size()]
                                                        : gen.Next(pool);
      std::optional<Term> s, p, o;
      if (mask & 1) s = probe.subject;
      if (mask & 2) p = probe.predicate;
      if (mask & 4) o = probe.object;
      std::vector<Triple> got = store.Match(s, p, o);
      std::sort(got.begin(), got.end());
      ASSERT_EQ(got, oracle::ScanMatch(all, s, p, o)) << "round " << round << " mask " << mask;
      ++patterns;
    }
  }
  EXPECT_EQ(patterns, 8000);
}

TEST(TripleStoreProperty, NTriplesRoundTripIdentity) {
  RandomTerms gen(1234);
  for (int round = 0; round < 300; ++round) {
    TripleStore store;
    const size_t n = gen.rng()() % 40;
    for (size_t i = 0; i < n; ++i) store.Insert(gen.Next(6));
    std::string text = SerializeNTriples(store);
    TripleStore back = LoadNTriples(text);
    ASSERT_EQ(back.size(), store.size());
    ASSERT_EQ(SerializeNTriples(back), text);
    for (const auto &t : store.Triples()) ASSERT_TRUE(back.Contains(t));
  }
}

TEST(TripleStoreProperty, InsertionOrderDoesNotChangeSerialization) {
  RandomTerms gen(99);
  std::vector<Triple> triples;
  for (int i = 0; i < 10000; ++i) triples.push_back(gen.Next(500));
  TripleStore forward, shuffled;
  for (const auto &t : triples) forward.Insert(t);
  std::shuffle(triples.begin(), triples.end(), gen.rng());
  shuffled.InsertAll(triples);
  EXPECT_EQ(SerializeNTriples(forward), SerializeNTriples(shuffled));
}

}  // namespace
}  // namespace instkg
