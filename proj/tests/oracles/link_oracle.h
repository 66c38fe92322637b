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

#ifndef INSTKG_TESTS_ORACLES_LINK_ORACLE_H_
#define INSTKG_TESTS_ORACLES_LINK_ORACLE_H_

#include <string>
#include <tuple>
#include <vector>

#include "instkg/model.h"

namespace instkg::oracle {

struct EdgeCount {
  size_t produced = 0;
  size_t described = 0;
  size_t cites = 0;
  size_t dangling = 0;
};

// Counts distinct (src, dst, kind) references by pairwise scans over the raw
// record lists.
inline EdgeCount RecountEdges(const std::vector<InstrumentRecord> &instruments,
                              const std::vector<DatasetRecord> &datasets,
                              const std::vector<ArticleRecord> &articles) {
  using Ref = std::tuple<std::string, std::string, int>;
  std::vector<Ref> good, bad;
  auto push_unique = [](std::vector<Ref> &v, Ref r) {
    for (const auto &x : v) {
      if (x == r) return;
    }
    v.push_back(std::move(r));
  };
  for (const auto &d : datasets) {
    for (const auto &pid : d.produced_by) {
      bool found = false;
      for (const auto &i : instruments) found = found || CanonicalPid(i.pid) == CanonicalPid(pid);
      push_unique(found ? good : bad, Ref{CanonicalPid(pid), d.doi.value(), 0});
    }
  }
  for (const auto &a : articles) {
    for (const auto &ds : a.linked_dataset_dois) {
      bool found = false;
      for (const auto &d : datasets) found = found || d.doi == ds;
      push_unique(found ? good : bad, Ref{ds.value(), a.doi.value(), 1});
    }
    for (const auto &p : a.cites) {
      if (p == a.doi) continue;
      bool found = false;
      for (const auto &b : articles) found = found || b.doi == p;
      push_unique(found ? good : bad, Ref{a.doi.value(), p.value(), 2});
    }
  }
  EdgeCount c;
  for (const auto &[s, d, k] : good) {
    if (k == 0) ++c.produced;
    if (k == 1) ++c.described;
    if (k == 2) ++c.cites;
  }
  c.dangling = bad.size();
  return c;
}

}  // namespace instkg::oracle

#endif  // INSTKG_TESTS_ORACLES_LINK_ORACLE_H_
