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

#ifndef INSTKG_TESTS_ORACLES_NAIVE_SPARQL_H_
#define INSTKG_TESTS_ORACLES_NAIVE_SPARQL_H_

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "instkg/query.h"
#include "instkg/rdf.h"

namespace instkg::oracle {

// Reference evaluator following the SPARQL algebra literally: every triple
// pattern is solved by a full scan into a solution multiset, groups are
// folded with Join/LeftJoin over all pairs of solutions, and filters are
// applied to the folded multiset.
using Solution = std::map<std::string, Term>;

inline bool Compatible(const Solution &a, const Solution &b) {
  for (const auto &[k, v] : a) {
    auto it = b.find(k);
    if (it != b.end() && it->second != v) return false;
  }
  return true;
}

inline Solution Merge(Solution a, const Solution &b) {
  for (const auto &[k, v] : b) a.emplace(k, v);
  return a;
}

inline std::vector<Solution> ScanPattern(const std::vector<Triple> &all,
                                         const TriplePattern &tp) {
  std::vector<Solution> out;
  for (const auto &t : all) {
    Solution s;
    bool ok = true;
    const std::pair<const PatternTerm *, const Term *> parts[3] = {
        {&tp.s, &t.subject}, {&tp.p, &t.predicate}, {&tp.o, &t.object}};
    for (const auto &[pt, term] : parts) {
      if (!pt->is_var()) {
        if (pt->term != *term) ok = false;
        continue;
      }
      auto [it, inserted] = s.emplace(pt->var, *term);
      if (!inserted && it->second != *term) ok = false;
    }
    if (ok) out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<Solution> JoinAll(const std::vector<Solution> &a,
                                     const std::vector<Solution> &b) {
  std::vector<Solution> out;
  for (const auto &x : a) {
    for (const auto &y : b) {
      if (Compatible(x, y)) out.push_back(Merge(x, y));
    }
  }
  return out;
}

inline std::vector<Solution> LeftJoinAll(const std::vector<Solution> &a,
                                         const std::vector<Solution> &b) {
  std::vector<Solution> out;
  for (const auto &x : a) {
    bool matched = false;
    for (const auto &y : b) {
      if (Compatible(x, y)) {
        out.push_back(Merge(x, y));
        matched = true;
      }
    }
    if (!matched) out.push_back(x);
  }
  return out;
}

// Three-valued: 1 true, 0 false, -1 type error / unbound.
inline int EvalFilter(const FilterExpr &f, const Solution &s) {
  auto resolve = [&](const PatternTerm &t) -> std::optional<Term> {
    if (!t.is_var()) return t.term;
    auto it = s.find(t.var);
    if (it == s.end()) return std::nullopt;
    return it->second;
  };
  switch (f.op) {
    case FilterExpr::Op::kAnd: {
      int a = EvalFilter(f.children[0], s), b = EvalFilter(f.children[1], s);
      if (a == 0 || b == 0) return 0;
      return (a == 1 && b == 1) ? 1 : -1;
    }
    case FilterExpr::Op::kOr: {
      int a = EvalFilter(f.children[0], s), b = EvalFilter(f.children[1], s);
      if (a == 1 || b == 1) return 1;
      return (a == 0 && b == 0) ? 0 : -1;
    }
    case FilterExpr::Op::kEquals: {
      auto a = resolve(f.lhs), b = resolve(f.rhs);
      if (!a || !b) return -1;
      return *a == *b ? 1 : 0;
    }
    case FilterExpr::Op::kContains: {
      auto a = resolve(f.lhs), b = resolve(f.rhs);
      if (!a || !b || !a->is_literal()) return -1;
      return a->value().find(b->value()) != std::string::npos ? 1 : 0;
    }
  }
  return -1;
}

inline ResultTable NaiveEvaluate(const std::vector<Triple> &all, const Query &q) {
  std::vector<Solution> group = {Solution{}};
  for (const auto &el : q.where) {
    if (const auto *tp = std::get_if<TriplePattern>(&el)) {
      group = JoinAll(group, ScanPattern(all, *tp));
    } else if (const auto *opt = std::get_if<OptionalGroup>(&el)) {
      std::vector<Solution> inner = {Solution{}};
      for (const auto &p : opt->patterns) inner = JoinAll(inner, ScanPattern(all, p));
      group = LeftJoinAll(group, inner);
    }
  }
  const auto filters = q.Filters();
  ResultTable table;
  table.vars = q.projection;
  for (const auto &s : group) {
    bool keep = true;
    for (const auto &f : filters) {
      if (EvalFilter(f, s) != 1) keep = false;
    }
    if (!keep) continue;
    std::vector<std::optional<Term>> row;
    for (const auto &v : q.projection) {
      auto it = s.find(v);
      row.push_back(it == s.end() ? std::nullopt : std::optional<Term>(it->second));
    }
    table.rows.push_back(std::move(row));
  }
  std::sort(table.rows.begin(), table.rows.end());
  return table;
}

}  // namespace instkg::oracle

#endif  // INSTKG_TESTS_ORACLES_NAIVE_SPARQL_H_
