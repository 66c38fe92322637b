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

#ifndef INSTKG_QUERY_H_
#define INSTKG_QUERY_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "instkg/rdf.h"
#include "instkg/rdf_io.h"
#include "instkg/triple_store.h"

namespace instkg {

// Supported SPARQL subset:
//
//   PREFIX p: <iri>          (any number)
//   SELECT ?v ...            (at least one variable)
//   WHERE { ... }            (WHERE keyword optional)
//
// Inside the group: triple patterns with ';' and ',' lists, 'a' for
// rdf:type, OPTIONAL { triple patterns }, FILTER(expr) where expr is built
// from ?v = <iri>, CONTAINS(?v, "text"), &&, || and parentheses. Comments
// start with '#'. Anything else raises UnsupportedFeature.

struct PatternTerm {
  std::string var;  // without '?'; empty for constants
  Term term;

  bool is_var() const { return !var.empty(); }
  bool operator==(const PatternTerm &) const = default;
};

struct TriplePattern {
  PatternTerm s, p, o;
  bool operator==(const TriplePattern &) const = default;
};

struct FilterExpr {
  enum class Op { kEquals, kContains, kAnd, kOr };
  Op op = Op::kEquals;
  PatternTerm lhs;    // kEquals, kContains
  PatternTerm rhs;    // kEquals; for kContains a literal needle
  std::vector<FilterExpr> children;  // kAnd, kOr (two each)

  bool operator==(const FilterExpr &) const = default;
};

struct OptionalGroup {
  std::vector<TriplePattern> patterns;
  bool operator==(const OptionalGroup &) const = default;
};

using GroupElement = std::variant<TriplePattern, OptionalGroup, FilterExpr>;

struct Query {
  PrefixMap prefixes;
  std::vector<std::string> projection;
  std::vector<GroupElement> where;

  std::vector<TriplePattern> Bgp() const;  // top-level triple patterns
  std::vector<FilterExpr> Filters() const;
};

// Throws SyntaxError, UnknownPrefix, UnsupportedFeature, each carrying the
// byte offset of the offending token.
Query ParseQuery(std::string_view text);

struct ResultTable {
  std::vector<std::string> vars;
  std::vector<std::vector<std::optional<Term>>> rows;

  bool operator==(const ResultTable &) const = default;
};

// Row order: lexicographic over the projected terms, unbound first.
void SortRows(ResultTable &table);

// Backtracking join in written order; OPTIONAL groups are left joins;
// filters apply to the whole group after joining (unbound or non-literal
// operands make a comparison an error, and error rows are dropped).
ResultTable EvaluateQuery(const TripleStore &store, const Query &query);

enum class ResultFormat { kJson, kTsv };

// JSON: {"head":{"vars":[...]},"results":{"bindings":[...]}} in compact
// form. TSV: header of "?var" names, one line per row, terms in N-Triples
// syntax, unbound cells empty.
std::string SerializeResults(const ResultTable &table, ResultFormat format);
ResultFormat ParseResultFormat(std::string_view name);  // "json" | "tsv"

}  // namespace instkg

#endif  // INSTKG_QUERY_H_
