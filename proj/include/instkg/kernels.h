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

#ifndef INSTKG_KERNELS_H_
#define INSTKG_KERNELS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "instkg/gazetteer.h"
#include "instkg/rdf.h"
#include "instkg/tabular.h"
#include "instkg/triple_store.h"

namespace instkg {

// Bulk kernels. The parallel versions use OpenMP when available; the serial
// versions are the reference the tests and benchmarks compare against. Both
// produce identical results.

namespace parallel {

int MaxThreads();

// Sorts and removes duplicates in place.
void SortUnique(std::vector<IdTriple> *triples);

// Parses an N-Triples document. On failure throws the ParseError of the
// first bad line.
std::vector<Triple> ParseNTriples(std::string_view text);

std::vector<std::vector<EntitySpan>> ExtractAll(std::span<const std::string> texts,
                                                const Gazetteer &gazetteer);

std::vector<ExperimentDetails> AnalyzeAll(std::span<const TabularDataset> datasets,
                                          const ParameterAliases &aliases);

}  // namespace parallel

namespace serial {

void SortUnique(std::vector<IdTriple> *triples);
std::vector<Triple> ParseNTriples(std::string_view text);
std::vector<std::vector<EntitySpan>> ExtractAll(std::span<const std::string> texts,
                                                const Gazetteer &gazetteer);
std::vector<ExperimentDetails> AnalyzeAll(std::span<const TabularDataset> datasets,
                                          const ParameterAliases &aliases);

}  // namespace serial
}  // namespace instkg

#endif  // INSTKG_KERNELS_H_
