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

#include "instkg/kernels.h"

#include <algorithm>
#include <exception>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "instkg/error.h"
#include "instkg/rdf_io.h"

namespace instkg {
namespace {

struct Line {
  std::string_view text;
  size_t number;
};

std::vector<Line> SplitLines(std::string_view text) {
  std::vector<Line> lines;
  size_t number = 1;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({line, number++});
    pos = nl + 1;
  }
  return lines;
}

// Runs fn(i) for i in [0, n) and rethrows the exception of the lowest index.
template <typename Fn>
void ParallelFor(size_t n, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 64) reduction(|| : failed)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    try {
      fn(static_cast<size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
      failed = true;
    }
  }
  if (!failed) return;
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

namespace parallel {

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void SortUnique(std::vector<IdTriple> *triples) {
  auto &v = *triples;
  const int threads = MaxThreads();
  if (threads <= 1 || v.size() < 16384) {
    serial::SortUnique(triples);
    return;
  }
  const size_t chunks = static_cast<size_t>(threads);
  std::vector<size_t> bounds(chunks + 1);
  for (size_t c = 0; c <= chunks; ++c) bounds[c] = v.size() * c / chunks;
#pragma omp parallel for
  for (long c = 0; c < static_cast<long>(chunks); ++c) {
    std::sort(v.begin() + bounds[c], v.begin() + bounds[c + 1]);
  }
  for (size_t width = 1; width < chunks; width *= 2) {
#pragma omp parallel for
    for (long c = 0; c < static_cast<long>(chunks); c += 2 * static_cast<long>(width)) {
      size_t mid = std::min(chunks, static_cast<size_t>(c) + width);
      size_t hi = std::min(chunks, static_cast<size_t>(c) + 2 * width);
      if (mid < hi) {
        std::inplace_merge(v.begin() + bounds[c], v.begin() + bounds[mid], v.begin() + bounds[hi]);
      }
    }
  }
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Triple> ParseNTriples(std::string_view text) {
  std::vector<Line> lines = SplitLines(text);
  std::vector<std::optional<Triple>> slots(lines.size());
  ParallelFor(lines.size(), [&](size_t i) {
    slots[i] = ParseNTriplesLine(lines[i].text, lines[i].number);
  });
  std::vector<Triple> out;
  out.reserve(slots.size());
  for (auto &slot : slots) {
    if (slot) out.push_back(std::move(*slot));
  }
  return out;
}

std::vector<std::vector<EntitySpan>> ExtractAll(std::span<const std::string> texts,
                                                const Gazetteer &gazetteer) {
  std::vector<std::vector<EntitySpan>> out(texts.size());
  ParallelFor(texts.size(), [&](size_t i) { out[i] = gazetteer.Extract(texts[i]); });
  return out;
}

std::vector<ExperimentDetails> AnalyzeAll(std::span<const TabularDataset> datasets,
                                          const ParameterAliases &aliases) {
  std::vector<ExperimentDetails> out(datasets.size());
  ParallelFor(datasets.size(), [&](size_t i) { out[i] = AnalyzeDataset(datasets[i], aliases); });
  return out;
}

}  // namespace parallel

namespace serial {

void SortUnique(std::vector<IdTriple> *triples) {
  std::sort(triples->begin(), triples->end());
  triples->erase(std::unique(triples->begin(), triples->end()), triples->end());
}

std::vector<Triple> ParseNTriples(std::string_view text) {
  std::vector<Triple> out;
  for (const Line &line : SplitLines(text)) {
    if (auto t = ParseNTriplesLine(line.text, line.number)) out.push_back(std::move(*t));
  }
  return out;
}

std::vector<std::vector<EntitySpan>> ExtractAll(std::span<const std::string> texts,
                                                const Gazetteer &gazetteer) {
  std::vector<std::vector<EntitySpan>> out;
  out.reserve(texts.size());
  for (const auto &text : texts) out.push_back(gazetteer.Extract(text));
  return out;
}

std::vector<ExperimentDetails> AnalyzeAll(std::span<const TabularDataset> datasets,
                                          const ParameterAliases &aliases) {
  std::vector<ExperimentDetails> out;
  out.reserve(datasets.size());
  for (const auto &d : datasets) out.push_back(AnalyzeDataset(d, aliases));
  return out;
}

}  // namespace serial
}  // namespace instkg
