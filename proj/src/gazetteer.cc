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

#include "instkg/gazetteer.h"

#include "instkg/error.h"
#include "instkg/io.h"
#include "instkg/unicode.h"

namespace instkg {
namespace {

// Whitespace runs in terms are stored as this single symbol.
constexpr char32_t kSpaceSymbol = U' ';

bool BoundaryBefore(std::u32string_view text, size_t i) {
  return i == 0 || !IsWordChar(text[i - 1]) || !IsWordChar(text[i]);
}

bool BoundaryAfter(std::u32string_view text, size_t end) {
  return end >= text.size() || !IsWordChar(text[end - 1]) || !IsWordChar(text[end]);
}

}  // namespace

Gazetteer::Gazetteer() : nodes_(1) {}

Gazetteer Gazetteer::FromJson(const Json &j) {
  Gazetteer g;
  if (!j.is_object()) throw Error("gazetteer must be a JSON object of label -> terms");
  for (EntityLabel label : kAllLabels) {
    auto it = j.find(std::string(ToString(label)));
    if (it == j.end()) continue;
    for (const auto &term : *it) g.Add(label, term.get<std::string>());
  }
  for (const auto &[key, value] : j.items()) {
    if (!TryParseEntityLabel(key)) throw Error("gazetteer: unknown label '" + key + "'");
  }
  return g;
}

Gazetteer Gazetteer::Load(const std::filesystem::path &path) {
  return FromJson(ReadJsonFile(path));
}

void Gazetteer::Add(EntityLabel label, std::string_view term) {
  std::u32string folded = FoldCase(DecodeUtf8(term));
  // Collapse whitespace runs and trim.
  std::u32string key;
  for (char32_t cp : folded) {
    if (IsSpace(cp)) {
      if (!key.empty() && key.back() != kSpaceSymbol) key.push_back(kSpaceSymbol);
    } else {
      key.push_back(cp);
    }
  }
  while (!key.empty() && key.back() == kSpaceSymbol) key.pop_back();
  if (key.empty()) throw Error("gazetteer terms must be non-empty");

  int node = 0;
  for (char32_t cp : key) {
    auto it = nodes_[node].next.find(cp);
    if (it == nodes_[node].next.end()) {
      nodes_.emplace_back();
      int created = static_cast<int>(nodes_.size()) - 1;
      nodes_[node].next.emplace(cp, created);
      node = created;
    } else {
      node = it->second;
    }
  }
  const int idx = static_cast<int>(label);
  if (nodes_[node].label < 0 || idx < nodes_[node].label) nodes_[node].label = idx;
  terms_[label].emplace_back(term);
  ++term_count_;
}

std::vector<EntitySpan> Gazetteer::Extract(std::string_view text) const {
  return Extract(DecodeUtf8(text));
}

std::vector<EntitySpan> Gazetteer::Extract(std::u32string_view text) const {
  std::vector<EntitySpan> spans;
  const size_t n = text.size();
  size_t i = 0;
  while (i < n) {
    if (IsSpace(text[i]) || !BoundaryBefore(text, i)) {
      ++i;
      continue;
    }
    int node = 0;
    size_t pos = i;
    size_t best_end = 0;
    int best_label = -1;
    while (pos < n) {
      char32_t cp = text[pos];
      size_t step = 1;
      if (IsSpace(cp)) {
        cp = kSpaceSymbol;
        while (pos + step < n && IsSpace(text[pos + step])) ++step;
      } else {
        cp = FoldCase(cp);
      }
      auto it = nodes_[node].next.find(cp);
      if (it == nodes_[node].next.end()) break;
      node = it->second;
      pos += step;
      if (nodes_[node].label >= 0 && BoundaryAfter(text, pos)) {
        best_end = pos;
        best_label = nodes_[node].label;
      }
    }
    if (best_label < 0) {
      ++i;
      continue;
    }
    EntitySpan span;
    span.start = i;
    span.end = best_end;
    span.label = static_cast<EntityLabel>(best_label);
    span.surface = EncodeUtf8(text.substr(i, best_end - i));
    span.confidence = 1.0;
    spans.push_back(std::move(span));
    i = best_end;
  }
  return spans;
}

}  // namespace instkg
