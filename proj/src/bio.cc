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

#include "instkg/bio.h"

#include "instkg/error.h"
#include "instkg/unicode.h"

namespace instkg {

std::vector<Token> Tokenize(std::string_view text) {
  std::u32string cps = DecodeUtf8(text);
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < cps.size()) {
    if (IsSpace(cps[i])) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    if (IsWordChar(cps[i])) {
      while (j < cps.size() && IsWordChar(cps[j])) ++j;
    }
    tokens.push_back(Token{EncodeUtf8(std::u32string_view(cps).substr(i, j - i)), i, j});
    i = j;
  }
  return tokens;
}

BioTag ParseBioTag(std::string_view tag) {
  BioTag out;
  if (tag == "O") return out;
  if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
    throw InvalidBioSequence("malformed tag '" + std::string(tag) + "'");
  }
  auto label = TryParseEntityLabel(tag.substr(2));
  if (!label) throw InvalidBioSequence("unknown label in tag '" + std::string(tag) + "'");
  out.kind = tag[0] == 'B' ? BioTag::Kind::kBegin : BioTag::Kind::kInside;
  out.label = *label;
  return out;
}

std::string FormatBioTag(const BioTag &tag) {
  switch (tag.kind) {
    case BioTag::Kind::kOutside: return "O";
    case BioTag::Kind::kBegin: return "B-" + std::string(ToString(tag.label));
    case BioTag::Kind::kInside: return "I-" + std::string(ToString(tag.label));
  }
  return "O";
}

std::vector<Chunk> BioChunks(std::span<const std::string> tags) {
  std::vector<Chunk> chunks;
  bool open = false;
  for (size_t i = 0; i < tags.size(); ++i) {
    BioTag tag = ParseBioTag(tags[i]);
    switch (tag.kind) {
      case BioTag::Kind::kOutside:
        open = false;
        break;
      case BioTag::Kind::kBegin:
        chunks.push_back(Chunk{tag.label, i, i + 1});
        open = true;
        break;
      case BioTag::Kind::kInside:
        if (!open || chunks.back().label != tag.label) {
          throw InvalidBioSequence("tag " + tags[i] + " at position " + std::to_string(i) +
                                   " does not continue an entity of the same label");
        }
        chunks.back().end = i + 1;
        break;
    }
  }
  return chunks;
}

std::vector<std::string> SpansToBio(std::span<const Token> tokens,
                                    std::span<const EntitySpan> spans) {
  std::vector<std::string> tags(tokens.size(), "O");
  for (const auto &span : spans) {
    bool first = true;
    for (size_t t = 0; t < tokens.size(); ++t) {
      if (tokens[t].start < span.start || tokens[t].start >= span.end) continue;
      tags[t] = (first ? "B-" : "I-") + std::string(ToString(span.label));
      first = false;
    }
  }
  return tags;
}

std::vector<EntitySpan> BioToSpans(std::span<const Token> tokens,
                                   std::span<const std::string> tags,
                                   std::u32string_view text) {
  if (tokens.size() != tags.size()) {
    throw InvalidBioSequence("tag count does not match token count");
  }
  std::vector<EntitySpan> spans;
  for (const auto &chunk : BioChunks(tags)) {
    EntitySpan span;
    span.start = tokens[chunk.begin].start;
    span.end = tokens[chunk.end - 1].end;
    span.label = chunk.label;
    if (span.end > text.size() || span.start >= span.end) {
      throw InvalidBioSequence("token offsets outside the text");
    }
    span.surface = EncodeUtf8(text.substr(span.start, span.end - span.start));
    span.confidence = 1.0;
    spans.push_back(std::move(span));
  }
  return spans;
}

}  // namespace instkg
