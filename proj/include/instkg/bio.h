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

#ifndef INSTKG_BIO_H_
#define INSTKG_BIO_H_

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "instkg/model.h"

namespace instkg {

// A token with [start, end) offsets in Unicode scalar values.
struct Token {
  std::string text;
  size_t start = 0;
  size_t end = 0;

  bool operator==(const Token &) const = default;
};

// Whitespace + punctuation tokenization: maximal runs of word characters are
// tokens, every other non-space character is a token on its own.
std::vector<Token> Tokenize(std::string_view text);

struct BioTag {
  enum class Kind { kOutside, kBegin, kInside };
  Kind kind = Kind::kOutside;
  EntityLabel label = EntityLabel::kData;
};

// "O", "B-Data", "I-Location", ... Throws InvalidBioSequence.
BioTag ParseBioTag(std::string_view tag);
std::string FormatBioTag(const BioTag &tag);

// A labelled token range [begin, end).
struct Chunk {
  EntityLabel label = EntityLabel::kData;
  size_t begin = 0;
  size_t end = 0;

  auto operator<=>(const Chunk &) const = default;
};

// Rejects I-X that does not continue a B-X/I-X. Throws InvalidBioSequence.
std::vector<Chunk> BioChunks(std::span<const std::string> tags);

// A token whose start lies inside a span is tagged with that span's label:
// B- for the first such token, I- for the rest.
std::vector<std::string> SpansToBio(std::span<const Token> tokens,
                                    std::span<const EntitySpan> spans);

// 'text' supplies span surfaces. Throws InvalidBioSequence.
std::vector<EntitySpan> BioToSpans(std::span<const Token> tokens,
                                   std::span<const std::string> tags,
                                   std::u32string_view text);

}  // namespace instkg

#endif  // INSTKG_BIO_H_
