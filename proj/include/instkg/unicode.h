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

#ifndef INSTKG_UNICODE_H_
#define INSTKG_UNICODE_H_

#include <string>
#include <string_view>

namespace instkg {

// UTF-8 helpers. All entity offsets in the toolkit count Unicode scalar
// values, so text crosses this boundary before any span arithmetic.

// Invalid sequences decode to U+FFFD, one per offending byte.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);
void AppendUtf8(char32_t cp, std::string *out);

size_t CodePointLength(std::string_view text);

// Simple case folding: ASCII, Latin-1, Latin Extended-A pairs, Greek and
// Cyrillic basic blocks. Enough for gazetteer matching on scientific prose.
char32_t FoldCase(char32_t cp);
std::u32string FoldCase(std::u32string_view text);

// Letters, digits and connector characters. Everything else, including
// hyphen, is a word boundary.
bool IsWordChar(char32_t cp);
bool IsSpace(char32_t cp);

}  // namespace instkg

#endif  // INSTKG_UNICODE_H_
