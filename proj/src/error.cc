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

#include "instkg/error.h"

namespace instkg {
namespace {

std::string JoinMissing(const std::vector<std::string> &missing) {
  std::string out = "harmonization failed:";
  for (const auto &m : missing) out += " [" + m + "]";
  return out;
}

}  // namespace

HarmonizationFailure::HarmonizationFailure(std::vector<std::string> missing)
    : Error(JoinMissing(missing)), missing_(std::move(missing)) {}

RaggedRow::RaggedRow(size_t row, size_t cells, size_t columns)
    : Error("ragged row " + std::to_string(row) + ": " + std::to_string(cells) +
            " cells for " + std::to_string(columns) + " columns"),
      row_(row) {}

ParseError::ParseError(size_t line, const std::string &message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace instkg
