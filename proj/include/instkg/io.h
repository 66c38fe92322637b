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

#ifndef INSTKG_IO_H_
#define INSTKG_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace instkg {

// Throws instkg::Error when the file cannot be read.
std::string ReadFile(const std::filesystem::path &path);

// Writes via a temporary sibling and rename, creating parent directories.
void WriteFile(const std::filesystem::path &path, std::string_view content);

nlohmann::json ReadJsonFile(const std::filesystem::path &path);
void WriteJsonFile(const std::filesystem::path &path, const nlohmann::json &j);

// 64-bit FNV-1a, hex encoded. Used for stage checksums.
std::string Fnv1aHex(std::string_view bytes);

}  // namespace instkg

#endif  // INSTKG_IO_H_
