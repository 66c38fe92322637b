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

#ifndef INSTKG_GAZETTEER_H_
#define INSTKG_GAZETTEER_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "instkg/model.h"

namespace instkg {

// Dictionary extractor. Terms match case-insensitively on word boundaries; a
// whitespace run inside a term matches any whitespace run in the text.
// Scanning is left to right and the longest term starting at a position wins,
// so emitted spans never overlap. Confidence is always 1.0.
class Gazetteer {
 public:
  Gazetteer();

  // {"Data": ["backscatter", ...], "Process": [...], ...}
  static Gazetteer FromJson(const Json &j);
  static Gazetteer Load(const std::filesystem::path &path);

  // A term registered under two labels keeps the first label in
  // Data, Method, Process, Material, Location order.
  void Add(EntityLabel label, std::string_view term);

  std::vector<EntitySpan> Extract(std::string_view text) const;
  std::vector<EntitySpan> Extract(std::u32string_view text) const;

  // Labelled terms as registered (original spelling), for oracles and export.
  const std::map<EntityLabel, std::vector<std::string>> &terms() const { return terms_; }
  size_t size() const { return term_count_; }

 private:
  struct Node {
    std::map<char32_t, int> next;
    int label = -1;  // EntityLabel index when a term ends here.
  };

  std::vector<Node> nodes_;
  std::map<EntityLabel, std::vector<std::string>> terms_;
  size_t term_count_ = 0;
};

inline std::vector<EntitySpan> GazetteerExtract(std::string_view text,
                                                const Gazetteer &gazetteer) {
  return gazetteer.Extract(text);
}

}  // namespace instkg

#endif  // INSTKG_GAZETTEER_H_
