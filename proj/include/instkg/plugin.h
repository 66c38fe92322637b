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

#ifndef INSTKG_PLUGIN_H_
#define INSTKG_PLUGIN_H_

#include <sys/types.h>

#include <chrono>
#include <string>
#include <vector>

#include "instkg/model.h"

namespace instkg {

// A child process speaking newline-delimited JSON over stdin/stdout. One
// request document per line, one response per line, matched by "id".
// Not thread-safe; run several instances for concurrency.
class PluginProcess {
 public:
  // Spawns argv[0] (PATH lookup) with the given arguments. Throws Error when
  // the process cannot be started.
  explicit PluginProcess(std::vector<std::string> argv,
                         std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));
  ~PluginProcess();

  PluginProcess(const PluginProcess &) = delete;
  PluginProcess &operator=(const PluginProcess &) = delete;

  // Assigns ids, sends every request, and returns the responses in request
  // order regardless of the order the plug-in answered in. Throws
  // ExtractorTimeout (the child is killed) and ProtocolViolation (malformed
  // line, unknown or duplicate id, "error" response, early exit).
  std::vector<Json> Exchange(std::vector<Json> requests);
  Json Call(Json request);

  bool running() const { return pid_ > 0; }

 private:
  void Kill();
  [[noreturn]] void Fail(const std::string &message);

  std::vector<std::string> argv_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;  // bytes read past the last complete line
  long next_id_ = 1;
};

// Checks one "extract" response against the request text and returns its
// spans. Throws ProtocolViolation naming the offending line.
std::vector<EntitySpan> ParseExtractResponse(const Json &response, std::u32string_view text);

// Keeps the highest-confidence span of every overlapping group (ties go to
// the leftmost), returned in start order.
std::vector<EntitySpan> ResolveOverlaps(std::vector<EntitySpan> spans);

}  // namespace instkg

#endif  // INSTKG_PLUGIN_H_
