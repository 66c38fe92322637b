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

#ifndef INSTKG_SERVICE_H_
#define INSTKG_SERVICE_H_

#include <memory>
#include <string>
#include <string_view>

#include "instkg/query.h"
#include "instkg/triple_store.h"

namespace instkg {

struct HttpReply {
  int status = 200;
  std::string content_type;
  std::string body;
};

// Accept containing "text/tab-separated-values" selects TSV, anything else
// JSON.
ResultFormat FormatForAccept(std::string_view accept);

// Evaluates one query. Parse errors give 400 with the message; unsupported
// features give 400 with an "unsupported: " prefix.
HttpReply AnswerQuery(const TripleStore &store, std::string_view query, ResultFormat format);

// Read-only SPARQL endpoint over an immutable store:
//   GET  /sparql?query=...   POST /sparql (body or form field "query")
//   GET  /healthz -> "ok"
class SparqlService {
 public:
  explicit SparqlService(std::shared_ptr<const TripleStore> store);
  ~SparqlService();
  SparqlService(const SparqlService &) = delete;
  SparqlService &operator=(const SparqlService &) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error when the
  // port cannot be bound.
  int Bind(const std::string &host, int port);
  // Serves until Stop(). Requires Bind().
  void Run();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace instkg

#endif  // INSTKG_SERVICE_H_
