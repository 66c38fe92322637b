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

#include "instkg/service.h"

#include <httplib.h>

#include "instkg/error.h"

namespace instkg {

ResultFormat FormatForAccept(std::string_view accept) {
  return accept.find("text/tab-separated-values") != std::string_view::npos ? ResultFormat::kTsv
                                                                             : ResultFormat::kJson;
}

HttpReply AnswerQuery(const TripleStore &store, std::string_view query, ResultFormat format) {
  HttpReply reply;
  try {
    ResultTable table = EvaluateQuery(store, ParseQuery(query));
    reply.body = SerializeResults(table, format);
    reply.content_type = format == ResultFormat::kTsv ? "text/tab-separated-values; charset=utf-8"
                                                      : "application/sparql-results+json";
  } catch (const UnsupportedFeature &e) {
    reply = {400, "text/plain; charset=utf-8", std::string("unsupported: ") + e.what() + "\n"};
  } catch (const QueryError &e) {
    reply = {400, "text/plain; charset=utf-8", std::string(e.what()) + "\n"};
  }
  return reply;
}

struct SparqlService::Impl {
  std::shared_ptr<const TripleStore> store;
  httplib::Server server;
};

SparqlService::SparqlService(std::shared_ptr<const TripleStore> store)
    : impl_(std::make_unique<Impl>()) {
  impl_->store = std::move(store);
  Impl *impl = impl_.get();
  auto answer = [impl](const httplib::Request &req, httplib::Response &res) {
    std::string query;
    if (req.has_param("query")) {
      query = req.get_param_value("query");
    } else if (req.method == "POST") {
      query = req.body;
    }
    if (query.empty()) {
      res.status = 400;
      res.set_content("missing query\n", "text/plain; charset=utf-8");
      return;
    }
    HttpReply reply =
        AnswerQuery(*impl->store, query, FormatForAccept(req.get_header_value("Accept")));
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  impl_->server.Get("/sparql", answer);
  impl_->server.Post("/sparql", answer);
  impl_->server.Get("/healthz", [](const httplib::Request &, httplib::Response &res) {
    res.set_content("ok", "text/plain");
  });
}

SparqlService::~SparqlService() { Stop(); }

int SparqlService::Bind(const std::string &host, int port) {
  if (port == 0) {
    int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
  }
  return port;
}

void SparqlService::Run() { impl_->server.listen_after_bind(); }

void SparqlService::Stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace instkg
