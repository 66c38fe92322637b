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

#ifndef INSTKG_HARVEST_H_
#define INSTKG_HARVEST_H_

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "instkg/error.h"
#include "instkg/model.h"

namespace instkg {

enum class SourceName { kDataCite, kAWI, kPangaea, kUnpaywall };
enum class SourceMode { kLive, kOffline };

std::string_view ToString(SourceName v);
SourceName ParseSourceName(std::string_view name);
// Fixture subdirectory: "datacite", "awi", "pangaea", "unpaywall".
std::string_view FixtureDir(SourceName v);

struct SourceDescriptor {
  SourceName name = SourceName::kDataCite;
  std::string base_url;
  SourceMode mode = SourceMode::kOffline;
  std::filesystem::path fixtures_dir;  // required when offline
};

struct RawRecord {
  SourceName source = SourceName::kDataCite;
  Json payload;
  std::string retrieved_at;  // ISO-8601 UTC

  bool operator==(const RawRecord &) const = default;
};

void to_json(Json &j, const RawRecord &v);
void from_json(const Json &j, RawRecord &v);

struct FetchPolicy {
  int max_concurrency = 4;
  double rate_limit_per_host = 5;  // requests per second
  int retries = 3;
  int backoff_base_ms = 500;

  // Throws Error on non-positive limits or negative retries.
  void Validate() const;
  // Missing keys keep their defaults.
  static FetchPolicy FromJson(const Json &j);
};

// What a client asks a source for. Transports map these to fixture files
// or HTTP requests.
enum class ResourceKind {
  kInstruments,       // paginated
  kDatasets,          // paginated; key = instrument pid
  kArticleLinks,      // key = dataset DOI
  kCitations,         // key = article DOI
  kFulltextLocation,  // key = article DOI
  kFulltextText,      // key = locator
  kDatasetContent,    // key = dataset DOI
};

struct ResourceRequest {
  SourceName source = SourceName::kDataCite;
  ResourceKind kind = ResourceKind::kInstruments;
  std::string key;
  std::string cursor;  // empty on the first page
};

// Raised by transports for failures worth retrying (connection errors,
// HTTP status >= 500).
class TransientFailure : public Error {
 public:
  using Error::Error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // The body, or nullopt when the resource does not exist (404 / no file).
  virtual std::optional<std::string> Fetch(const ResourceRequest &request) = 0;
  // Concurrency and rate limits are applied per host.
  virtual std::string Host(const ResourceRequest &request) const = 0;
  virtual bool offline() const = 0;
};

// Reads the fixture layout under 'root'. Never opens a socket. Per-dataset
// link files and citation maps are sliced to the requested key, so clients
// see the same per-resource envelope in both modes.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(std::filesystem::path root);
  std::optional<std::string> Fetch(const ResourceRequest &request) override;
  std::string Host(const ResourceRequest &) const override { return "fixtures"; }
  bool offline() const override { return true; }

  // Path a request maps to (for paginated kinds the cursor names the file).
  std::filesystem::path PathFor(const ResourceRequest &request) const;

 private:
  const Json &LoadMap(const std::filesystem::path &path);

  std::filesystem::path root_;
  std::mutex mu_;
  std::map<std::filesystem::path, Json> maps_;  // keyed by canonical DOI
};

// One live endpoint. Templates may use {base}, {key}, {cursor}, {email} in
// the URL (URL-encoded) and {key_json}, {cursor_json} in the body (JSON
// values, null when empty).
struct Endpoint {
  std::string method = "GET";
  std::string url;
  std::string body;
  std::string items_pointer = "/items";
  std::string next_pointer = "/next";
  std::string has_next_pointer;  // optional boolean guard for 'next'
};

struct LiveEndpoints {
  std::map<std::pair<SourceName, ResourceKind>, Endpoint> endpoints;
  std::string email = "instkg@example.org";

  static LiveEndpoints Defaults();
  // Overrides keyed "<Source>.<kind>", e.g. "AWI.instruments".
  void Merge(const Json &j);
  const Endpoint &Get(SourceName source, ResourceKind kind) const;
};

// HTTP(S) via cpp-httplib. 404 maps to nullopt, >= 500 and connection
// errors to TransientFailure, other non-2xx statuses to SourceError.
class HttpTransport : public Transport {
 public:
  HttpTransport(std::map<SourceName, std::string> base_urls, LiveEndpoints endpoints,
                std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));
  std::optional<std::string> Fetch(const ResourceRequest &request) override;
  std::string Host(const ResourceRequest &request) const override;
  bool offline() const override { return false; }

  // Method, absolute URL and body for a request.
  struct Prepared {
    std::string method;
    std::string url;
    std::string body;
  };
  Prepared Prepare(const ResourceRequest &request) const;

 private:
  std::map<SourceName, std::string> base_urls_;
  LiveEndpoints endpoints_;
  std::chrono::milliseconds timeout_;
};

// Time source for rate limiting and backoff; swappable in tests.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::steady_clock::time_point Now() = 0;
  virtual void SleepUntil(std::chrono::steady_clock::time_point t) = 0;
  static std::shared_ptr<Clock> Real();
};

// Per-host admission: at most max_concurrency requests in flight and
// requests started no faster than rate_limit_per_host.
class HostGate {
 public:
  HostGate(FetchPolicy policy, std::shared_ptr<Clock> clock);

  class Permit {
   public:
    Permit(HostGate *gate, std::string host) : gate_(gate), host_(std::move(host)) {}
    Permit(Permit &&other) noexcept : gate_(other.gate_), host_(std::move(other.host_)) {
      other.gate_ = nullptr;
    }
    Permit(const Permit &) = delete;
    ~Permit() {
      if (gate_) gate_->Release(host_);
    }

   private:
    HostGate *gate_;
    std::string host_;
  };

  Permit Acquire(const std::string &host);

 private:
  void Release(const std::string &host);

  FetchPolicy policy_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::string, int> in_flight_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_start_;
};

// Applies the fetch policy around another transport: host gate, then up to
// 'retries' retries with backoff_base_ms * 2^attempt between attempts.
// Exhausted retries raise SourceUnavailable naming the source.
class PolicyTransport : public Transport {
 public:
  PolicyTransport(std::shared_ptr<Transport> inner, std::shared_ptr<HostGate> gate,
                  FetchPolicy policy, std::shared_ptr<Clock> clock);
  std::optional<std::string> Fetch(const ResourceRequest &request) override;
  std::string Host(const ResourceRequest &request) const override { return inner_->Host(request); }
  bool offline() const override { return inner_->offline(); }

 private:
  std::shared_ptr<Transport> inner_;
  std::shared_ptr<HostGate> gate_;
  FetchPolicy policy_;
  std::shared_ptr<Clock> clock_;
};

struct HarvestConfig {
  std::map<SourceName, SourceDescriptor> sources;
  FetchPolicy policy;
  LiveEndpoints endpoints = LiveEndpoints::Defaults();
  // Instrument pid -> repository its datasets are fetched from.
  std::map<std::string, Repository> routing;
  int workers = 8;
  int timeout_ms = 30000;  // per live request

  // Every source offline over one fixture directory.
  static HarvestConfig Offline(const std::filesystem::path &fixtures_dir);
  // {"mode": "offline", "fixtures_dir": "...", "sources": {"AWI": {...}},
  //  "policy": {...}, "endpoints": {...}, "routing": {...}, "workers": 8}
  // Relative paths resolve against 'base_dir'.
  static HarvestConfig FromJson(const Json &j, const std::filesystem::path &base_dir);
};

// Source clients for the harvesting steps. Safe to share across threads.
class Harvester {
 public:
  explicit Harvester(HarvestConfig config, std::shared_ptr<Clock> clock = Clock::Real());
  // Transport per source supplied by the caller (tests, custom sources).
  Harvester(HarvestConfig config, std::map<SourceName, std::shared_ptr<Transport>> transports,
            std::shared_ptr<Clock> clock = Clock::Real());

  // All instrument objects of a DataCite or AWI source, pages followed to
  // exhaustion. Throws FixtureMissing (offline, no instruments file),
  // SourceUnavailable, MalformedPayload.
  std::vector<RawRecord> HarvestInstruments(SourceName source);

  // AWI instruments go to PANGAEA, DataCite ones to DataCite, unless
  // routed otherwise. A missing dataset list is an empty list.
  Repository RouteFor(const InstrumentRecord &instrument) const;
  std::vector<DatasetRecord> FetchDatasetsForInstrument(const InstrumentRecord &instrument);
  // Runs FetchDatasetsForInstrument over 'workers' threads; result order
  // follows the input.
  std::vector<std::vector<DatasetRecord>> FetchDatasetsForInstruments(
      std::span<const InstrumentRecord> instruments);

  std::vector<ArticleRecord> FetchArticlesForDataset(const DatasetRecord &dataset);
  // Articles citing an instrument paper, flagged cites_instrument_paper;
  // the paper itself is dropped.
  std::vector<ArticleRecord> FetchCitingArticles(const ArticleRecord &instrument_paper);

  // Locator of the article's plain text. Throws FulltextUnavailable.
  std::string ResolveFulltext(const ArticleRecord &article);
  std::string ReadFulltext(const std::string &locator);
  // Tabular content of a dataset, nullopt when the repository has none.
  std::optional<std::string> FetchDatasetContent(const DatasetRecord &dataset);

  const HarvestConfig &config() const { return config_; }

 private:
  Transport &TransportFor(SourceName source);
  // Collects the items of every page.
  std::vector<Json> FetchPaged(ResourceRequest request, bool required, std::string *retrieved_at);
  std::vector<ArticleRecord> ParseArticles(const std::vector<Json> &items, SourceName source,
                                           const std::string &context);

  HarvestConfig config_;
  std::shared_ptr<Clock> clock_;
  std::map<SourceName, std::shared_ptr<Transport>> transports_;
};

// "10.1594/pangaea.832320" -> "10.1594_pangaea.832320".
std::string DoiFileStem(const Doi &doi);

}  // namespace instkg

#endif  // INSTKG_HARVEST_H_
