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

#include "instkg/harvest.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <exception>
#include <set>
#include <thread>

#include "instkg/error.h"
#include "instkg/io.h"

#include "httplib.h"

namespace instkg {
namespace fs = std::filesystem;
using std::chrono::steady_clock;

namespace {

constexpr SourceName kAllSources[] = {SourceName::kDataCite, SourceName::kAWI,
                                      SourceName::kPangaea, SourceName::kUnpaywall};

constexpr char kEpoch[] = "1970-01-01T00:00:00Z";

std::string NowUtc() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string UrlEncode(std::string_view s) {
  static const char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '/') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

void ReplaceAll(std::string &s, std::string_view from, std::string_view to) {
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string_view KindName(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::kInstruments: return "instruments";
    case ResourceKind::kDatasets: return "datasets";
    case ResourceKind::kArticleLinks: return "article_links";
    case ResourceKind::kCitations: return "citations";
    case ResourceKind::kFulltextLocation: return "fulltext_location";
    case ResourceKind::kFulltextText: return "fulltext_text";
    case ResourceKind::kDatasetContent: return "dataset_content";
  }
  return "";
}

ResourceKind ParseKind(std::string_view name) {
  for (auto kind : {ResourceKind::kInstruments, ResourceKind::kDatasets,
                    ResourceKind::kArticleLinks, ResourceKind::kCitations,
                    ResourceKind::kFulltextLocation, ResourceKind::kFulltextText,
                    ResourceKind::kDatasetContent}) {
    if (KindName(kind) == name) return kind;
  }
  throw Error("unknown resource kind '" + std::string(name) + "'");
}

// Splits "https://host:port/path?q" into origin and path.
std::pair<std::string, std::string> SplitUrl(const std::string &url) {
  size_t scheme = url.find("://");
  if (scheme == std::string::npos) throw Error("not an absolute URL: " + url);
  size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

Json ParseBody(const std::string &body, SourceName source, const std::string &what) {
  try {
    return Json::parse(body);
  } catch (const Json::parse_error &e) {
    throw MalformedPayload(std::string(ToString(source)) + ": " + what + " is not JSON: " +
                           e.what());
  }
}

Doi PayloadDoi(const Json &item, SourceName source, const std::string &what) {
  auto it = item.find("doi");
  if (it == item.end() || !it->is_string()) {
    throw MalformedPayload(std::string(ToString(source)) + ": " + what + " without a doi: " +
                           item.dump());
  }
  auto doi = Doi::TryNormalize(it->get<std::string>());
  if (!doi) {
    throw MalformedPayload(std::string(ToString(source)) + ": " + what + " has invalid doi '" +
                           it->get<std::string>() + "'");
  }
  return *doi;
}

std::string StringField(const Json &item, const char *key) {
  auto it = item.find(key);
  return it != item.end() && it->is_string() ? it->get<std::string>() : std::string();
}

class RealClock : public Clock {
 public:
  steady_clock::time_point Now() override { return steady_clock::now(); }
  void SleepUntil(steady_clock::time_point t) override { std::this_thread::sleep_until(t); }
};

}  // namespace

std::string_view ToString(SourceName v) {
  switch (v) {
    case SourceName::kDataCite: return "DataCite";
    case SourceName::kAWI: return "AWI";
    case SourceName::kPangaea: return "PANGAEA";
    case SourceName::kUnpaywall: return "Unpaywall";
  }
  return "";
}

SourceName ParseSourceName(std::string_view name) {
  for (SourceName s : kAllSources) {
    if (ToString(s) == name) return s;
  }
  throw Error("unknown source '" + std::string(name) + "'");
}

std::string_view FixtureDir(SourceName v) {
  switch (v) {
    case SourceName::kDataCite: return "datacite";
    case SourceName::kAWI: return "awi";
    case SourceName::kPangaea: return "pangaea";
    case SourceName::kUnpaywall: return "unpaywall";
  }
  return "";
}

std::string DoiFileStem(const Doi &doi) { return IdentifierKey(doi.value()); }

void to_json(Json &j, const RawRecord &v) {
  j = Json{{"source", ToString(v.source)}, {"payload", v.payload},
           {"retrieved_at", v.retrieved_at}};
}

void from_json(const Json &j, RawRecord &v) {
  v.source = ParseSourceName(j.at("source").get<std::string>());
  v.payload = j.at("payload");
  v.retrieved_at = j.value("retrieved_at", std::string(kEpoch));
}

void FetchPolicy::Validate() const {
  if (max_concurrency < 1) throw Error("max_concurrency must be positive");
  if (!(rate_limit_per_host > 0)) throw Error("rate_limit_per_host must be positive");
  if (retries < 0) throw Error("retries must be non-negative");
  if (backoff_base_ms < 1) throw Error("backoff_base_ms must be positive");
}

FetchPolicy FetchPolicy::FromJson(const Json &j) {
  FetchPolicy p;
  p.max_concurrency = j.value("max_concurrency", p.max_concurrency);
  p.rate_limit_per_host = j.value("rate_limit_per_host", p.rate_limit_per_host);
  p.retries = j.value("retries", p.retries);
  p.backoff_base_ms = j.value("backoff_base_ms", p.backoff_base_ms);
  p.Validate();
  return p;
}

// Fixtures.

FixtureTransport::FixtureTransport(fs::path root) : root_(std::move(root)) {}

fs::path FixtureTransport::PathFor(const ResourceRequest &r) const {
  const fs::path dir = root_ / FixtureDir(r.source);
  switch (r.kind) {
    case ResourceKind::kInstruments:
      return r.cursor.empty() ? dir / "instruments.json" : dir / r.cursor;
    case ResourceKind::kDatasets:
      return dir / "datasets" / (r.cursor.empty() ? IdentifierKey(r.key) + ".json" : r.cursor);
    case ResourceKind::kArticleLinks:
      return root_ / "links" / "articles_by_dataset.json";
    case ResourceKind::kCitations:
      return root_ / "links" / "citations.json";
    case ResourceKind::kFulltextLocation:
      return root_ / "unpaywall" / (IdentifierKey(r.key) + ".json");
    case ResourceKind::kFulltextText:
      return fs::path(r.key);
    case ResourceKind::kDatasetContent:
      return root_ / "pangaea" / "content" / (IdentifierKey(r.key) + ".tab");
  }
  return {};
}

const Json &FixtureTransport::LoadMap(const fs::path &path) {
  std::lock_guard lock(mu_);
  auto it = maps_.find(path);
  if (it != maps_.end()) return it->second;
  Json normalized = Json::object();
  if (fs::exists(path)) {
    Json raw = ParseBody(ReadFile(path), SourceName::kDataCite, path.string());
    if (!raw.is_object()) throw MalformedPayload(path.string() + ": expected a JSON object");
    for (const auto &[key, value] : raw.items()) {
      auto doi = Doi::TryNormalize(key);
      if (!doi) throw MalformedPayload(path.string() + ": invalid doi key '" + key + "'");
      Json &slot = normalized[doi->value()];
      if (slot.is_null()) slot = Json::array();
      for (const auto &item : value) slot.push_back(item);
    }
  }
  return maps_.emplace(path, std::move(normalized)).first->second;
}

std::optional<std::string> FixtureTransport::Fetch(const ResourceRequest &r) {
  const fs::path path = PathFor(r);
  if (r.kind == ResourceKind::kArticleLinks || r.kind == ResourceKind::kCitations) {
    const Json &map = LoadMap(path);
    auto doi = Doi::TryNormalize(r.key);
    auto it = doi ? map.find(doi->value()) : map.end();
    if (it == map.end()) return std::nullopt;
    return Json{{"items", *it}}.dump();
  }
  if (!fs::is_regular_file(path)) return std::nullopt;
  return ReadFile(path);
}

// Live endpoints.

LiveEndpoints LiveEndpoints::Defaults() {
  LiveEndpoints e;
  Endpoint datacite_instruments;
  datacite_instruments.method = "POST";
  datacite_instruments.url = "{base}/graphql";
  datacite_instruments.body =
      R"({"query":"query($after:String){instruments(first:100,after:$after){)"
      R"(nodes{id name description manufacturer owner url type relatedIdentifiers})"
      R"( pageInfo{endCursor hasNextPage}}}","variables":{"after":{cursor_json}}})";
  datacite_instruments.items_pointer = "/data/instruments/nodes";
  datacite_instruments.next_pointer = "/data/instruments/pageInfo/endCursor";
  datacite_instruments.has_next_pointer = "/data/instruments/pageInfo/hasNextPage";
  e.endpoints[{SourceName::kDataCite, ResourceKind::kInstruments}] = datacite_instruments;

  auto rest = [&](SourceName s, ResourceKind k, std::string url) {
    Endpoint ep;
    ep.url = std::move(url);
    e.endpoints[{s, k}] = ep;
  };
  rest(SourceName::kAWI, ResourceKind::kInstruments, "{base}/items?cursor={cursor}");
  rest(SourceName::kDataCite, ResourceKind::kDatasets,
       "{base}/instruments/{key}/datasets?cursor={cursor}");
  rest(SourceName::kPangaea, ResourceKind::kDatasets,
       "{base}/instruments/{key}/datasets?cursor={cursor}");
  for (SourceName s : {SourceName::kDataCite, SourceName::kPangaea}) {
    rest(s, ResourceKind::kArticleLinks, "{base}/datasets/{key}/articles");
    rest(s, ResourceKind::kCitations, "{base}/articles/{key}/citations");
  }
  rest(SourceName::kUnpaywall, ResourceKind::kFulltextLocation, "{base}/v2/{key}?email={email}");
  rest(SourceName::kUnpaywall, ResourceKind::kFulltextText, "{key}");
  rest(SourceName::kPangaea, ResourceKind::kDatasetContent, "{base}/{key}?format=textfile");
  return e;
}

void LiveEndpoints::Merge(const Json &j) {
  for (const auto &[name, spec] : j.items()) {
    if (name == "email") {
      email = spec.get<std::string>();
      continue;
    }
    size_t dot = name.find('.');
    if (dot == std::string::npos) throw Error("endpoint key must be <Source>.<kind>: " + name);
    auto key = std::make_pair(ParseSourceName(name.substr(0, dot)), ParseKind(name.substr(dot + 1)));
    Endpoint &ep = endpoints[key];
    ep.method = spec.value("method", ep.method);
    ep.url = spec.value("url", ep.url);
    ep.body = spec.value("body", ep.body);
    ep.items_pointer = spec.value("items_pointer", ep.items_pointer);
    ep.next_pointer = spec.value("next_pointer", ep.next_pointer);
    ep.has_next_pointer = spec.value("has_next_pointer", ep.has_next_pointer);
  }
}

const Endpoint &LiveEndpoints::Get(SourceName source, ResourceKind kind) const {
  auto it = endpoints.find({source, kind});
  if (it == endpoints.end()) {
    throw SourceError(std::string(ToString(source)),
                      "no live endpoint configured for " + std::string(KindName(kind)));
  }
  return it->second;
}

HttpTransport::HttpTransport(std::map<SourceName, std::string> base_urls, LiveEndpoints endpoints,
                             std::chrono::milliseconds timeout)
    : base_urls_(std::move(base_urls)), endpoints_(std::move(endpoints)), timeout_(timeout) {}

HttpTransport::Prepared HttpTransport::Prepare(const ResourceRequest &r) const {
  const Endpoint &ep = endpoints_.Get(r.source, r.kind);
  auto base = base_urls_.find(r.source);
  std::string base_url = base == base_urls_.end() ? "" : base->second;
  while (!base_url.empty() && base_url.back() == '/') base_url.pop_back();

  Prepared p;
  p.method = ep.method;
  p.url = ep.url;
  ReplaceAll(p.url, "{base}", base_url);
  ReplaceAll(p.url, "{key}", r.kind == ResourceKind::kFulltextText ? r.key : UrlEncode(r.key));
  ReplaceAll(p.url, "{cursor}", UrlEncode(r.cursor));
  ReplaceAll(p.url, "{email}", UrlEncode(endpoints_.email));
  p.body = ep.body;
  ReplaceAll(p.body, "{key_json}", r.key.empty() ? "null" : Json(r.key).dump());
  ReplaceAll(p.body, "{cursor_json}", r.cursor.empty() ? "null" : Json(r.cursor).dump());
  return p;
}

std::string HttpTransport::Host(const ResourceRequest &r) const {
  return SplitUrl(Prepare(r).url).first;
}

std::optional<std::string> HttpTransport::Fetch(const ResourceRequest &r) {
  const Prepared p = Prepare(r);
  auto [origin, path] = SplitUrl(p.url);
  httplib::Client client(origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_follow_location(true);

  httplib::Result res = p.method == "POST" ? client.Post(path, p.body, "application/json")
                                           : client.Get(path);
  const std::string source(ToString(r.source));
  if (!res) {
    throw TransientFailure(source + ": " + httplib::to_string(res.error()) + " for " + p.url);
  }
  if (res->status == 404) return std::nullopt;
  if (res->status >= 500) {
    throw TransientFailure(source + ": HTTP " + std::to_string(res->status) + " for " + p.url);
  }
  if (res->status < 200 || res->status >= 300) {
    throw SourceError(source, "HTTP " + std::to_string(res->status) + " for " + p.url);
  }
  return res->body;
}

// Policy.

std::shared_ptr<Clock> Clock::Real() {
  static auto clock = std::make_shared<RealClock>();
  return clock;
}

HostGate::HostGate(FetchPolicy policy, std::shared_ptr<Clock> clock)
    : policy_(policy), clock_(std::move(clock)) {
  policy_.Validate();
}

HostGate::Permit HostGate::Acquire(const std::string &host) {
  steady_clock::time_point start;
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_[host] < policy_.max_concurrency; });
    ++in_flight_[host];
    const auto interval = std::chrono::duration_cast<steady_clock::duration>(
        std::chrono::duration<double>(1.0 / policy_.rate_limit_per_host));
    auto [it, inserted] = next_start_.try_emplace(host, clock_->Now());
    start = std::max(it->second, clock_->Now());
    it->second = start + interval;
  }
  Permit permit(this, host);
  clock_->SleepUntil(start);
  return permit;
}

void HostGate::Release(const std::string &host) {
  {
    std::lock_guard lock(mu_);
    --in_flight_[host];
  }
  cv_.notify_all();
}

PolicyTransport::PolicyTransport(std::shared_ptr<Transport> inner, std::shared_ptr<HostGate> gate,
                                 FetchPolicy policy, std::shared_ptr<Clock> clock)
    : inner_(std::move(inner)), gate_(std::move(gate)), policy_(policy), clock_(std::move(clock)) {
  policy_.Validate();
}

std::optional<std::string> PolicyTransport::Fetch(const ResourceRequest &request) {
  const std::string host = inner_->Host(request);
  for (int attempt = 0;; ++attempt) {
    try {
      auto permit = gate_->Acquire(host);
      return inner_->Fetch(request);
    } catch (const TransientFailure &e) {
      if (attempt >= policy_.retries) {
        throw SourceUnavailable(std::string(ToString(request.source)),
                                std::string(KindName(request.kind)) + " failed after " +
                                    std::to_string(attempt + 1) + " attempt(s): " + e.what());
      }
      const auto delay = std::chrono::milliseconds(
          static_cast<int64_t>(policy_.backoff_base_ms) << std::min(attempt, 30));
      clock_->SleepUntil(clock_->Now() + delay);
    }
  }
}

// Configuration.

HarvestConfig HarvestConfig::Offline(const fs::path &fixtures_dir) {
  HarvestConfig c;
  for (SourceName s : kAllSources) {
    c.sources[s] = SourceDescriptor{s, "", SourceMode::kOffline, fixtures_dir};
  }
  return c;
}

HarvestConfig HarvestConfig::FromJson(const Json &j, const fs::path &base_dir) {
  static const std::map<SourceName, std::string> kDefaultBase = {
      {SourceName::kDataCite, "https://api.datacite.org"},
      {SourceName::kAWI, "https://registry.sensor.awi.de/api/v1"},
      {SourceName::kPangaea, "https://doi.pangaea.de"},
      {SourceName::kUnpaywall, "https://api.unpaywall.org"},
  };
  auto resolve = [&](const std::string &p) -> fs::path {
    if (p.empty()) return {};
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  auto parse_mode = [](const std::string &m) {
    if (m == "offline") return SourceMode::kOffline;
    if (m == "live") return SourceMode::kLive;
    throw Error("source mode must be 'offline' or 'live', got '" + m + "'");
  };

  HarvestConfig c;
  const SourceMode mode = parse_mode(j.value("mode", std::string("offline")));
  const fs::path fixtures = resolve(j.value("fixtures_dir", std::string()));
  const Json sources = j.value("sources", Json::object());
  for (const auto &[name, spec] : sources.items()) ParseSourceName(name);
  for (SourceName s : kAllSources) {
    SourceDescriptor d{s, kDefaultBase.at(s), mode, fixtures};
    auto it = sources.find(std::string(ToString(s)));
    if (it != sources.end()) {
      d.base_url = it->value("base_url", d.base_url);
      if (it->contains("mode")) d.mode = parse_mode(it->at("mode").get<std::string>());
      if (it->contains("fixtures_dir")) d.fixtures_dir = resolve(it->at("fixtures_dir"));
    }
    if (d.mode == SourceMode::kOffline && d.fixtures_dir.empty()) {
      throw Error("source " + std::string(ToString(s)) + " is offline but has no fixtures_dir");
    }
    c.sources[s] = d;
  }
  if (j.contains("policy")) c.policy = FetchPolicy::FromJson(j.at("policy"));
  if (j.contains("endpoints")) c.endpoints.Merge(j.at("endpoints"));
  const Json routing = j.value("routing", Json::object());
  for (const auto &[pid, repo] : routing.items()) {
    c.routing[CanonicalPid(pid)] = ParseRepository(repo.get<std::string>());
  }
  c.workers = j.value("workers", c.workers);
  c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
  if (c.workers < 1) throw Error("workers must be positive");
  return c;
}

// Harvester.

Harvester::Harvester(HarvestConfig config, std::shared_ptr<Clock> clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  config_.policy.Validate();
  auto gate = std::make_shared<HostGate>(config_.policy, clock_);
  std::map<fs::path, std::shared_ptr<Transport>> fixture_transports;
  std::map<SourceName, std::string> base_urls;
  for (const auto &[name, d] : config_.sources) base_urls[name] = d.base_url;
  std::shared_ptr<Transport> http;
  for (const auto &[name, d] : config_.sources) {
    if (d.mode == SourceMode::kOffline) {
      auto &t = fixture_transports[d.fixtures_dir];
      if (!t) t = std::make_shared<FixtureTransport>(d.fixtures_dir);
      transports_[name] = t;
    } else {
      if (!http) {
        http = std::make_shared<PolicyTransport>(
            std::make_shared<HttpTransport>(base_urls, config_.endpoints,
                                            std::chrono::milliseconds(config_.timeout_ms)), gate, config_.policy,
            clock_);
      }
      transports_[name] = http;
    }
  }
}

Harvester::Harvester(HarvestConfig config,
                     std::map<SourceName, std::shared_ptr<Transport>> transports,
                     std::shared_ptr<Clock> clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  config_.policy.Validate();
  auto gate = std::make_shared<HostGate>(config_.policy, clock_);
  for (auto &[name, t] : transports) {
    transports_[name] = std::make_shared<PolicyTransport>(t, gate, config_.policy, clock_);
  }
}

Transport &Harvester::TransportFor(SourceName source) {
  auto it = transports_.find(source);
  if (it == transports_.end()) {
    throw SourceError(std::string(ToString(source)), "source not configured");
  }
  return *it->second;
}

std::vector<Json> Harvester::FetchPaged(ResourceRequest request, bool required,
                                        std::string *retrieved_at) {
  Transport &transport = TransportFor(request.source);
  const std::string source(ToString(request.source));
  std::string items_ptr = "/items", next_ptr = "/next", has_next_ptr;
  if (!transport.offline()) {
    const Endpoint &ep = config_.endpoints.Get(request.source, request.kind);
    items_ptr = ep.items_pointer;
    next_ptr = ep.next_pointer;
    has_next_ptr = ep.has_next_pointer;
  }

  std::vector<Json> items;
  std::set<std::string> seen_cursors;
  for (bool first = true;; first = false) {
    std::optional<std::string> body = transport.Fetch(request);
    if (!body) {
      if (!first || !required) return items;
      if (transport.offline()) {
        throw FixtureMissing(source + ": no fixture for " + std::string(KindName(request.kind)));
      }
      throw SourceError(source, std::string(KindName(request.kind)) + " not found");
    }
    const Json page = ParseBody(*body, request.source, std::string(KindName(request.kind)));
    if (page.is_array()) {
      items.insert(items.end(), page.begin(), page.end());
      return items;
    }
    if (!page.is_object()) throw MalformedPayload(source + ": page is neither array nor object");
    if (retrieved_at && first && page.contains("retrieved_at")) {
      *retrieved_at = page["retrieved_at"].get<std::string>();
    }
    const Json::json_pointer ip(items_ptr);
    if (!page.contains(ip) || !page.at(ip).is_array()) {
      throw MalformedPayload(source + ": page has no item array at " + items_ptr);
    }
    for (const auto &item : page.at(ip)) items.push_back(item);

    const Json::json_pointer np(next_ptr);
    if (!has_next_ptr.empty()) {
      const Json::json_pointer hp(has_next_ptr);
      if (!page.contains(hp) || !page.at(hp).is_boolean() || !page.at(hp).get<bool>()) break;
    }
    if (!page.contains(np) || !page.at(np).is_string() || page.at(np).get<std::string>().empty()) {
      break;
    }
    request.cursor = page.at(np).get<std::string>();
    if (!seen_cursors.insert(request.cursor).second) {
      throw MalformedPayload(source + ": pagination cycle at '" + request.cursor + "'");
    }
  }
  return items;
}

std::vector<RawRecord> Harvester::HarvestInstruments(SourceName source) {
  if (source != SourceName::kDataCite && source != SourceName::kAWI) {
    throw Error("instruments are harvested from DataCite or AWI only");
  }
  std::string retrieved_at;
  auto items = FetchPaged(ResourceRequest{source, ResourceKind::kInstruments, "", ""}, true,
                          &retrieved_at);
  if (retrieved_at.empty()) retrieved_at = TransportFor(source).offline() ? kEpoch : NowUtc();
  std::vector<RawRecord> out;
  out.reserve(items.size());
  for (auto &item : items) {
    if (!item.is_object()) {
      throw MalformedPayload(std::string(ToString(source)) + ": instrument is not an object: " +
                             item.dump());
    }
    out.push_back(RawRecord{source, std::move(item), retrieved_at});
  }
  return out;
}

Repository Harvester::RouteFor(const InstrumentRecord &instrument) const {
  auto it = config_.routing.find(CanonicalPid(instrument.pid));
  if (it != config_.routing.end()) return it->second;
  return instrument.source == InstrumentSource::kAWI ? Repository::kPangaea : Repository::kDataCite;
}

std::vector<DatasetRecord> Harvester::FetchDatasetsForInstrument(
    const InstrumentRecord &instrument) {
  const Repository repo = RouteFor(instrument);
  if (repo == Repository::kOther) return {};
  const SourceName source = repo == Repository::kPangaea ? SourceName::kPangaea
                                                         : SourceName::kDataCite;
  const std::string pid = CanonicalPid(instrument.pid);
  auto items = FetchPaged(ResourceRequest{source, ResourceKind::kDatasets, pid, ""}, false, nullptr);

  std::vector<DatasetRecord> out;
  for (const auto &item : items) {
    if (!item.is_object()) throw MalformedPayload("dataset entry is not an object");
    DatasetRecord d;
    d.doi = PayloadDoi(item, source, "dataset");
    d.title = StringField(item, "title");
    d.repository = repo;
    d.produced_by.push_back(pid);
    if (auto it = item.find("produced_by"); it != item.end() && it->is_array()) {
      for (const auto &p : *it) {
        std::string other = CanonicalPid(p.get<std::string>());
        if (std::find(d.produced_by.begin(), d.produced_by.end(), other) == d.produced_by.end()) {
          d.produced_by.push_back(other);
        }
      }
    }
    d.content_uri = StringField(item, "content_uri");
    if (d.content_uri.empty() && repo == Repository::kPangaea) {
      const SourceDescriptor *desc = nullptr;
      if (auto it = config_.sources.find(SourceName::kPangaea); it != config_.sources.end()) {
        desc = &it->second;
      }
      if (desc && desc->mode == SourceMode::kOffline) {
        fs::path p = desc->fixtures_dir / "pangaea" / "content" / (DoiFileStem(d.doi) + ".tab");
        if (fs::exists(p)) d.content_uri = p.string();
      } else if (desc) {
        d.content_uri = desc->base_url + "/" + d.doi.value();
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<std::vector<DatasetRecord>> Harvester::FetchDatasetsForInstruments(
    std::span<const InstrumentRecord> instruments) {
  std::vector<std::vector<DatasetRecord>> out(instruments.size());
  std::vector<std::exception_ptr> errors(instruments.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < instruments.size(); i = next++) {
      try {
        out[i] = FetchDatasetsForInstrument(instruments[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const size_t n = std::min<size_t>(config_.workers, instruments.size());
  std::vector<std::thread> threads;
  for (size_t t = 1; t < n; ++t) threads.emplace_back(work);
  work();
  for (auto &t : threads) t.join();
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<ArticleRecord> Harvester::ParseArticles(const std::vector<Json> &items,
                                                    SourceName source,
                                                    const std::string &context) {
  std::vector<ArticleRecord> out;
  std::set<Doi> seen;
  for (const auto &item : items) {
    if (!item.is_object()) throw MalformedPayload(context + ": article entry is not an object");
    ArticleRecord a;
    a.doi = PayloadDoi(item, source, "article");
    if (!seen.insert(a.doi).second) continue;
    a.title = StringField(item, "title");
    a.abstract = StringField(item, "abstract");
    a.research_field = StringField(item, "research_field");
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<ArticleRecord> Harvester::FetchArticlesForDataset(const DatasetRecord &dataset) {
  const SourceName source = dataset.repository == Repository::kPangaea ? SourceName::kPangaea
                                                                       : SourceName::kDataCite;
  auto items = FetchPaged(
      ResourceRequest{source, ResourceKind::kArticleLinks, dataset.doi.value(), ""}, false, nullptr);
  auto articles = ParseArticles(items, source, dataset.doi.value());
  for (auto &a : articles) a.linked_dataset_dois.push_back(dataset.doi);
  return articles;
}

std::vector<ArticleRecord> Harvester::FetchCitingArticles(const ArticleRecord &instrument_paper) {
  const SourceName source = SourceName::kDataCite;
  auto items = FetchPaged(
      ResourceRequest{source, ResourceKind::kCitations, instrument_paper.doi.value(), ""}, false,
      nullptr);
  std::vector<ArticleRecord> out;
  for (auto &a : ParseArticles(items, source, instrument_paper.doi.value())) {
    if (a.doi == instrument_paper.doi) continue;
    a.cites_instrument_paper = true;
    a.cites.push_back(instrument_paper.doi);
    out.push_back(std::move(a));
  }
  return out;
}

std::string Harvester::ResolveFulltext(const ArticleRecord &article) {
  const std::string doi = article.doi.value();
  Transport &transport = TransportFor(SourceName::kUnpaywall);
  auto body =
      transport.Fetch(ResourceRequest{SourceName::kUnpaywall, ResourceKind::kFulltextLocation, doi, ""});
  std::optional<Json> response;
  if (body) response = ParseBody(*body, SourceName::kUnpaywall, "fulltext location");

  auto pdf_of = [](const Json &r) -> std::optional<std::string> {
    if (auto it = r.find("pdf"); it != r.end()) {
      if (it->is_string() && !it->get<std::string>().empty()) return it->get<std::string>();
      return std::nullopt;
    }
    const Json::json_pointer p("/best_oa_location/url_for_pdf");
    if (r.contains(p) && r.at(p).is_string()) return r.at(p).get<std::string>();
    return std::nullopt;
  };

  if (transport.offline()) {
    if (response && !pdf_of(*response)) {
      throw FulltextUnavailable(doi + ": no open-access location");
    }
    const fs::path root = config_.sources.at(SourceName::kUnpaywall).fixtures_dir;
    const fs::path text = root / "articles" / (DoiFileStem(article.doi) + ".txt");
    if (!fs::is_regular_file(text)) throw FulltextUnavailable(doi + ": no fixture text");
    return text.string();
  }
  if (!response) throw FulltextUnavailable(doi + ": unknown to the resolver");
  auto pdf = pdf_of(*response);
  if (!pdf) throw FulltextUnavailable(doi + ": no open-access location");
  return *pdf;
}

std::string Harvester::ReadFulltext(const std::string &locator) {
  auto body = TransportFor(SourceName::kUnpaywall)
                  .Fetch(ResourceRequest{SourceName::kUnpaywall, ResourceKind::kFulltextText,
                                         locator, ""});
  if (!body) throw FulltextUnavailable(locator + ": not found");
  return *body;
}

std::optional<std::string> Harvester::FetchDatasetContent(const DatasetRecord &dataset) {
  if (dataset.repository != Repository::kPangaea) return std::nullopt;
  return TransportFor(SourceName::kPangaea)
      .Fetch(ResourceRequest{SourceName::kPangaea, ResourceKind::kDatasetContent,
                             dataset.doi.value(), ""});
}

}  // namespace instkg
