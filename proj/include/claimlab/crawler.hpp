#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "claimlab/url.hpp"

namespace claimlab {

struct CrawlPolicy {
  std::int64_t min_interval_ms_per_host = 1000;
  int max_retries = 3;
  std::int64_t retry_backoff_ms = 250;
  int max_parallel = 4;
  // Empty disables caching.
  std::filesystem::path cache_dir;
  bool offline_only = false;
  std::string user_agent = "claimlab/1.0 (fact-check dataset builder)";

  void validate() const;
};

// Only Location and Content-Type are kept from response headers.
using HeaderMap = std::map<std::string, std::string>;

struct CrawlResult {
  std::string requested_url;
  std::string final_url;
  int status = 0;
  HeaderMap headers;
  std::string body;
  std::int64_t fetched_at = 0;
  bool from_cache = false;

  bool operator==(const CrawlResult&) const = default;
};

struct HttpResponse {
  int status = 0;
  HeaderMap headers;
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // Single GET, no redirect following. Throws TransportError.
  virtual HttpResponse get(const Url& url, const std::string& user_agent) = 0;
};

// cpp-httplib backed transport. Host overrides send requests for a host to
// another address over plain HTTP while keeping the original Host header,
// which is how the fixture server stands in for remote sites.
class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::milliseconds timeout = std::chrono::seconds(10));

  void add_host_override(const std::string& host, const std::string& address, int port);
  HttpResponse get(const Url& url, const std::string& user_agent) override;

 private:
  std::chrono::milliseconds timeout_;
  std::map<std::string, std::pair<std::string, int>> overrides_;
};

// On-disk response cache. Layout, per entry, keyed by the exact URL:
//   <dir>/<h[0:2]>/<h>.json   metadata {version, url, status, headers, fetched_at, body_size}
//   <dir>/<h[0:2]>/<h>.body   raw body bytes
// where h is the 16-hex-digit FNV-1a 64 hash of the URL. Both files are
// written to a temporary name and renamed; the .json appears last.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  static std::string key_for(const std::string& url);
  std::filesystem::path metadata_path(const std::string& url) const;
  std::filesystem::path body_path(const std::string& url) const;

  std::optional<CrawlResult> load(const std::string& url) const;
  void store(const CrawlResult& result);
  bool erase(const std::string& url);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

// Per-host politeness: at most one request in flight per host, and the next
// one starts no sooner than `interval` after the previous permit was released.
class RateLimiter {
 public:
  class Permit {
   public:
    Permit(RateLimiter* owner, std::string host) : owner_(owner), host_(std::move(host)) {}
    Permit(Permit&& o) noexcept : owner_(std::exchange(o.owner_, nullptr)), host_(std::move(o.host_)) {}
    Permit& operator=(Permit&&) = delete;
    ~Permit() {
      if (owner_) owner_->release(host_);
    }

   private:
    RateLimiter* owner_;
    std::string host_;
  };

  explicit RateLimiter(std::chrono::milliseconds interval) : interval_(interval) {}
  [[nodiscard]] Permit acquire(const std::string& host);

 private:
  struct HostState {
    bool busy = false;
    std::chrono::steady_clock::time_point next_ok{};
  };
  void release(const std::string& host);

  std::chrono::milliseconds interval_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::unordered_map<std::string, HostState> hosts_;
};

struct CrawlEntry {
  std::string url;
  // Feed record the URL came from; 0 when unknown.
  std::uint64_t record_id = 0;
  std::optional<CrawlResult> result;
  // Empty on success. Kinds: cache-miss, upstream, transport, resolution,
  // http-status, invalid-url, internal (e.g. a corrupt cache entry).
  std::string error_kind;
  std::string error;

  bool ok() const { return error_kind.empty(); }
};

class Crawler {
 public:
  explicit Crawler(CrawlPolicy policy, std::shared_ptr<HttpTransport> transport = nullptr);

  // Cached or rate-limited GET with retries on 5xx/transport failures.
  CrawlResult fetch(const std::string& url);

  // fetch() along a 3xx chain; requested_url is `url`, final_url the last
  // hop. At most max_hops + 1 fetches. Throws ResolutionError.
  CrawlResult fetch_following(const std::string& url, int max_hops);

  // Index-aligned with `urls`; failures are recorded per entry. With
  // max_hops > 0 redirects are followed.
  std::vector<CrawlEntry> fetch_all(std::span<const std::string> urls, int max_hops = 0);

  const CrawlPolicy& policy() const { return policy_; }
  std::int64_t network_requests() const { return network_requests_.load(); }
  std::int64_t cache_hits() const { return cache_hits_.load(); }

 private:
  CrawlPolicy policy_;
  std::shared_ptr<HttpTransport> transport_;
  std::optional<ResponseCache> cache_;
  RateLimiter limiter_;
  std::atomic<std::int64_t> network_requests_{0};
  std::atomic<std::int64_t> cache_hits_{0};
};

nlohmann::json to_json(const CrawlEntry& e);
CrawlEntry crawl_entry_from_json(const nlohmann::json& j);

void write_crawl(const std::vector<CrawlEntry>& entries, const std::filesystem::path& path);
std::vector<CrawlEntry> read_crawl(const std::filesystem::path& path);

std::int64_t now_epoch_ms();

}  // namespace claimlab
