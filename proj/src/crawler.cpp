#include "claimlab/crawler.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "claimlab/errors.hpp"
#include "claimlab/text.hpp"

namespace claimlab {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kCacheVersion = 1;

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FileError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const fs::path& target, const std::string& bytes) {
  std::ostringstream tmp_name;
  tmp_name << target.filename().string() << ".tmp." << std::this_thread::get_id();
  const fs::path tmp = target.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FileError("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string base64_encode(const std::string& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(const std::string& b64) {
  if (b64.empty()) return {};
  std::string out(3 * b64.size() / 4, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(b64.data()),
                                static_cast<int>(b64.size()));
  if (n < 0) throw SchemaError("invalid base64 body");
  std::size_t padding = 0;
  if (b64.size() >= 1 && b64[b64.size() - 1] == '=') ++padding;
  if (b64.size() >= 2 && b64[b64.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

bool is_retryable_status(int status) { return status >= 500 && status <= 599; }

}  // namespace

std::int64_t now_epoch_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void CrawlPolicy::validate() const {
  if (min_interval_ms_per_host < 0) throw ConfigError("min_interval_ms_per_host must be >= 0");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (retry_backoff_ms < 0) throw ConfigError("retry_backoff_ms must be >= 0");
  if (max_parallel < 1) throw ConfigError("max_parallel must be >= 1");
  if (offline_only && cache_dir.empty()) throw ConfigError("offline mode requires a cache directory");
}

// --- ResponseCache ---------------------------------------------------------

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {}

std::string ResponseCache::key_for(const std::string& url) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : url) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

fs::path ResponseCache::metadata_path(const std::string& url) const {
  const std::string key = key_for(url);
  return dir_ / key.substr(0, 2) / (key + ".json");
}

fs::path ResponseCache::body_path(const std::string& url) const {
  const std::string key = key_for(url);
  return dir_ / key.substr(0, 2) / (key + ".body");
}

std::optional<CrawlResult> ResponseCache::load(const std::string& url) const {
  const fs::path meta_path = metadata_path(url);
  std::error_code ec;
  if (!fs::exists(meta_path, ec)) return std::nullopt;
  json meta;
  try {
    meta = json::parse(read_all(meta_path));
  } catch (const json::parse_error& e) {
    throw ParseError("corrupt cache entry " + meta_path.string(), meta_path.string(), e.byte);
  }
  if (meta.value("url", std::string()) != url) return std::nullopt;  // hash collision
  CrawlResult r;
  r.requested_url = url;
  r.final_url = url;
  r.status = meta.at("status").get<int>();
  r.headers = meta.at("headers").get<HeaderMap>();
  r.fetched_at = meta.at("fetched_at").get<std::int64_t>();
  r.body = read_all(body_path(url));
  if (r.body.size() != meta.at("body_size").get<std::size_t>()) {
    throw FileError("cache body size mismatch for " + url);
  }
  r.from_cache = true;
  return r;
}

void ResponseCache::store(const CrawlResult& r) {
  const fs::path meta_path = metadata_path(r.requested_url);
  fs::create_directories(meta_path.parent_path());
  json meta{{"version", kCacheVersion},
            {"url", r.requested_url},
            {"status", r.status},
            {"headers", r.headers},
            {"fetched_at", r.fetched_at},
            {"body_size", r.body.size()}};
  write_atomically(body_path(r.requested_url), r.body);
  write_atomically(meta_path, meta.dump(2) + "\n");
}

bool ResponseCache::erase(const std::string& url) {
  std::error_code ec;
  const bool had = fs::remove(metadata_path(url), ec);
  fs::remove(body_path(url), ec);
  return had;
}

// --- RateLimiter -----------------------------------------------------------

RateLimiter::Permit RateLimiter::acquire(const std::string& host) {
  std::unique_lock lock(mu_);
  HostState& st = hosts_[host];
  cv_.wait(lock, [&] { return !st.busy; });
  st.busy = true;
  const auto wake = st.next_ok;
  lock.unlock();
  std::this_thread::sleep_until(wake);
  return Permit(this, host);
}

void RateLimiter::release(const std::string& host) {
  {
    std::lock_guard lock(mu_);
    HostState& st = hosts_[host];
    st.busy = false;
    st.next_ok = std::chrono::steady_clock::now() + interval_;
  }
  cv_.notify_all();
}

// --- Crawler ---------------------------------------------------------------

Crawler::Crawler(CrawlPolicy policy, std::shared_ptr<HttpTransport> transport)
    : policy_(std::move(policy)),
      transport_(std::move(transport)),
      limiter_(std::chrono::milliseconds(policy_.min_interval_ms_per_host)) {
  policy_.validate();
  if (!policy_.cache_dir.empty()) cache_.emplace(policy_.cache_dir);
  if (!transport_ && !policy_.offline_only) transport_ = std::make_shared<HttplibTransport>();
}

CrawlResult Crawler::fetch(const std::string& url) {
  const auto parsed = parse_url(url);
  if (!parsed || (parsed->scheme != "http" && parsed->scheme != "https")) {
    throw DomainError("not an http(s) URL: " + url);
  }
  if (cache_) {
    if (auto hit = cache_->load(url)) {
      ++cache_hits_;
      return *hit;
    }
  }
  if (policy_.offline_only || !transport_) throw CacheMissError(url);

  for (int attempt = 0;; ++attempt) {
    try {
      HttpResponse resp = [&] {
        const auto permit = limiter_.acquire(parsed->host);
        ++network_requests_;
        return transport_->get(*parsed, policy_.user_agent);
      }();
      if (is_retryable_status(resp.status)) {
        if (attempt < policy_.max_retries) {
          std::this_thread::sleep_for(
              std::chrono::milliseconds(policy_.retry_backoff_ms << std::min(attempt, 16)));
          continue;
        }
        throw UpstreamError("HTTP " + std::to_string(resp.status) + " from " + url + " after " +
                                std::to_string(attempt + 1) + " attempts",
                            resp.status);
      }
      if (resp.status < 100 || resp.status > 599) {
        throw TransportError("invalid HTTP status " + std::to_string(resp.status) + " from " + url,
                             false);
      }
      CrawlResult r;
      r.requested_url = url;
      r.final_url = url;
      r.status = resp.status;
      r.headers = std::move(resp.headers);
      r.body = std::move(resp.body);
      r.fetched_at = now_epoch_ms();
      r.from_cache = false;
      if (cache_) cache_->store(r);
      return r;
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt >= policy_.max_retries) {
        throw TransportError(std::string(e.what()) + " (after " + std::to_string(attempt + 1) +
                                 " attempts)",
                             e.retryable());
      }
      std::this_thread::sleep_for(
          std::chrono::milliseconds(policy_.retry_backoff_ms << std::min(attempt, 16)));
    }
  }
}

CrawlResult Crawler::fetch_following(const std::string& url, int max_hops) {
  if (max_hops < 1) throw DomainError("max_hops must be at least 1");
  std::vector<std::string> chain{url};
  std::string current = url;
  bool all_cached = true;
  for (int hop = 0;; ++hop) {
    const auto parsed = parse_url(current);
    if (!parsed || (parsed->scheme != "http" && parsed->scheme != "https")) {
      if (hop == 0) throw DomainError("not an http(s) URL: " + current);
      throw ResolutionError("redirect to a non-http(s) URL: " + current, chain);
    }
    CrawlResult r = fetch(current);
    all_cached = all_cached && r.from_cache;
    const auto location = r.headers.find("Location");
    if (r.status < 300 || r.status > 399 || location == r.headers.end()) {
      r.requested_url = url;
      r.final_url = current;
      r.from_cache = all_cached;
      return r;
    }
    std::string next = resolve_reference(*parsed, location->second);
    const bool loop = std::find(chain.begin(), chain.end(), next) != chain.end();
    chain.push_back(next);
    if (loop) throw ResolutionError("redirect loop at " + next, chain);
    if (hop >= max_hops) {
      throw ResolutionError("redirect budget of " + std::to_string(max_hops) + " hops exhausted",
                            chain);
    }
    current = std::move(next);
  }
}

std::vector<CrawlEntry> Crawler::fetch_all(std::span<const std::string> urls, int max_hops) {
  std::vector<CrawlEntry> entries(urls.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < urls.size(); i = next++) {
      CrawlEntry& e = entries[i];
      e.url = urls[i];
      try {
        e.result = max_hops > 0 ? fetch_following(urls[i], max_hops) : fetch(urls[i]);
        if (e.result->status >= 400) {
          e.error_kind = "http-status";
          e.error = "HTTP " + std::to_string(e.result->status);
        }
      } catch (const CacheMissError& ex) {
        e.error_kind = "cache-miss";
        e.error = ex.what();
      } catch (const UpstreamError& ex) {
        e.error_kind = "upstream";
        e.error = ex.what();
      } catch (const TransportError& ex) {
        e.error_kind = "transport";
        e.error = ex.what();
      } catch (const ResolutionError& ex) {
        e.error_kind = "resolution";
        e.error = ex.what();
      } catch (const DomainError& ex) {
        e.error_kind = "invalid-url";
        e.error = ex.what();
      } catch (const std::exception& ex) {
        e.error_kind = "internal";
        e.error = ex.what();
      }
    }
  };
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(policy_.max_parallel), urls.size());
  std::vector<std::jthread> pool;
  pool.reserve(n_workers);
  for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  return entries;
}

// --- serialization ---------------------------------------------------------

json to_json(const CrawlEntry& e) {
  json j{{"url", e.url}, {"record_id", e.record_id}};
  if (e.result) {
    const CrawlResult& r = *e.result;
    json res{{"requested_url", r.requested_url},
             {"final_url", r.final_url},
             {"status", r.status},
             {"headers", r.headers},
             {"fetched_at", r.fetched_at},
             {"from_cache", r.from_cache}};
    if (text::is_valid_utf8(r.body)) {
      res["body"] = r.body;
    } else {
      res["body_base64"] = base64_encode(r.body);
    }
    j["result"] = std::move(res);
  } else {
    j["result"] = nullptr;
  }
  if (!e.ok()) {
    j["error_kind"] = e.error_kind;
    j["error"] = e.error;
  }
  return j;
}

CrawlEntry crawl_entry_from_json(const json& j) {
  CrawlEntry e;
  try {
    e.url = j.at("url").get<std::string>();
    e.record_id = j.value("record_id", std::uint64_t{0});
    e.error_kind = j.value("error_kind", std::string());
    e.error = j.value("error", std::string());
    if (const auto& res = j.at("result"); !res.is_null()) {
      CrawlResult r;
      r.requested_url = res.at("requested_url").get<std::string>();
      r.final_url = res.at("final_url").get<std::string>();
      r.status = res.at("status").get<int>();
      r.headers = res.value("headers", HeaderMap{});
      r.fetched_at = res.at("fetched_at").get<std::int64_t>();
      r.from_cache = res.at("from_cache").get<bool>();
      if (res.contains("body_base64")) {
        r.body = base64_decode(res.at("body_base64").get<std::string>());
      } else {
        r.body = res.at("body").get<std::string>();
      }
      e.result = std::move(r);
    }
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("malformed crawl entry: ") + ex.what());
  }
  return e;
}

void write_crawl(const std::vector<CrawlEntry>& entries, const fs::path& path) {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back(to_json(e));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  out << arr.dump(2) << '\n';
}

std::vector<CrawlEntry> read_crawl(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_all(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON at byte " + std::to_string(e.byte),
                     path.string(), e.byte);
  }
  if (!doc.is_array()) throw SchemaError(path.string() + ": expected an array of crawl entries");
  std::vector<CrawlEntry> out;
  for (const auto& j : doc) out.push_back(crawl_entry_from_json(j));
  return out;
}

}  // namespace claimlab
