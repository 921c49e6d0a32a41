#include "fixture_server.hpp"

#include <httplib.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "claimlab/errors.hpp"
#include "claimlab/url.hpp"

namespace claimlab::fixture {
namespace fs = std::filesystem;
using nlohmann::json;

Server::Server() : server_(std::make_unique<httplib::Server>()) {}

Server::~Server() { stop(); }

std::string Server::key(const std::string& url) {
  const auto u = parse_url(url);
  if (!u) throw std::invalid_argument("fixture route needs an absolute URL: " + url);
  return u->host + u->target;
}

void Server::route(const std::string& url, Response response) {
  script(url, {std::move(response)});
}

void Server::script(const std::string& url, std::vector<Response> responses) {
  if (responses.empty()) throw std::invalid_argument("empty response script for " + url);
  std::lock_guard lock(mu_);
  routes_[key(url)] = Route{std::move(responses), 0};
  urls_[key(url)] = url;
}

void Server::load_routes(const fs::path& routes_json) {
  std::ifstream in(routes_json, std::ios::binary);
  if (!in) throw FileError("cannot open " + routes_json.string());
  const json doc = json::parse(in);
  const fs::path base = routes_json.parent_path();
  for (const auto& [url, spec] : doc.items()) {
    Response r;
    r.status = spec.value("status", 200);
    if (spec.contains("location")) r.headers["Location"] = spec["location"].get<std::string>();
    if (spec.contains("file")) {
      std::ifstream f(base / spec["file"].get<std::string>(), std::ios::binary);
      if (!f) throw FileError("missing fixture file " + spec["file"].get<std::string>());
      std::ostringstream ss;
      ss << f.rdbuf();
      r.body = ss.str();
      r.headers["Content-Type"] = "text/html; charset=utf-8";
    } else if (spec.contains("body")) {
      r.body = spec["body"].get<std::string>();
      r.headers["Content-Type"] = "text/plain; charset=utf-8";
    }
    route(url, std::move(r));
  }
}

void Server::handle(const std::string& host, const std::string& target, const std::string& agent,
                    int& status, HeaderMap& headers, std::string& body) {
  std::lock_guard lock(mu_);
  log_.push_back(Request{host, target, agent, std::chrono::steady_clock::now()});
  auto it = routes_.find(host + target);
  if (it == routes_.end()) {
    status = 404;
    body = "no fixture for " + host + target;
    headers["Content-Type"] = "text/plain";
    return;
  }
  Route& r = it->second;
  const Response& resp = r.responses[std::min(r.served, r.responses.size() - 1)];
  ++r.served;
  status = resp.status;
  headers = resp.headers;
  body = resp.body;
}

void Server::start() {
  server_->Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
    std::string host = req.get_header_value("Host");
    if (auto colon = host.find(':'); colon != std::string::npos) host.resize(colon);
    for (char& c : host) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    int status = 0;
    HeaderMap headers;
    std::string body;
    handle(host, req.target, req.get_header_value("User-Agent"), status, headers, body);
    res.status = status;
    std::string type;
    for (const auto& [k, v] : headers) {
      if (k == "Content-Type") type = v;
      else res.set_header(k, v);
    }
    if (!type.empty()) res.set_content(body, type);
    else res.body = body;
  });
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("fixture server could not bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void Server::stop() {
  if (thread_.joinable()) {
    server_->stop();
    thread_.join();
  }
}

std::vector<std::string> Server::hosts() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, url] : urls_) {
    const std::string host = parse_url(url)->host;
    if (out.empty() || out.back() != host) out.push_back(host);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> Server::overrides() const {
  std::vector<std::string> out;
  for (const auto& h : hosts()) out.push_back(h + "=127.0.0.1:" + std::to_string(port_));
  return out;
}

std::vector<std::string> Server::urls() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, url] : urls_) out.push_back(url);
  return out;
}

std::vector<Request> Server::requests() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::size_t Server::hits(const std::string& url) const {
  const std::string k = key(url);
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& r : log_) n += (r.host + r.target == k) ? 1 : 0;
  return n;
}

void Server::clear_log() {
  std::lock_guard lock(mu_);
  log_.clear();
}

std::map<std::string, std::chrono::milliseconds> min_gaps(const std::vector<Request>& log) {
  std::map<std::string, std::chrono::steady_clock::time_point> last;
  std::map<std::string, std::chrono::milliseconds> out;
  for (const auto& r : log) {
    if (auto it = last.find(r.host); it != last.end()) {
      const auto gap = std::chrono::duration_cast<std::chrono::milliseconds>(r.at - it->second);
      auto [g, inserted] = out.emplace(r.host, gap);
      if (!inserted && gap < g->second) g->second = gap;
    }
    last[r.host] = r.at;
  }
  return out;
}

void seed_cache(const Server& server, const fs::path& cache_dir, std::int64_t fetched_at) {
  ResponseCache cache(cache_dir);
  std::lock_guard lock(server.mu_);
  for (const auto& [k, route] : server.routes_) {
    const Response& resp = route.responses.back();
    if (resp.status >= 500) continue;
    CrawlResult r;
    r.requested_url = server.urls_.at(k);
    r.final_url = r.requested_url;
    r.status = resp.status;
    r.headers = resp.headers;
    r.body = resp.body;
    r.fetched_at = fetched_at;
    cache.store(r);
  }
}

}  // namespace claimlab::fixture
