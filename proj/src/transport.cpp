#include <httplib.h>

#include "claimlab/crawler.hpp"
#include "claimlab/errors.hpp"

namespace claimlab {

HttplibTransport::HttplibTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

void HttplibTransport::add_host_override(const std::string& host, const std::string& address,
                                         int port) {
  overrides_[host] = {address, port};
}

HttpResponse HttplibTransport::get(const Url& url, const std::string& user_agent) {
  std::string endpoint = url.scheme + "://" + url.host + ":" + std::to_string(url.effective_port());
  if (auto it = overrides_.find(url.host); it != overrides_.end()) {
    endpoint = "http://" + it->second.first + ":" + std::to_string(it->second.second);
  }
  httplib::Client client(endpoint);
  if (!client.is_valid()) throw TransportError("unsupported endpoint " + endpoint, false);
  client.set_follow_location(false);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_keep_alive(false);

  httplib::Headers headers{{"User-Agent", user_agent}};
  std::string host_header = url.host;
  if (url.port != 0) host_header += ":" + std::to_string(url.port);
  headers.emplace("Host", host_header);

  auto res = client.Get(url.target, headers);
  if (!res) {
    throw TransportError("GET " + url.str() + " failed: " + httplib::to_string(res.error()), true);
  }
  HttpResponse out;
  out.status = res->status;
  out.body = res->body;
  for (const char* name : {"Location", "Content-Type"}) {
    if (res->has_header(name)) out.headers[name] = res->get_header_value(name);
  }
  return out;
}

}  // namespace claimlab
