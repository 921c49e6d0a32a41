#include "claimlab/url.hpp"

#include <charconv>

#include "claimlab/text.hpp"

namespace claimlab {

int Url::effective_port() const {
  if (port != 0) return port;
  if (scheme == "https") return 443;
  if (scheme == "ftp") return 21;
  if (scheme == "sftp") return 22;
  return 80;
}

std::string Url::origin() const {
  std::string out = scheme + "://" + host;
  if (port != 0) out += ":" + std::to_string(port);
  return out;
}

std::string Url::str() const { return origin() + target; }

std::optional<Url> parse_url(std::string_view text) {
  const auto sep = text.find("://");
  if (sep == std::string_view::npos || sep == 0) return std::nullopt;
  Url url;
  url.scheme = text::to_lower_ascii(text.substr(0, sep));
  for (char c : url.scheme) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.')) {
      return std::nullopt;
    }
  }
  std::string_view rest = text.substr(sep + 3);
  const auto path_start = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, path_start);
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority = authority.substr(at + 1);
  }
  if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    const auto digits = authority.substr(colon + 1);
    int port = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc() || p != digits.data() + digits.size() || port <= 0 || port > 65535) {
      return std::nullopt;
    }
    url.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  url.host = text::to_lower_ascii(authority);
  if (path_start == std::string_view::npos) {
    url.target = "/";
  } else {
    std::string_view target = rest.substr(path_start);
    if (const auto hash = target.find('#'); hash != std::string_view::npos) {
      target = target.substr(0, hash);
    }
    url.target = std::string(target);
    if (url.target.empty() || url.target[0] != '/') url.target.insert(0, "/");
  }
  return url;
}

std::string resolve_reference(const Url& base, std::string_view ref) {
  const std::string trimmed = text::trim(ref);
  if (parse_url(trimmed)) return trimmed;
  if (trimmed.starts_with("//")) return base.scheme + ":" + trimmed;
  if (trimmed.starts_with("/")) return base.origin() + trimmed;
  const std::string path = base.target.substr(0, base.target.find_first_of("?#"));
  if (trimmed.empty()) return base.origin() + base.target.substr(0, base.target.find('#'));
  if (trimmed.starts_with("?")) return base.origin() + path + trimmed;
  if (trimmed.starts_with("#")) {
    return base.origin() + base.target.substr(0, base.target.find('#')) + trimmed;
  }
  const std::string dir = path.substr(0, path.rfind('/') + 1);
  return base.origin() + dir + trimmed;
}

}  // namespace claimlab
