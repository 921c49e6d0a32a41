#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace claimlab {

struct Url {
  std::string scheme;  // lower-case
  std::string host;    // lower-case
  int port = 0;        // 0 when absent from the text
  std::string target;  // path + query, at least "/"

  int effective_port() const;
  std::string origin() const;
  std::string str() const;
};

// Absolute URLs only ("scheme://host[:port][/path]").
std::optional<Url> parse_url(std::string_view text);

// Resolves a Location header value against the URL that produced it.
std::string resolve_reference(const Url& base, std::string_view ref);

}  // namespace claimlab
