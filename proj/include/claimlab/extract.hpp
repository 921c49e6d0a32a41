#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "claimlab/ingest.hpp"

namespace claimlab {

class Crawler;

enum class UrlScheme { http, https, ftp, sftp, none };

std::string_view to_string(UrlScheme s);
UrlScheme scheme_from_string(std::string_view s);

struct ExtractedUrl {
  std::string raw;
  UrlScheme scheme = UrlScheme::none;
  std::string host;
  std::optional<std::string> resolved;
  std::uint64_t source_record_id = 0;
  // Byte offset of `raw` in the source text.
  std::size_t offset = 0;

  bool crawlable() const { return scheme == UrlScheme::http || scheme == UrlScheme::https; }
  bool operator==(const ExtractedUrl&) const = default;
};

// The collector's URL pattern, matched case-insensitively.
inline constexpr std::string_view kUrlPattern =
    R"(((?:(https?|s?ftp):\/\/)?(?:www\.)?((?:(?:[A-Z0-9][a-zA-Z0-9-]{0,61}[A-Z0-9]*\.)+)([A-Z]{2,6})|(?:\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}))(?::(\d{1,5}))?(?:(\/\S+)*)))";

// All non-overlapping matches, left to right.
std::vector<ExtractedUrl> extract_urls(std::string_view text);

// Matches for every record, tagged with the record id.
std::vector<ExtractedUrl> extract_from_records(const std::vector<FeedRecord>& records);

inline constexpr int kDefaultMaxHops = 10;

// Follows 3xx Location headers through the crawler (and so through its
// cache and rate limiter). Issues at most max_hops + 1 requests.
std::string resolve_redirects(const std::string& url, int max_hops, Crawler& crawler);

nlohmann::json to_json(const ExtractedUrl& u);
ExtractedUrl extracted_url_from_json(const nlohmann::json& j);

void write_urls(const std::vector<ExtractedUrl>& urls, const std::string& path);
std::vector<ExtractedUrl> read_urls(const std::string& path);

}  // namespace claimlab
