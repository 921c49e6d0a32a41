#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace claimlab {

// One social-feed post. JSON field names follow the collector's schema
// ("tweets", "id", "len", ...), see to_json/from_json below.
struct FeedRecord {
  std::string text;
  std::uint64_t id = 0;
  std::int64_t length = 0;
  std::int64_t date_ms = 0;
  std::string source;
  std::int64_t likes = 0;
  std::int64_t retweets = 0;
  std::int64_t time_ms = 0;
  std::optional<std::string> geo;
  // Untrusted; never read downstream.
  std::optional<int> sentiment_hint;
  std::vector<std::string> token_list;

  bool operator==(const FeedRecord&) const = default;
};

inline constexpr std::size_t kMaxRecordsPerPage = 200;

struct FeedPage {
  int page_index = 0;
  std::vector<FeedRecord> records;
  std::int64_t collected_at = 0;
};

// Validates the record schema. `where` names the record for error messages.
FeedRecord record_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json record_to_json(const FeedRecord& r);

// Page files are JSON objects keyed by decimal record index. Pages are
// numbered 1.. in argument order; collected_at is the file mtime.
FeedPage load_page(const std::filesystem::path& path, int page_index);
std::vector<FeedPage> load_pages(std::span<const std::filesystem::path> paths);

// Inverse of load_page's record mapping: an object keyed "0", "1", ...
nlohmann::json page_to_json(const FeedPage& page);

// records.json: a flat array of record objects.
void write_records(const std::vector<FeedRecord>& records, const std::filesystem::path& path);
std::vector<FeedRecord> read_records(const std::filesystem::path& path);

std::vector<FeedRecord> flatten(const std::vector<FeedPage>& pages);

// Keeps the first occurrence of each id.
std::vector<FeedRecord> dedup(std::span<const FeedRecord> records);

bool is_stopword(std::string_view token);

// Scheme-bearing URLs removed, split on non-word characters, stopwords
// (exact, case-sensitive) dropped, casing preserved.
std::vector<std::string> tokenize(std::string_view text);

// Expands a shell glob; sorted, empty when nothing matches.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace claimlab
