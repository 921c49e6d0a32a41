#include "claimlab/ingest.hpp"

#include <glob.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <exception>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "claimlab/errors.hpp"
#include "claimlab/extract.hpp"
#include "claimlab/text.hpp"

namespace claimlab {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& require(const json& j, const char* field, const std::string& where) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw SchemaError(where + ": missing required field \"" + field + "\"");
  }
  return *it;
}

std::int64_t require_int(const json& j, const char* field, const std::string& where) {
  const json& v = require(j, field, where);
  if (!v.is_number_integer()) {
    throw SchemaError(where + ": field \"" + field + "\" must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string require_string(const json& j, const char* field, const std::string& where) {
  const json& v = require(j, field, where);
  if (!v.is_string()) throw SchemaError(where + ": field \"" + field + "\" must be a string");
  return v.get<std::string>();
}

bool has_word_char(std::string_view token) {
  for (std::size_t pos = 0; pos < token.size();) {
    if (text::is_word_codepoint(text::next_codepoint(token, pos))) return true;
  }
  return false;
}

std::uint64_t parse_key(const std::string& key, const fs::path& path) {
  std::uint64_t value = 0;
  auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), value);
  if (key.empty() || ec != std::errc() || p != key.data() + key.size()) {
    throw SchemaError(path.string() + ": record key \"" + key + "\" is not a decimal index");
  }
  return value;
}

}  // namespace

FeedRecord record_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": record must be a JSON object");
  FeedRecord r;
  r.text = require_string(j, "tweets", where);
  const json& id = require(j, "id", where);
  if (!id.is_number_unsigned()) {
    throw SchemaError(where + ": field \"id\" must be an unsigned integer");
  }
  r.id = id.get<std::uint64_t>();
  r.length = require_int(j, "len", where);
  r.date_ms = require_int(j, "date", where);
  r.source = require_string(j, "source", where);
  r.likes = require_int(j, "likes", where);
  r.retweets = require_int(j, "retweets", where);
  r.time_ms = require_int(j, "time", where);
  if (r.likes < 0 || r.retweets < 0) {
    throw SchemaError(where + ": engagement counts must be non-negative");
  }
  if (static_cast<std::size_t>(r.length) != text::codepoint_count(r.text)) {
    throw SchemaError(where + ": field \"len\" (" + std::to_string(r.length) +
                      ") does not match text length (" +
                      std::to_string(text::codepoint_count(r.text)) + ")");
  }
  if (auto it = j.find("geo"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw SchemaError(where + ": field \"geo\" must be a string or null");
    r.geo = it->get<std::string>();
  }
  if (auto it = j.find("sentiment"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < -1 || it->get<std::int64_t>() > 1) {
      throw SchemaError(where + ": field \"sentiment\" must be -1, 0 or 1");
    }
    r.sentiment_hint = it->get<int>();
  }
  if (auto it = j.find("token_list"); it != j.end()) {
    if (!it->is_array()) throw SchemaError(where + ": field \"token_list\" must be an array");
    for (const json& t : *it) {
      if (!t.is_string()) throw SchemaError(where + ": token_list entries must be strings");
      auto token = t.get<std::string>();
      if (!has_word_char(token) || token.find_first_of(" \t\n\r\f\v") != std::string::npos ||
          !extract_urls(token).empty()) {
        throw SchemaError(where + ": token_list contains non-word token \"" + token + "\"");
      }
      r.token_list.push_back(std::move(token));
    }
  } else {
    r.token_list = tokenize(r.text);
  }
  return r;
}

json record_to_json(const FeedRecord& r) {
  json j;
  j["tweets"] = r.text;
  j["id"] = r.id;
  j["len"] = r.length;
  j["date"] = r.date_ms;
  j["source"] = r.source;
  j["likes"] = r.likes;
  j["retweets"] = r.retweets;
  j["time"] = r.time_ms;
  j["geo"] = r.geo ? json(*r.geo) : json(nullptr);
  j["sentiment"] = r.sentiment_hint ? json(*r.sentiment_hint) : json(nullptr);
  j["token_list"] = r.token_list;
  return j;
}

FeedPage load_page(const fs::path& path, int page_index) {
  const std::string bytes = read_file(path);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON at byte " + std::to_string(e.byte) + ": " +
                         e.what(),
                     path.string(), e.byte);
  }
  if (!doc.is_object()) throw SchemaError(path.string() + ": page must be a JSON object");
  if (doc.size() > kMaxRecordsPerPage) {
    throw SchemaError(path.string() + ": page exceeds 200 records (" +
                      std::to_string(doc.size()) + ")");
  }

  std::vector<std::pair<std::uint64_t, const json*>> keyed;
  keyed.reserve(doc.size());
  for (const auto& [key, value] : doc.items()) keyed.emplace_back(parse_key(key, path), &value);
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  FeedPage page;
  page.page_index = page_index;
  const auto mtime = fs::last_write_time(path);
  page.collected_at = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::file_clock::to_sys(mtime)
                              .time_since_epoch())
                          .count();
  page.records.reserve(keyed.size());
  for (const auto& [key, value] : keyed) {
    page.records.push_back(
        record_from_json(*value, path.string() + ": record \"" + std::to_string(key) + "\""));
  }
  return page;
}

std::vector<FeedPage> load_pages(std::span<const fs::path> paths) {
  std::vector<FeedPage> pages(paths.size());
  std::vector<std::exception_ptr> errors(paths.size());
  const auto n = static_cast<std::int64_t>(paths.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      pages[i] = load_page(paths[i], static_cast<int>(i) + 1);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return pages;
}

json page_to_json(const FeedPage& page) {
  json doc = json::object();
  for (std::size_t i = 0; i < page.records.size(); ++i) {
    doc[std::to_string(i)] = record_to_json(page.records[i]);
  }
  return doc;
}

void write_records(const std::vector<FeedRecord>& records, const fs::path& path) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  out << arr.dump(2) << '\n';
  if (!out) throw FileError("write failed: " + path.string());
}

std::vector<FeedRecord> read_records(const fs::path& path) {
  const std::string bytes = read_file(path);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON at byte " + std::to_string(e.byte),
                     path.string(), e.byte);
  }
  if (!doc.is_array()) throw SchemaError(path.string() + ": expected an array of records");
  std::vector<FeedRecord> records;
  records.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    records.push_back(record_from_json(doc[i], path.string() + ": record " + std::to_string(i)));
  }
  return records;
}

std::vector<FeedRecord> flatten(const std::vector<FeedPage>& pages) {
  std::vector<FeedRecord> out;
  for (const auto& p : pages) out.insert(out.end(), p.records.begin(), p.records.end());
  return out;
}

std::vector<FeedRecord> dedup(std::span<const FeedRecord> records) {
  std::vector<FeedRecord> out;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& r : records) {
    if (seen.insert(r.id).second) out.push_back(r);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view input) {
  std::string stripped;
  stripped.reserve(input.size());
  std::size_t cursor = 0;
  for (const auto& url : extract_urls(input)) {
    if (url.scheme == UrlScheme::none) continue;
    stripped.append(input.substr(cursor, url.offset - cursor));
    stripped.push_back(' ');
    cursor = url.offset + url.raw.size();
  }
  stripped.append(input.substr(cursor));

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && !is_stopword(current)) tokens.push_back(current);
    current.clear();
  };
  for (std::size_t pos = 0; pos < stripped.size();) {
    const std::size_t start = pos;
    const char32_t cp = text::next_codepoint(stripped, pos);
    if (text::is_word_codepoint(cp)) {
      current.append(stripped, start, pos - start);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<fs::path> out;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  ::globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace claimlab
