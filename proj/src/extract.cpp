#include "claimlab/extract.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "claimlab/crawler.hpp"
#include "claimlab/errors.hpp"
#include "claimlab/text.hpp"

namespace claimlab {
using nlohmann::json;

namespace {

const std::regex& url_regex() {
  static const std::regex re(std::string(kUrlPattern),
                             std::regex::ECMAScript | std::regex::icase);
  return re;
}

}  // namespace

std::string_view to_string(UrlScheme s) {
  switch (s) {
    case UrlScheme::http: return "http";
    case UrlScheme::https: return "https";
    case UrlScheme::ftp: return "ftp";
    case UrlScheme::sftp: return "sftp";
    case UrlScheme::none: break;
  }
  return "none";
}

UrlScheme scheme_from_string(std::string_view s) {
  const std::string lower = text::to_lower_ascii(s);
  if (lower == "http") return UrlScheme::http;
  if (lower == "https") return UrlScheme::https;
  if (lower == "ftp") return UrlScheme::ftp;
  if (lower == "sftp") return UrlScheme::sftp;
  return UrlScheme::none;
}

std::vector<ExtractedUrl> extract_urls(std::string_view input) {
  std::vector<ExtractedUrl> out;
  using It = std::string_view::const_iterator;
  for (std::regex_iterator<It> it(input.begin(), input.end(), url_regex()), end; it != end; ++it) {
    const auto& m = *it;
    if (m.length(0) == 0) continue;
    ExtractedUrl u;
    u.raw = m.str(0);
    u.offset = static_cast<std::size_t>(m.position(0));
    u.scheme = m[2].matched ? scheme_from_string(m.str(2)) : UrlScheme::none;
    std::string_view rest(u.raw);
    if (const auto sep = rest.find("://"); m[2].matched && sep != std::string_view::npos) {
      rest.remove_prefix(sep + 3);
    }
    u.host = text::to_lower_ascii(rest.substr(0, rest.find_first_of(":/")));
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<ExtractedUrl> extract_from_records(const std::vector<FeedRecord>& records) {
  std::vector<ExtractedUrl> out;
  for (const auto& r : records) {
    for (auto& u : extract_urls(r.text)) {
      u.source_record_id = r.id;
      out.push_back(std::move(u));
    }
  }
  return out;
}

std::string resolve_redirects(const std::string& url, int max_hops, Crawler& crawler) {
  return crawler.fetch_following(url, max_hops).final_url;
}

json to_json(const ExtractedUrl& u) {
  return json{{"raw", u.raw},
              {"scheme", to_string(u.scheme)},
              {"host", u.host},
              {"resolved", u.resolved ? json(*u.resolved) : json(nullptr)},
              {"source_record_id", u.source_record_id},
              {"offset", u.offset}};
}

ExtractedUrl extracted_url_from_json(const json& j) {
  ExtractedUrl u;
  try {
    u.raw = j.at("raw").get<std::string>();
    u.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    u.host = j.at("host").get<std::string>();
    if (j.contains("resolved") && !j.at("resolved").is_null()) {
      u.resolved = j.at("resolved").get<std::string>();
    }
    u.source_record_id = j.at("source_record_id").get<std::uint64_t>();
    u.offset = j.value("offset", std::size_t{0});
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed URL entry: ") + e.what());
  }
  return u;
}

void write_urls(const std::vector<ExtractedUrl>& urls, const std::string& path) {
  json arr = json::array();
  for (const auto& u : urls) arr.push_back(to_json(u));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path);
  out << arr.dump(2) << '\n';
}

std::vector<ExtractedUrl> read_urls(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": malformed JSON at byte " + std::to_string(e.byte), path, e.byte);
  }
  if (!doc.is_array()) throw SchemaError(path + ": expected an array of URLs");
  std::vector<ExtractedUrl> out;
  for (const auto& j : doc) out.push_back(extracted_url_from_json(j));
  return out;
}

}  // namespace claimlab
