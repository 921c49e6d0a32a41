#include "claimlab/page_parse.hpp"

#include <fstream>
#include <sstream>

#include "claimlab/errors.hpp"
#include "claimlab/html.hpp"
#include "claimlab/text.hpp"

namespace claimlab {
using nlohmann::json;

namespace {

bool is_header_element(const html::Node& n) {
  static constexpr std::string_view kHeaders[] = {"h1", "h2", "h3", "h4", "h5", "h6", "header"};
  for (auto h : kHeaders) {
    if (n.name == h) return true;
  }
  return n.has_class("card-header");
}

std::string slug_from_text(std::string_view label) {
  std::string slug;
  for (char c : text::to_lower_ascii(text::collapse_whitespace(label))) {
    slug.push_back(c == ' ' ? '-' : c);
  }
  return slug;
}

std::string slug_from_element(const html::Node& el, const SectionSelectors& sel) {
  for (auto cls : el.classes()) {
    if (cls.starts_with(sel.rating_slug_prefix) && cls.size() > sel.rating_slug_prefix.size()) {
      return text::to_lower_ascii(cls.substr(sel.rating_slug_prefix.size()));
    }
  }
  return slug_from_text(html::text_content(el));
}

}  // namespace

std::string rating_from_class(std::string_view rating_html, const SectionSelectors& sel) {
  html::Document doc{std::string(rating_html)};
  const html::Node* slugged = html::find_first(doc.root(), [&](const html::Node& n) {
    if (!n.is_element()) return false;
    for (auto cls : n.classes()) {
      if (cls.starts_with(sel.rating_slug_prefix) && cls.size() > sel.rating_slug_prefix.size()) {
        return true;
      }
    }
    return false;
  });
  if (slugged) return slug_from_element(*slugged, sel);
  const html::Node* named = html::find_first(
      doc.root(), [&](const html::Node& n) { return n.is_element() && n.has_class(sel.rating_class); });
  const html::Node& scope = named ? *named : doc.root();
  std::string slug = slug_from_text(html::text_content(scope));
  if (slug.empty()) throw UnratedPageError("rating element has neither a label class nor text");
  return slug;
}

ParsedPage parse_page(std::string_view html_bytes, const std::string& url,
                      const SectionSelectors& sel) {
  html::Document doc{std::string(html_bytes)};
  ParsedPage page;
  page.source_url = url;

  auto with_class = [](const std::string& cls) {
    return [cls](const html::Node& n) { return n.is_element() && n.has_class(cls); };
  };
  const auto claims = html::find_all(doc.root(), with_class(sel.claim_class));
  if (claims.empty()) throw UnratedPageError("no claim section in " + url);
  const auto ratings = html::find_all(doc.root(), with_class(sel.rating_class));
  if (ratings.empty()) throw UnratedPageError("no rating section in " + url);
  if (claims.size() > 1) {
    page.warnings.push_back(std::to_string(claims.size() - 1) + " extra claim element(s) ignored");
  }
  if (ratings.size() > 1) {
    page.warnings.push_back(std::to_string(ratings.size() - 1) +
                            " extra rating element(s) ignored");
  }

  page.claim_html = std::string(doc.outer_html(*claims.front()));
  page.claim_text = html::text_content(*claims.front());
  page.rating_html = std::string(doc.outer_html(*ratings.front()));
  page.rating_label = slug_from_element(*ratings.front(), sel);
  if (page.rating_label.empty()) throw UnratedPageError("empty rating label in " + url);

  // Origin: the element whose header child reads "Origin".
  const html::Node* header = html::find_first(doc.root(), [&](const html::Node& n) {
    return n.is_element() && is_header_element(n) && html::text_content(n) == sel.origin_header;
  });
  if (header && header->parent && header->parent->is_element()) {
    const html::Node& container = *header->parent;
    page.origin_html = std::string(doc.outer_html(container));
    page.origin_text =
        html::text_content(container, [header](const html::Node& n) { return &n == header; });
  } else {
    page.warnings.push_back("no origin section");
  }
  return page;
}

std::string_view to_string(ParseOutcome::Status s) {
  switch (s) {
    case ParseOutcome::Status::Rated: return "rated";
    case ParseOutcome::Status::UnknownRating: return "unknown-rating";
    case ParseOutcome::Status::Unrated: return "unrated";
    case ParseOutcome::Status::FetchError: return "fetch-error";
  }
  return "unrated";
}

namespace {

ParseOutcome::Status status_from_string(const std::string& s) {
  if (s == "rated") return ParseOutcome::Status::Rated;
  if (s == "unknown-rating") return ParseOutcome::Status::UnknownRating;
  if (s == "unrated") return ParseOutcome::Status::Unrated;
  if (s == "fetch-error") return ParseOutcome::Status::FetchError;
  throw SchemaError("unknown parse status \"" + s + "\"");
}

}  // namespace

json to_json(const ParseOutcome& p) {
  return json{{"status", to_string(p.status)},
              {"record_id", p.record_id},
              {"url", p.url},
              {"source_url", p.page.source_url},
              {"claim-html", p.page.claim_html},
              {"rating-html", p.page.rating_html},
              {"origin-html", p.page.origin_html},
              {"claim", p.page.claim_text},
              {"rating", p.page.rating_label},
              {"origin", p.page.origin_text},
              {"warnings", p.page.warnings},
              {"error", p.error}};
}

ParseOutcome parse_outcome_from_json(const json& j) {
  ParseOutcome p;
  try {
    p.status = status_from_string(j.at("status").get<std::string>());
    p.record_id = j.at("record_id").get<std::uint64_t>();
    p.url = j.at("url").get<std::string>();
    p.page.source_url = j.at("source_url").get<std::string>();
    p.page.claim_html = j.at("claim-html").get<std::string>();
    p.page.rating_html = j.at("rating-html").get<std::string>();
    p.page.origin_html = j.at("origin-html").get<std::string>();
    p.page.claim_text = j.at("claim").get<std::string>();
    p.page.rating_label = j.at("rating").get<std::string>();
    p.page.origin_text = j.at("origin").get<std::string>();
    p.page.warnings = j.value("warnings", std::vector<std::string>{});
    p.error = j.value("error", std::string());
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed parsed entry: ") + e.what());
  }
  return p;
}

void write_parsed(const std::vector<ParseOutcome>& parsed, const std::filesystem::path& path) {
  json arr = json::array();
  for (const auto& p : parsed) arr.push_back(to_json(p));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  out << arr.dump(2) << '\n';
}

std::vector<ParseOutcome> read_parsed(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON at byte " + std::to_string(e.byte),
                     path.string(), e.byte);
  }
  if (!doc.is_array()) throw SchemaError(path.string() + ": expected an array");
  std::vector<ParseOutcome> out;
  for (const auto& j : doc) out.push_back(parse_outcome_from_json(j));
  return out;
}

}  // namespace claimlab
