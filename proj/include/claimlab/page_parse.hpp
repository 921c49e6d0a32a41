#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace claimlab {

// The three sections of a fact-check page, raw and as plain text.
struct ParsedPage {
  std::string claim_html;
  std::string rating_html;
  std::string origin_html;
  std::string claim_text;
  std::string rating_label;  // slug, e.g. "false", "mostly-true"
  std::string origin_text;
  std::string source_url;
  // Extra claim/rating elements ignored by first-match-wins, and similar.
  std::vector<std::string> warnings;

  bool operator==(const ParsedPage&) const = default;
};

// Which elements hold the sections. Defaults match the shipped fixture layout.
struct SectionSelectors {
  std::string claim_class = "claim";
  std::string rating_class = "rating-name";
  std::string rating_slug_prefix = "rating-label-";
  std::string origin_header = "Origin";
};

// Throws UnratedPageError when the claim or rating section is missing.
ParsedPage parse_page(std::string_view html, const std::string& url,
                      const SectionSelectors& selectors = {});

// Rating slug from the rating element's class ("rating-label-<slug>"),
// falling back to its text. Throws UnratedPageError when neither exists.
std::string rating_from_class(std::string_view rating_html, const SectionSelectors& selectors = {});

// One entry of parsed.json.
struct ParseOutcome {
  enum class Status { Rated, UnknownRating, Unrated, FetchError };

  Status status = Status::Unrated;
  std::uint64_t record_id = 0;
  std::string url;  // requested URL
  ParsedPage page;  // meaningful for Rated/UnknownRating
  std::string error;

  bool operator==(const ParseOutcome&) const = default;
};

std::string_view to_string(ParseOutcome::Status s);

nlohmann::json to_json(const ParseOutcome& p);
ParseOutcome parse_outcome_from_json(const nlohmann::json& j);

void write_parsed(const std::vector<ParseOutcome>& parsed, const std::filesystem::path& path);
std::vector<ParseOutcome> read_parsed(const std::filesystem::path& path);

}  // namespace claimlab
