#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "claimlab/page_parse.hpp"
#include "claimlab/ratings.hpp"
#include "claimlab/sentiment.hpp"

namespace claimlab {

struct DatasetRow {
  std::string claim;
  Rating rating = Rating::False;
  double sentiment = 0.0;
  std::string origin;
  std::string source_url;
  std::uint64_t record_id = 0;

  bool operator==(const DatasetRow&) const = default;
};

struct AssemblyResult {
  std::vector<DatasetRow> rows;
  std::size_t dropped_unrated = 0;
  std::size_t dropped_unknown_rating = 0;
  std::size_t collapsed_duplicates = 0;

  std::size_t dropped() const {
    return dropped_unrated + dropped_unknown_rating + collapsed_duplicates;
  }
};

// Rating per parsed entry; nullopt for unrated pages and unknown labels.
std::vector<std::optional<Rating>> ratings_for(std::span<const ParseOutcome> parsed);

// The three inputs are index-aligned. Throws AlignmentError otherwise.
AssemblyResult assemble(std::span<const ParseOutcome> parsed,
                        std::span<const SentimentScore> scores,
                        std::span<const std::optional<Rating>> ratings);

inline constexpr int kSentimentDecimals = 15;

// Fixed 15 fractional digits with trailing zeros trimmed: -0.083333333333333.
std::string format_sentiment(double value);
// The value format_sentiment/read_csv round-trips to.
double quantize_sentiment(double value);

// Columns: claim,rating,sentiment,origin,source_url,record_id. Text columns
// are always quoted; embedded quotes are doubled.
void write_csv(const std::vector<DatasetRow>& rows, const std::filesystem::path& path);
std::string to_csv(const std::vector<DatasetRow>& rows);
std::vector<DatasetRow> read_csv(const std::filesystem::path& path);
std::vector<DatasetRow> parse_csv(std::string_view doc, const std::string& name = "<memory>");

void write_dataset_json(const std::vector<DatasetRow>& rows, const std::filesystem::path& path);

}  // namespace claimlab
