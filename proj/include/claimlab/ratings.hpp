#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace claimlab {

// The fact-check source's twelve-label rating scale, in display order.
enum class Rating {
  True,
  False,
  MostlyTrue,
  MostlyFalse,
  Outdated,
  Miscaptioned,
  Misattributed,
  Unproven,
  Mixture,
  Legend,
  Scam,
  CorrectAttribution,
};

inline constexpr std::array<Rating, 12> kAllRatings = {
    Rating::True,         Rating::False,         Rating::MostlyTrue, Rating::MostlyFalse,
    Rating::Outdated,     Rating::Miscaptioned,  Rating::Misattributed, Rating::Unproven,
    Rating::Mixture,      Rating::Legend,        Rating::Scam,       Rating::CorrectAttribution,
};

enum class RatingCluster { FalseLike, TrueLike, Other };

inline constexpr std::array<RatingCluster, 3> kAllClusters = {
    RatingCluster::FalseLike, RatingCluster::TrueLike, RatingCluster::Other};

// Accepts hyphenated and fused spellings ("mis-captioned", "miscaptioned").
// Throws UnknownRatingError.
Rating parse_rating(std::string_view slug);
std::optional<Rating> try_parse_rating(std::string_view slug);

std::string_view slug_of(Rating r);
// "False", "Mostly True", "Correct Attribution", ...
std::string_view display_label(Rating r);
// Inverse of display_label, case-insensitive. Throws UnknownRatingError.
Rating rating_from_label(std::string_view label);

RatingCluster cluster_of(Rating r);
std::string_view to_string(RatingCluster c);

// --- fact-source trust --------------------------------------------------

struct FactSource {
  enum class Kind { EventGrounded, DerivedFrom, Unverified };

  std::string name;
  Kind kind = Kind::Unverified;
  std::string derived_from;  // set when kind == DerivedFrom
  std::string reason;
};

using SourceRegistry = std::map<std::string, FactSource>;

struct CredibilityVerdict {
  bool credible = false;
  // Names walked, in order. For a cycle the repeated name closes the list.
  std::vector<std::string> chain;
  bool cycle = false;
};

// A source is credible iff its derivation chain ends in an event-grounded
// source without revisiting any source. Throws RegistryError on a dangling
// reference.
CredibilityVerdict check_source(const FactSource& source, const SourceRegistry& registry);
bool source_credible(const FactSource& source, const SourceRegistry& registry);

// INI-style registry:
//   [snopes.com]
//   verification = event-grounded | derived-from:<name> | unverified
//   reason = free text
SourceRegistry parse_registry(std::string_view text);
SourceRegistry load_registry(const std::filesystem::path& path);

// Ground truth for fixture claims: did the described event happen?
class EventOracle {
 public:
  EventOracle() = default;
  explicit EventOracle(std::map<std::string, bool> facts) : facts_(std::move(facts)) {}

  void set(const std::string& claim_id, bool happened) { facts_[claim_id] = happened; }
  std::optional<bool> lookup(const std::string& claim_id) const;
  bool covers(const std::vector<std::string>& claim_ids) const;
  std::size_t size() const { return facts_.size(); }

 private:
  std::map<std::string, bool> facts_;
};

}  // namespace claimlab
