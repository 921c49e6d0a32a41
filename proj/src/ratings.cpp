#include "claimlab/ratings.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "claimlab/errors.hpp"
#include "claimlab/text.hpp"

namespace claimlab {
namespace {

struct RatingInfo {
  Rating rating;
  std::string_view slug;
  std::string_view label;
  RatingCluster cluster;
};

constexpr std::array<RatingInfo, 12> kRatingTable = {{
    {Rating::True, "true", "True", RatingCluster::TrueLike},
    {Rating::False, "false", "False", RatingCluster::FalseLike},
    {Rating::MostlyTrue, "mostly-true", "Mostly True", RatingCluster::TrueLike},
    {Rating::MostlyFalse, "mostly-false", "Mostly False", RatingCluster::FalseLike},
    {Rating::Outdated, "outdated", "Outdated", RatingCluster::Other},
    {Rating::Miscaptioned, "miscaptioned", "Miscaptioned", RatingCluster::FalseLike},
    {Rating::Misattributed, "misattributed", "Misattributed", RatingCluster::FalseLike},
    {Rating::Unproven, "unproven", "Unproven", RatingCluster::Other},
    {Rating::Mixture, "mixture", "Mixture", RatingCluster::Other},
    {Rating::Legend, "legend", "Legend", RatingCluster::Other},
    {Rating::Scam, "scam", "Scam", RatingCluster::FalseLike},
    {Rating::CorrectAttribution, "correct-attribution", "Correct Attribution",
     RatingCluster::TrueLike},
}};

const RatingInfo& info(Rating r) { return kRatingTable[static_cast<std::size_t>(r)]; }

// Lower-case with hyphens and spaces removed: "Mis-captioned" -> "miscaptioned".
std::string fused(std::string_view s) {
  std::string out;
  for (char c : text::to_lower_ascii(s)) {
    if (c != '-' && c != ' ' && c != '_') out.push_back(c);
  }
  return out;
}

}  // namespace

std::optional<Rating> try_parse_rating(std::string_view slug) {
  const std::string key = fused(text::trim(slug));
  for (const auto& r : kRatingTable) {
    if (fused(r.slug) == key) return r.rating;
  }
  return std::nullopt;
}

Rating parse_rating(std::string_view slug) {
  if (auto r = try_parse_rating(slug)) return *r;
  throw UnknownRatingError(std::string(slug));
}

std::string_view slug_of(Rating r) { return info(r).slug; }
std::string_view display_label(Rating r) { return info(r).label; }

Rating rating_from_label(std::string_view label) { return parse_rating(label); }

RatingCluster cluster_of(Rating r) { return info(r).cluster; }

std::string_view to_string(RatingCluster c) {
  switch (c) {
    case RatingCluster::FalseLike: return "FalseLike";
    case RatingCluster::TrueLike: return "TrueLike";
    case RatingCluster::Other: return "Other";
  }
  return "Other";
}

CredibilityVerdict check_source(const FactSource& source, const SourceRegistry& registry) {
  CredibilityVerdict v;
  std::set<std::string> visited;
  const FactSource* cur = &source;
  for (;;) {
    v.chain.push_back(cur->name);
    if (!visited.insert(cur->name).second) {
      v.cycle = true;
      return v;
    }
    switch (cur->kind) {
      case FactSource::Kind::EventGrounded:
        v.credible = true;
        return v;
      case FactSource::Kind::Unverified:
        return v;
      case FactSource::Kind::DerivedFrom: {
        auto it = registry.find(cur->derived_from);
        if (it == registry.end()) {
          throw RegistryError("source '" + cur->name + "' derives from unknown source '" +
                              cur->derived_from + "'");
        }
        cur = &it->second;
        break;
      }
    }
  }
}

bool source_credible(const FactSource& source, const SourceRegistry& registry) {
  return check_source(source, registry).credible;
}

SourceRegistry parse_registry(std::string_view doc) {
  SourceRegistry reg;
  FactSource* current = nullptr;
  std::size_t line_no = 0;
  std::istringstream in{std::string(doc)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string t = text::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        throw ParseError("registry line " + std::to_string(line_no) + ": bad section header",
                         "", line_no);
      }
      const std::string name = text::trim(std::string_view(t).substr(1, t.size() - 2));
      if (reg.contains(name)) {
        throw RegistryError("duplicate source '" + name + "' at line " + std::to_string(line_no));
      }
      current = &reg[name];
      current->name = name;
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos || !current) {
      throw ParseError("registry line " + std::to_string(line_no) + ": expected key = value",
                       "", line_no);
    }
    const std::string key = text::trim(std::string_view(t).substr(0, eq));
    const std::string value = text::trim(std::string_view(t).substr(eq + 1));
    if (key == "verification") {
      if (value == "event-grounded") {
        current->kind = FactSource::Kind::EventGrounded;
      } else if (value == "unverified") {
        current->kind = FactSource::Kind::Unverified;
      } else if (value.starts_with("derived-from:")) {
        current->kind = FactSource::Kind::DerivedFrom;
        current->derived_from = text::trim(std::string_view(value).substr(13));
      } else {
        throw RegistryError("unknown verification '" + value + "' at line " +
                            std::to_string(line_no));
      }
    } else if (key == "reason") {
      current->reason = value;
    } else {
      throw RegistryError("unknown key '" + key + "' at line " + std::to_string(line_no));
    }
  }
  return reg;
}

SourceRegistry load_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_registry(ss.str());
}

std::optional<bool> EventOracle::lookup(const std::string& claim_id) const {
  auto it = facts_.find(claim_id);
  if (it == facts_.end()) return std::nullopt;
  return it->second;
}

bool EventOracle::covers(const std::vector<std::string>& claim_ids) const {
  for (const auto& id : claim_ids) {
    if (!facts_.contains(id)) return false;
  }
  return true;
}

}  // namespace claimlab
