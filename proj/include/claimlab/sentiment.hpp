#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace claimlab {

enum class Polarity { Positive, Neutral, Negative };

std::string_view to_string(Polarity p);

struct SentimentScore {
  double value = 0.0;
  Polarity polarity = Polarity::Neutral;

  bool operator==(const SentimentScore&) const = default;
};

struct Lexicon {
  std::unordered_map<std::string, double> entries;
  std::set<std::string> negators = {"not", "no", "never"};
  std::size_t negation_window = 3;

  // Throws DomainError when a polarity lies outside [-1, 1].
  void validate() const;
  Lexicon negated() const;
};

// Lines "word<TAB>polarity"; '#' starts a comment line. Words are stored
// lower-cased.
Lexicon parse_lexicon(std::string_view text);
Lexicon load_lexicon(const std::filesystem::path& path);

// Lower-cased word tokens with scheme-bearing URLs removed. No stopword
// filtering (negators are stopwords).
std::vector<std::string> sentiment_tokens(std::string_view text);

// Mean polarity of lexicon tokens, a token negated (sign flipped) when a
// negator occurs among the preceding negation_window tokens; 0 when nothing
// matches.
SentimentScore score(std::string_view text, const Lexicon& lexicon);
SentimentScore score_tokens(const std::vector<std::string>& tokens, const Lexicon& lexicon);

// Throws DomainError outside [-1, 1].
Polarity classify(double value);

}  // namespace claimlab
