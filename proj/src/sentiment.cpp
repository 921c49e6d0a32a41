#include "claimlab/sentiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "claimlab/errors.hpp"
#include "claimlab/extract.hpp"
#include "claimlab/numeric.hpp"
#include "claimlab/text.hpp"

namespace claimlab {

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive: return "positive";
    case Polarity::Neutral: return "neutral";
    case Polarity::Negative: return "negative";
  }
  return "neutral";
}

void Lexicon::validate() const {
  for (const auto& [word, p] : entries) {
    if (!(p >= -1.0 && p <= 1.0)) {
      throw DomainError("lexicon polarity for '" + word + "' outside [-1, 1]");
    }
  }
}

Lexicon Lexicon::negated() const {
  Lexicon out = *this;
  for (auto& [word, p] : out.entries) p = -p;
  return out;
}

Lexicon parse_lexicon(std::string_view doc) {
  Lexicon lex;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= doc.size()) {
    auto nl = doc.find('\n', start);
    if (nl == std::string_view::npos) nl = doc.size();
    std::string_view line = doc.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("lexicon line " + std::to_string(line_no) + ": expected word<TAB>polarity",
                       "", line_no);
    }
    const std::string word = text::to_lower_ascii(text::trim(line.substr(0, tab)));
    const std::string num = text::trim(line.substr(tab + 1));
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p);
    if (word.empty() || ec != std::errc() || ptr != num.data() + num.size()) {
      throw ParseError("lexicon line " + std::to_string(line_no) + ": bad entry", "", line_no);
    }
    if (!(p >= -1.0 && p <= 1.0)) {
      throw DomainError("lexicon line " + std::to_string(line_no) + ": polarity outside [-1, 1]");
    }
    lex.entries[word] = p;
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open lexicon " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(ss.str());
}

std::vector<std::string> sentiment_tokens(std::string_view input) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t cursor = 0;
  auto split = [&](std::string_view chunk) {
    for (std::size_t pos = 0; pos < chunk.size();) {
      const std::size_t begin = pos;
      const char32_t cp = text::next_codepoint(chunk, pos);
      if (text::is_word_codepoint(cp)) {
        current.append(chunk, begin, pos - begin);
      } else if (!current.empty()) {
        tokens.push_back(text::to_lower_ascii(current));
        current.clear();
      }
    }
    if (!current.empty()) {
      tokens.push_back(text::to_lower_ascii(current));
      current.clear();
    }
  };
  for (const auto& url : extract_urls(input)) {
    if (url.scheme == UrlScheme::none) continue;
    split(input.substr(cursor, url.offset - cursor));
    cursor = url.offset + url.raw.size();
  }
  split(input.substr(cursor));
  return tokens;
}

Polarity classify(double value) {
  if (!(value >= -1.0 && value <= 1.0)) {
    throw DomainError("sentiment value outside [-1, 1]");
  }
  if (value > 0.0) return Polarity::Positive;
  if (value < 0.0) return Polarity::Negative;
  return Polarity::Neutral;
}

SentimentScore score_tokens(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
  std::vector<double> contributions;
  // Index of the most recent negator, if any.
  std::ptrdiff_t last_negator = -1;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    auto it = lexicon.entries.find(tok);
    if (it != lexicon.entries.end()) {
      const bool negated =
          last_negator >= 0 &&
          i - static_cast<std::size_t>(last_negator) <= lexicon.negation_window;
      contributions.push_back(negated ? -it->second : it->second);
    }
    if (lexicon.negators.contains(tok)) last_negator = static_cast<std::ptrdiff_t>(i);
  }
  SentimentScore s;
  if (!contributions.empty()) {
    const double mean = fsum(contributions) / static_cast<double>(contributions.size());
    s.value = std::clamp(mean, -1.0, 1.0);
  }
  s.polarity = classify(s.value);
  return s;
}

SentimentScore score(std::string_view text, const Lexicon& lexicon) {
  return score_tokens(sentiment_tokens(text), lexicon);
}

}  // namespace claimlab
