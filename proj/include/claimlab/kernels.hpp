#pragma once

#include <span>
#include <string>
#include <vector>

#include "claimlab/crawler.hpp"
#include "claimlab/page_parse.hpp"
#include "claimlab/sentiment.hpp"

// Data-parallel kernels for the CPU-bound stages. Each has a serial twin in
// claimlab::serial that the tests and benchmarks compare against; both
// produce identical output for identical input.
namespace claimlab {

std::vector<std::vector<std::string>> tokenize_all(std::span<const std::string> texts);
std::vector<SentimentScore> score_all(std::span<const std::string> texts, const Lexicon& lexicon);
std::vector<ParseOutcome> parse_all(std::span<const CrawlEntry> entries,
                                    const SectionSelectors& selectors = {});
// Unnormalized Gaussian KDE evaluated at each grid point.
std::vector<double> kde(std::span<const double> samples, std::span<const double> grid,
                        double bandwidth);

// Single crawl entry to parse outcome; shared by both variants.
ParseOutcome parse_entry(const CrawlEntry& entry, const SectionSelectors& selectors);

namespace serial {

std::vector<std::vector<std::string>> tokenize_all(std::span<const std::string> texts);
std::vector<SentimentScore> score_all(std::span<const std::string> texts, const Lexicon& lexicon);
std::vector<ParseOutcome> parse_all(std::span<const CrawlEntry> entries,
                                    const SectionSelectors& selectors = {});
std::vector<double> kde(std::span<const double> samples, std::span<const double> grid,
                        double bandwidth);

}  // namespace serial

// Number of OpenMP threads the kernels will use (1 without OpenMP).
int kernel_threads();

}  // namespace claimlab
