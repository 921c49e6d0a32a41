#include "claimlab/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "claimlab/errors.hpp"
#include "claimlab/ingest.hpp"
#include "claimlab/ratings.hpp"

namespace claimlab {
namespace {

inline double kde_at(double x, std::span<const double> samples, double bandwidth) {
  const double inv_h = 1.0 / bandwidth;
  double sum = 0.0;
  for (double s : samples) {
    const double u = (x - s) * inv_h;
    sum += std::exp(-0.5 * u * u);
  }
  return sum * inv_h / (static_cast<double>(samples.size()) * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

ParseOutcome parse_entry(const CrawlEntry& entry, const SectionSelectors& selectors) {
  ParseOutcome out;
  out.record_id = entry.record_id;
  out.url = entry.url;
  if (!entry.ok() || !entry.result) {
    out.status = ParseOutcome::Status::FetchError;
    out.error = entry.error.empty() ? "no response" : entry.error;
    return out;
  }
  const CrawlResult& r = *entry.result;
  out.page.source_url = r.final_url;
  if (r.status < 200 || r.status > 299) {
    out.status = ParseOutcome::Status::Unrated;
    out.error = "HTTP " + std::to_string(r.status);
    return out;
  }
  try {
    out.page = parse_page(r.body, r.final_url, selectors);
  } catch (const UnratedPageError& e) {
    out.status = ParseOutcome::Status::Unrated;
    out.error = e.what();
    return out;
  }
  if (try_parse_rating(out.page.rating_label)) {
    out.status = ParseOutcome::Status::Rated;
  } else {
    out.status = ParseOutcome::Status::UnknownRating;
    out.error = "unknown rating: " + out.page.rating_label;
  }
  return out;
}

std::vector<std::vector<std::string>> tokenize_all(std::span<const std::string> texts) {
  std::vector<std::vector<std::string>> out(texts.size());
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) out[i] = tokenize(texts[i]);
  return out;
}

std::vector<SentimentScore> score_all(std::span<const std::string> texts, const Lexicon& lexicon) {
  std::vector<SentimentScore> out(texts.size());
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) out[i] = score(texts[i], lexicon);
  return out;
}

std::vector<ParseOutcome> parse_all(std::span<const CrawlEntry> entries,
                                    const SectionSelectors& selectors) {
  std::vector<ParseOutcome> out(entries.size());
  const auto n = static_cast<std::int64_t>(entries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) out[i] = parse_entry(entries[i], selectors);
  return out;
}

std::vector<double> kde(std::span<const double> samples, std::span<const double> grid,
                        double bandwidth) {
  if (!(bandwidth > 0.0)) throw DomainError("KDE bandwidth must be positive");
  std::vector<double> out(grid.size(), 0.0);
  if (samples.empty()) return out;
  const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = kde_at(grid[i], samples, bandwidth);
  return out;
}

namespace serial {

std::vector<std::vector<std::string>> tokenize_all(std::span<const std::string> texts) {
  std::vector<std::vector<std::string>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(tokenize(t));
  return out;
}

std::vector<SentimentScore> score_all(std::span<const std::string> texts, const Lexicon& lexicon) {
  std::vector<SentimentScore> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(score(t, lexicon));
  return out;
}

std::vector<ParseOutcome> parse_all(std::span<const CrawlEntry> entries,
                                    const SectionSelectors& selectors) {
  std::vector<ParseOutcome> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(parse_entry(e, selectors));
  return out;
}

std::vector<double> kde(std::span<const double> samples, std::span<const double> grid,
                        double bandwidth) {
  if (!(bandwidth > 0.0)) throw DomainError("KDE bandwidth must be positive");
  std::vector<double> out(grid.size(), 0.0);
  if (samples.empty()) return out;
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = kde_at(grid[i], samples, bandwidth);
  return out;
}

}  // namespace serial
}  // namespace claimlab
