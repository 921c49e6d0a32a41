#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "claimlab/dataset.hpp"
#include "claimlab/ratings.hpp"

namespace claimlab {

// Sentiment sign within the two credibility clusters. A row is negative iff
// its sentiment is < 0; zero counts as non-negative.
struct ContingencyStats {
  std::int64_t total_false = 0;
  std::int64_t total_true = 0;
  std::int64_t false_nonneg = 0;
  std::int64_t false_neg = 0;
  std::int64_t true_nonneg = 0;
  std::int64_t true_neg = 0;
  double pct_false_neg = 0.0;
  double pct_true_neg = 0.0;

  bool operator==(const ContingencyStats&) const = default;
};

ContingencyStats contingency(std::span<const DatasetRow> rows);

struct TailReport {
  std::vector<DatasetRow> below;  // sentiment < lo, ascending
  std::vector<DatasetRow> above;  // sentiment > hi, descending
  bool below_all_false_like = true;
  bool above_all_false_like = true;
};

// Throws DomainError unless lo < hi.
TailReport tail_extremes(std::span<const DatasetRow> rows, double lo, double hi);

enum class GroupBy { Rating, Cluster };

struct ViolinStats {
  std::string label;
  std::int64_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double bandwidth = 0.0;
  std::vector<std::pair<double, double>> density_grid;  // (x, density)
};

inline constexpr double kMinBandwidth = 0.05;

// Linear interpolation between order statistics: h = (n - 1) p.
// Throws DomainError for an empty sample or p outside [0, 1].
double quantile(std::span<const double> samples, double p);

// Silverman's rule of thumb, floored at kMinBandwidth.
double silverman_bandwidth(std::span<const double> samples);

// Evenly spaced grid over [-1, 1]. Throws DomainError for fewer than 2 points.
std::vector<double> sentiment_grid(int grid_points);

ViolinStats violin_for(const std::string& label, std::span<const double> samples, int grid_points);

// One entry per label (12, taxonomy order) or per cluster (3), empty groups
// included with n = 0.
std::vector<ViolinStats> violin(std::span<const DatasetRow> rows, GroupBy group_by,
                                int grid_points);

namespace serial {
ViolinStats violin_for(const std::string& label, std::span<const double> samples, int grid_points);
std::vector<ViolinStats> violin(std::span<const DatasetRow> rows, GroupBy group_by,
                                int grid_points);
}  // namespace serial

// Trapezoidal integral of a density grid.
double trapezoid(const std::vector<std::pair<double, double>>& grid);

// stats.json document: contingency, per-rating and per-cluster counts, the
// false:true ratio and the tail report.
nlohmann::ordered_json stats_json(std::span<const DatasetRow> rows, double lo, double hi);
nlohmann::ordered_json violin_json(const std::vector<ViolinStats>& by_rating,
                                   const std::vector<ViolinStats>& by_cluster);

// Static violin figure: mirrored density silhouettes, IQR bar and median tick.
std::string render_svg(const std::vector<ViolinStats>& groups, const std::string& title);

}  // namespace claimlab
