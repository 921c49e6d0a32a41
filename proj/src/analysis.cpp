#include "claimlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "claimlab/errors.hpp"
#include "claimlab/kernels.hpp"

namespace claimlab {
using nlohmann::ordered_json;

namespace {

double percent(std::int64_t part, std::int64_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

// Selection-based order statistic; `work` is reordered.
double order_statistic(std::vector<double>& work, std::size_t k) {
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(k), work.end());
  return work[k];
}

double quantile_in_place(std::vector<double>& work, double p) {
  const double h = static_cast<double>(work.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  const double x_lo = order_statistic(work, lo);
  if (frac == 0.0 || lo + 1 >= work.size()) return x_lo;
  // After nth_element everything right of `lo` is >= x_lo; its minimum is
  // the next order statistic.
  const double x_hi =
      *std::min_element(work.begin() + static_cast<std::ptrdiff_t>(lo) + 1, work.end());
  return x_lo + frac * (x_hi - x_lo);
}

std::vector<std::pair<std::string, std::vector<double>>> group_samples(
    std::span<const DatasetRow> rows, GroupBy group_by) {
  std::vector<std::pair<std::string, std::vector<double>>> groups;
  if (group_by == GroupBy::Rating) {
    for (Rating r : kAllRatings) groups.emplace_back(std::string(display_label(r)), std::vector<double>{});
    for (const auto& row : rows) groups[static_cast<std::size_t>(row.rating)].second.push_back(row.sentiment);
  } else {
    for (RatingCluster c : kAllClusters) groups.emplace_back(std::string(to_string(c)), std::vector<double>{});
    for (const auto& row : rows) {
      groups[static_cast<std::size_t>(cluster_of(row.rating))].second.push_back(row.sentiment);
    }
  }
  return groups;
}

template <typename KdeFn>
ViolinStats violin_impl(const std::string& label, std::span<const double> samples,
                        int grid_points, KdeFn&& kde_fn) {
  const std::vector<double> grid = sentiment_grid(grid_points);
  ViolinStats v;
  v.label = label;
  v.n = static_cast<std::int64_t>(samples.size());
  if (samples.empty()) return v;
  std::vector<double> work(samples.begin(), samples.end());
  v.q1 = quantile_in_place(work, 0.25);
  v.median = quantile_in_place(work, 0.5);
  v.q3 = quantile_in_place(work, 0.75);
  v.bandwidth = silverman_bandwidth(samples);
  const std::vector<double> density = kde_fn(samples, grid, v.bandwidth);
  v.density_grid.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v.density_grid.emplace_back(grid[i], density[i]);
  const double area = trapezoid(v.density_grid);
  if (area > 0.0) {
    for (auto& [x, d] : v.density_grid) d /= area;
  }
  return v;
}

ordered_json row_summary(const DatasetRow& r) {
  return ordered_json{{"claim", r.claim},
                      {"rating", display_label(r.rating)},
                      {"cluster", to_string(cluster_of(r.rating))},
                      {"sentiment", r.sentiment},
                      {"record_id", r.record_id}};
}

ordered_json violin_to_json(const ViolinStats& v) {
  ordered_json grid = ordered_json::array();
  for (const auto& [x, d] : v.density_grid) grid.push_back({x, d});
  return ordered_json{{"label", v.label}, {"n", v.n},           {"median", v.median},
                      {"q1", v.q1},       {"q3", v.q3},         {"bandwidth", v.bandwidth},
                      {"density_grid", grid}};
}

}  // namespace

ContingencyStats contingency(std::span<const DatasetRow> rows) {
  ContingencyStats s;
  for (const auto& r : rows) {
    const bool negative = r.sentiment < 0.0;
    switch (cluster_of(r.rating)) {
      case RatingCluster::FalseLike:
        ++s.total_false;
        ++(negative ? s.false_neg : s.false_nonneg);
        break;
      case RatingCluster::TrueLike:
        ++s.total_true;
        ++(negative ? s.true_neg : s.true_nonneg);
        break;
      case RatingCluster::Other:
        break;
    }
  }
  s.pct_false_neg = percent(s.false_neg, s.total_false);
  s.pct_true_neg = percent(s.true_neg, s.total_true);
  return s;
}

TailReport tail_extremes(std::span<const DatasetRow> rows, double lo, double hi) {
  if (!(lo < hi)) throw DomainError("tail thresholds require lo < hi");
  TailReport t;
  for (const auto& r : rows) {
    if (r.sentiment < lo) t.below.push_back(r);
    if (r.sentiment > hi) t.above.push_back(r);
  }
  std::stable_sort(t.below.begin(), t.below.end(),
                   [](const auto& a, const auto& b) { return a.sentiment < b.sentiment; });
  std::stable_sort(t.above.begin(), t.above.end(),
                   [](const auto& a, const auto& b) { return a.sentiment > b.sentiment; });
  auto false_like = [](const DatasetRow& r) {
    return cluster_of(r.rating) == RatingCluster::FalseLike;
  };
  t.below_all_false_like = std::all_of(t.below.begin(), t.below.end(), false_like);
  t.above_all_false_like = std::all_of(t.above.begin(), t.above.end(), false_like);
  return t;
}

double quantile(std::span<const double> samples, double p) {
  if (samples.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability outside [0, 1]");
  std::vector<double> work(samples.begin(), samples.end());
  return quantile_in_place(work, p);
}

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) return kMinBandwidth;
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> work(samples.begin(), samples.end());
  const double iqr = quantile_in_place(work, 0.75) - quantile_in_place(work, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::max(sd, iqr / 1.34);
  const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  return std::max(h, kMinBandwidth);
}

std::vector<double> sentiment_grid(int grid_points) {
  if (grid_points < 2) throw DomainError("grid_points must be at least 2");
  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  const double step = 2.0 / static_cast<double>(grid_points - 1);
  for (int i = 0; i < grid_points; ++i) grid[static_cast<std::size_t>(i)] = -1.0 + step * i;
  grid.back() = 1.0;
  return grid;
}

double trapezoid(const std::vector<std::pair<double, double>>& grid) {
  double area = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    area += 0.5 * (grid[i].second + grid[i - 1].second) * (grid[i].first - grid[i - 1].first);
  }
  return area;
}

ViolinStats violin_for(const std::string& label, std::span<const double> samples, int grid_points) {
  return violin_impl(label, samples, grid_points,
                     [](auto s, auto g, double h) { return kde(s, g, h); });
}

std::vector<ViolinStats> violin(std::span<const DatasetRow> rows, GroupBy group_by,
                                int grid_points) {
  sentiment_grid(grid_points);  // validates before any work
  std::vector<ViolinStats> out;
  for (const auto& [label, samples] : group_samples(rows, group_by)) {
    out.push_back(violin_for(label, samples, grid_points));
  }
  return out;
}

namespace serial {

ViolinStats violin_for(const std::string& label, std::span<const double> samples, int grid_points) {
  return violin_impl(label, samples, grid_points,
                     [](auto s, auto g, double h) { return serial::kde(s, g, h); });
}

std::vector<ViolinStats> violin(std::span<const DatasetRow> rows, GroupBy group_by,
                                int grid_points) {
  sentiment_grid(grid_points);
  std::vector<ViolinStats> out;
  for (const auto& [label, samples] : group_samples(rows, group_by)) {
    out.push_back(serial::violin_for(label, samples, grid_points));
  }
  return out;
}

}  // namespace serial

ordered_json stats_json(std::span<const DatasetRow> rows, double lo, double hi) {
  const ContingencyStats c = contingency(rows);
  const TailReport tails = tail_extremes(rows, lo, hi);

  ordered_json per_rating = ordered_json::object();
  for (Rating r : kAllRatings) per_rating[std::string(display_label(r))] = 0;
  ordered_json per_cluster = ordered_json::object();
  for (RatingCluster cl : kAllClusters) per_cluster[std::string(to_string(cl))] = 0;
  for (const auto& row : rows) {
    per_rating[std::string(display_label(row.rating))] =
        per_rating[std::string(display_label(row.rating))].get<std::int64_t>() + 1;
    per_cluster[std::string(to_string(cluster_of(row.rating)))] =
        per_cluster[std::string(to_string(cluster_of(row.rating)))].get<std::int64_t>() + 1;
  }

  ordered_json below = ordered_json::array();
  for (const auto& r : tails.below) below.push_back(row_summary(r));
  ordered_json above = ordered_json::array();
  for (const auto& r : tails.above) above.push_back(row_summary(r));

  ordered_json doc;
  doc["total_rows"] = rows.size();
  doc["contingency"] = {{"total_false", c.total_false},   {"total_true", c.total_true},
                        {"false_nonneg", c.false_nonneg}, {"false_neg", c.false_neg},
                        {"true_nonneg", c.true_nonneg},   {"true_neg", c.true_neg},
                        {"pct_false_neg", c.pct_false_neg}, {"pct_true_neg", c.pct_true_neg}};
  doc["false_to_true_ratio"] =
      c.total_true == 0 ? ordered_json(nullptr)
                        : ordered_json(static_cast<double>(c.total_false) /
                                       static_cast<double>(c.total_true));
  doc["per_rating"] = per_rating;
  doc["per_cluster"] = per_cluster;
  doc["tails"] = {{"lo", lo},
                  {"hi", hi},
                  {"below_count", tails.below.size()},
                  {"above_count", tails.above.size()},
                  {"below_all_false_like", tails.below_all_false_like},
                  {"above_all_false_like", tails.above_all_false_like},
                  {"below", below},
                  {"above", above}};
  return doc;
}

ordered_json violin_json(const std::vector<ViolinStats>& by_rating,
                         const std::vector<ViolinStats>& by_cluster) {
  ordered_json a = ordered_json::array();
  for (const auto& v : by_rating) a.push_back(violin_to_json(v));
  ordered_json b = ordered_json::array();
  for (const auto& v : by_cluster) b.push_back(violin_to_json(v));
  return ordered_json{{"by_rating", a}, {"by_cluster", b}};
}

std::string render_svg(const std::vector<ViolinStats>& groups, const std::string& title) {
  constexpr double kSlot = 90.0, kLeft = 60.0, kTop = 40.0, kPlotH = 360.0, kHalfWidth = 38.0;
  const double width = kLeft + kSlot * static_cast<double>(groups.size()) + 20.0;
  const double height = kTop + kPlotH + 70.0;
  auto y_of = [&](double s) { return kTop + (1.0 - s) / 2.0 * kPlotH; };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  auto escape = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '&') o += "&amp;";
      else if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else o.push_back(c);
    }
    return o;
  };

  double max_density = 0.0;
  for (const auto& g : groups) {
    for (const auto& [x, d] : g.density_grid) max_density = std::max(max_density, d);
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fmt(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  for (double tick : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    svg << "<line x1=\"" << fmt(kLeft) << "\" x2=\"" << fmt(width - 20) << "\" y1=\""
        << fmt(y_of(tick)) << "\" y2=\"" << fmt(y_of(tick)) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(y_of(tick) + 4)
        << "\" text-anchor=\"end\">" << fmt(tick) << "</text>\n";
  }
  svg << "<text x=\"14\" y=\"" << fmt(kTop + kPlotH / 2)
      << "\" transform=\"rotate(-90 14 " << fmt(kTop + kPlotH / 2)
      << ")\" text-anchor=\"middle\">sentiment</text>\n";

  for (std::size_t i = 0; i < groups.size(); ++i) {
    const ViolinStats& g = groups[i];
    const double cx = kLeft + kSlot * (static_cast<double>(i) + 0.5);
    svg << "<g>\n";
    if (g.n > 0 && max_density > 0.0) {
      std::string right, left;
      for (const auto& [x, d] : g.density_grid) {
        right += fmt(cx + d / max_density * kHalfWidth) + "," + fmt(y_of(x)) + " ";
      }
      for (auto it = g.density_grid.rbegin(); it != g.density_grid.rend(); ++it) {
        left += fmt(cx - it->second / max_density * kHalfWidth) + "," + fmt(y_of(it->first)) + " ";
      }
      svg << "<polygon points=\"" << right << left
          << "\" fill=\"#8fb3d9\" stroke=\"#3d6a99\" stroke-width=\"0.8\"/>\n";
      svg << "<line x1=\"" << fmt(cx) << "\" x2=\"" << fmt(cx) << "\" y1=\"" << fmt(y_of(g.q3))
          << "\" y2=\"" << fmt(y_of(g.q1)) << "\" stroke=\"#222\" stroke-width=\"5\"/>\n";
      svg << "<line x1=\"" << fmt(cx - 6) << "\" x2=\"" << fmt(cx + 6) << "\" y1=\""
          << fmt(y_of(g.median)) << "\" y2=\"" << fmt(y_of(g.median))
          << "\" stroke=\"white\" stroke-width=\"2\"/>\n";
    }
    svg << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(kTop + kPlotH + 18)
        << "\" text-anchor=\"middle\">" << escape(g.label) << "</text>\n";
    svg << "<text x=\"" << fmt(cx) << "\" y=\"" << fmt(kTop + kPlotH + 32)
        << "\" text-anchor=\"middle\" fill=\"#666\">n=" << g.n << "</text>\n";
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace claimlab
