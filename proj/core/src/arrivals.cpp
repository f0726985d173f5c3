#include "tailrisk/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tailrisk/special.hpp"
#include "tailrisk/stats.hpp"

namespace tailrisk {
namespace {

std::vector<int> qualifying_years(const ObservationSet& obs, double threshold, Anchor anchor) {
  std::vector<int> years;
  for (std::size_t i = 0; i < obs.size(); ++i)
    if (obs.values[i] >= threshold) years.push_back(obs.records[i].anchor_year(anchor));
  std::sort(years.begin(), years.end());
  return years;
}

/// Autocorrelation with the biased (divide by n) covariance normalization.
std::vector<double> autocorrelation(const std::vector<double>& x, std::size_t max_lag) {
  const std::size_t n = x.size();
  const double m = stats::mean(x);
  double c0 = 0.0;
  for (double v : x) c0 += (v - m) * (v - m);
  c0 /= static_cast<double>(n);
  std::vector<double> acf;
  acf.reserve(max_lag + 1);
  for (std::size_t h = 0; h <= max_lag; ++h) {
    double ch = 0.0;
    for (std::size_t t = 0; t + h < n; ++t) ch += (x[t] - m) * (x[t + h] - m);
    ch /= static_cast<double>(n);
    acf.push_back(c0 > 0.0 ? ch / c0 : (h == 0 ? 1.0 : 0.0));
  }
  return acf;
}

}  // namespace

GapSeries gap_series(const ObservationSet& obs, double threshold, Anchor anchor) {
  const std::vector<int> years = qualifying_years(obs, threshold, anchor);
  if (years.size() < 2)
    throw std::invalid_argument("gap_series: need at least 2 qualifying events");
  GapSeries series;
  series.threshold = threshold;
  series.anchor = anchor;
  series.gaps.reserve(years.size() - 1);
  std::vector<double> gaps_d;
  for (std::size_t i = 1; i < years.size(); ++i) {
    series.gaps.push_back(years[i] - years[i - 1]);
    gaps_d.push_back(static_cast<double>(series.gaps.back()));
  }
  series.mean = stats::mean(gaps_d);
  series.mean_abs_deviation = stats::mean_abs_deviation(gaps_d);
  return series;
}

PoissonTestReport poisson_battery(const ObservationSet& obs, double threshold,
                                  const YearWindow& window, int n_subintervals) {
  if (window.first > window.last)
    throw std::invalid_argument("poisson_battery: empty window");

  std::vector<int> years;
  for (int y : qualifying_years(obs, threshold, obs.anchor))
    if (window.contains(y)) years.push_back(y);
  if (years.size() < 2)
    throw std::invalid_argument("poisson_battery: fewer than 2 qualifying events in the window");

  PoissonTestReport report;
  report.n_events = years.size();
  report.window = window;

  std::vector<double> gaps;
  gaps.reserve(years.size() - 1);
  for (std::size_t i = 1; i < years.size(); ++i)
    gaps.push_back(static_cast<double>(years[i] - years[i - 1]));

  report.gap_qq = qq_exponential(gaps);
  const std::size_t max_lag = std::min<std::size_t>(20, gaps.size() - 1);
  report.acf = autocorrelation(gaps, max_lag);
  report.acf_band = 1.96 / std::sqrt(static_cast<double>(gaps.size()));

  // Occupancy counts over equal-width year cells.
  const auto n = static_cast<double>(years.size());
  int cells = n_subintervals > 0
                  ? n_subintervals
                  : std::clamp(static_cast<int>(years.size() / 10), 2, 20);
  const long span = static_cast<long>(window.last) - window.first + 1;
  cells = std::min<long>(cells, span) > 1 ? static_cast<int>(std::min<long>(cells, span)) : 2;
  std::vector<std::size_t> counts(cells, 0);
  for (int y : years) {
    const long offset = static_cast<long>(y) - window.first;
    auto idx = static_cast<std::size_t>(offset * cells / span);
    counts[std::min(idx, counts.size() - 1)] += 1;
  }

  // Merge adjacent cells right to left until every merged cell expects at
  // least 5 events under equiprobability. A merged cell's expectation is
  // proportional to the number of base cells it absorbed.
  const double expected_single = n / static_cast<double>(cells);
  std::vector<std::size_t> merged_counts;
  std::vector<double> merged_expected;
  std::size_t acc = 0;
  double acc_expected = 0.0;
  for (std::size_t i = counts.size(); i-- > 0;) {
    acc += counts[i];
    acc_expected += expected_single;
    if (acc_expected >= 5.0) {
      merged_counts.push_back(acc);
      merged_expected.push_back(acc_expected);
      acc = 0;
      acc_expected = 0.0;
    }
  }
  if (acc_expected > 0.0) {
    if (merged_counts.empty()) {
      merged_counts.push_back(acc);
      merged_expected.push_back(acc_expected);
    } else {
      merged_counts.back() += acc;
      merged_expected.back() += acc_expected;
    }
  }
  std::reverse(merged_counts.begin(), merged_counts.end());
  std::reverse(merged_expected.begin(), merged_expected.end());
  if (merged_counts.size() < 2)
    throw std::invalid_argument("poisson_battery: too few events for an occupancy test");

  double chi = 0.0;
  for (std::size_t i = 0; i < merged_counts.size(); ++i) {
    const double diff = static_cast<double>(merged_counts[i]) - merged_expected[i];
    chi += diff * diff / merged_expected[i];
  }

  report.chi_square = chi;
  report.degrees_of_freedom = static_cast<int>(merged_counts.size()) - 1;
  report.p_value = special::chi_square_sf(chi, report.degrees_of_freedom);
  report.n_subintervals = static_cast<int>(merged_counts.size());
  report.cell_counts = std::move(merged_counts);
  return report;
}

GpdFit restricted_refit(const ObservationSet& obs, const YearWindow& window,
                        const FitConfig& config) {
  std::vector<double> w;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!window.contains(obs.records[i].anchor_year(obs.anchor))) continue;
    if (obs.values[i] >= config.threshold) w.push_back(obs.values[i] - config.threshold);
  }
  if (w.empty())
    throw std::invalid_argument("restricted_refit: no qualifying events in the window");
  return fit_mle(std::move(w), config.options, config.threshold);
}

}  // namespace tailrisk
