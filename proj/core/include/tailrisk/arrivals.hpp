#pragma once

#include <vector>

#include "tailrisk/corpus.hpp"
#include "tailrisk/diagnostics.hpp"
#include "tailrisk/gpd.hpp"
#include "tailrisk/resample.hpp"

namespace tailrisk {

/// Inter-arrival gaps, in whole years, between consecutive qualifying
/// events. Zero gaps (same anchor year) are retained.
struct GapSeries {
  double threshold = 0.0;
  Anchor anchor = Anchor::start;
  std::vector<int> gaps;
  double mean = 0.0;
  double mean_abs_deviation = 0.0;
};

GapSeries gap_series(const ObservationSet& obs, double threshold, Anchor anchor);

/// Homogeneous-Poisson test battery: exponential QQ of the gaps, gap
/// autocorrelations with a white-noise band, and a Pearson chi-square of
/// subinterval counts against equiprobability.
struct PoissonTestReport {
  std::size_t n_events = 0;
  YearWindow window;
  QqSeries gap_qq;
  std::vector<double> acf;       // lags 0..20 (or n-1 if shorter)
  double acf_band = 0.0;         // 1.96 / sqrt(n_gaps)
  double chi_square = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  int n_subintervals = 0;        // after merging for the >= 5 expectation rule
  std::vector<std::size_t> cell_counts;
};

/// n_subintervals = 0 picks floor(n_events / 10) capped at 20. Cells are
/// equal-width in years; adjacent cells are merged right to left until each
/// expected count reaches 5.
PoissonTestReport poisson_battery(const ObservationSet& obs, double threshold,
                                  const YearWindow& window, int n_subintervals = 0);

/// GPD refit restricted to events whose anchor year falls in the window.
GpdFit restricted_refit(const ObservationSet& obs, const YearWindow& window,
                        const FitConfig& config);

}  // namespace tailrisk
