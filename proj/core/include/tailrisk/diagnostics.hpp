#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace tailrisk {

/// Empirical mean excess e_n(u): average of (X_i - u) over the observations
/// strictly exceeding u. Throws when nothing exceeds u.
double mean_excess(std::span<const double> sample, double u);

struct MePoint {
  double threshold;
  double mean_excess;
};

/// Mean-excess plot data over the order statistics, largest excluded.
/// Thresholds whose exceedance set is empty (ties with the maximum) end the
/// series; the defined prefix is returned. A power-law tail shows up as a
/// linearly increasing trend, an exponential tail as a flat one.
std::vector<MePoint> meplot(std::span<const double> sample);

/// Cumulative maximum-to-sum ratios R_n^p = max(X_1^p..X_n^p) / sum(X_i^p)
/// in presentation order. R_n^p -> 0 iff E[X^p] is finite.
std::vector<double> max_to_sum(std::span<const double> sample, int p);

/// All four moment orders at once, msplot style.
std::array<std::vector<double>, 4> ms_plot(std::span<const double> sample);

struct QqPoint {
  double theoretical;
  double empirical;
};

struct QqSeries {
  std::vector<QqPoint> points;
  double correlation = 0.0;
};

/// Exponential QQ data: (-log(1 - i/(n+1)) scaled by the sample mean,
/// X_{i:n}) plus the Pearson correlation of the pairs.
QqSeries qq_exponential(std::span<const double> sample);

/// Zipf plot data (log x, log empirical survival), survival (n-i)/n at the
/// i-th order statistic; the top point is excluded to avoid log 0.
std::vector<std::pair<double, double>> zipf_data(std::span<const double> sample);

struct RecordSeries {
  std::vector<std::size_t> counts;  // cumulative record count at each n
  std::vector<double> harmonic;     // H_n = sum_{i<=n} 1/i
};

/// Cumulative count of strict records in chronological order; ties do not
/// set a record. For i.i.d. data the count tracks H_n.
RecordSeries record_counts(std::span<const double> sample);

}  // namespace tailrisk
