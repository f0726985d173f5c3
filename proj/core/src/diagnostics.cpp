#include "tailrisk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tailrisk/stats.hpp"

namespace tailrisk {

double mean_excess(std::span<const double> sample, double u) {
  double sum = 0.0;
  std::size_t count = 0;
  for (double x : sample) {
    if (x > u) {
      sum += x - u;
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("mean_excess: no exceedances above threshold");
  return sum / static_cast<double>(count);
}

std::vector<MePoint> meplot(std::span<const double> sample) {
  if (sample.size() < 3) throw std::invalid_argument("meplot: need n >= 3");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  // suffix[i] = sum of sorted[i..n)
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + sorted[i];

  std::vector<MePoint> series;
  series.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double u = sorted[i];
    // skip ties: exceedances are strictly above u
    std::size_t j = i + 1;
    while (j < n && sorted[j] <= u) ++j;
    if (j == n) break;  // nothing exceeds; the series ends here
    const double count = static_cast<double>(n - j);
    series.push_back({u, (suffix[j] - count * u) / count});
  }
  return series;
}

std::vector<double> max_to_sum(std::span<const double> sample, int p) {
  if (p < 1) throw std::invalid_argument("max_to_sum: p must be >= 1");
  if (p > 4) throw std::invalid_argument("max_to_sum: p must be <= 4");
  std::vector<double> ratios;
  ratios.reserve(sample.size());
  double running_sum = 0.0;
  double running_max = 0.0;
  for (double x : sample) {
    if (x < 0.0) throw std::invalid_argument("max_to_sum: sample must be nonnegative");
    double xp = 1.0;
    for (int i = 0; i < p; ++i) xp *= x;
    running_sum += xp;
    running_max = std::max(running_max, xp);
    ratios.push_back(running_sum > 0.0 ? running_max / running_sum : 1.0);
  }
  return ratios;
}

std::array<std::vector<double>, 4> ms_plot(std::span<const double> sample) {
  return {max_to_sum(sample, 1), max_to_sum(sample, 2), max_to_sum(sample, 3),
          max_to_sum(sample, 4)};
}

QqSeries qq_exponential(std::span<const double> sample) {
  if (sample.size() < 2) throw std::invalid_argument("qq_exponential: need n >= 2");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double scale = stats::mean(sorted);

  QqSeries series;
  series.points.reserve(sorted.size());
  std::vector<double> theo(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    theo[i] = -std::log1p(-static_cast<double>(i + 1) / (n + 1.0)) * scale;
    series.points.push_back({theo[i], sorted[i]});
  }
  series.correlation = stats::pearson_correlation(theo, sorted);
  return series;
}

std::vector<std::pair<double, double>> zipf_data(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("zipf_data: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() <= 0.0) throw std::invalid_argument("zipf_data: sample must be positive");
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> points;
  points.reserve(sorted.size() - 1);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double survival = (n - static_cast<double>(i)) / n;
    points.emplace_back(std::log(sorted[i - 1]), std::log(survival));
  }
  return points;
}

RecordSeries record_counts(std::span<const double> sample) {
  RecordSeries series;
  series.counts.reserve(sample.size());
  series.harmonic.reserve(sample.size());
  double running_max = 0.0;
  std::size_t records = 0;
  double harmonic = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (i == 0 || sample[i] > running_max) {
      ++records;
      running_max = sample[i];
    }
    harmonic += 1.0 / static_cast<double>(i + 1);
    series.counts.push_back(records);
    series.harmonic.push_back(harmonic);
  }
  return series;
}

}  // namespace tailrisk
