#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tailrisk/diagnostics.hpp"
#include "tailrisk/random.hpp"
#include "tailrisk/stats.hpp"

using namespace tailrisk;

namespace {

std::vector<double> pareto_sample(double alpha, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = std::exp(-std::log1p(-rng.uniform01()) / alpha);  // U^(-1/alpha)
  return x;
}

std::vector<double> exponential_sample(double mean, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.exponential(mean);
  return x;
}

double upper_half_slope(const std::vector<MePoint>& series) {
  std::vector<double> xs, ys;
  for (std::size_t i = series.size() / 2; i < series.size(); ++i) {
    xs.push_back(series[i].threshold);
    ys.push_back(series[i].mean_excess);
  }
  return stats::ols_slope(xs, ys);
}

}  // namespace

TEST_CASE("mean excess: hand-computed values") {
  const std::vector<double> sample{1.0, 2.0, 3.0, 4.0};
  CHECK(mean_excess(sample, 2.0) == doctest::Approx(1.5));        // ((3-2)+(4-2))/2
  CHECK(mean_excess(sample, 0.0) == doctest::Approx(2.5));        // mean - u below min
  CHECK(mean_excess(sample, -3.0) == doctest::Approx(5.5));
  CHECK_THROWS_AS(mean_excess(sample, 4.0), std::invalid_argument);
}

TEST_CASE("mean excess is shift-invariant") {
  const std::vector<double> sample{1.0, 5.0, 9.0, 11.0, 20.0};
  const double base = mean_excess(sample, 6.0);
  for (double c : {-3.0, 0.5, 100.0}) {
    std::vector<double> shifted = sample;
    for (double& x : shifted) x += c;
    CHECK(mean_excess(shifted, 6.0 + c) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("mean excess of exponential data is flat at the mean") {
  const double m = 7.0;
  const std::vector<double> sample = exponential_sample(m, 20000, 303);
  for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double u = stats::quantile(sample, q);
    CHECK(mean_excess(sample, u) == doctest::Approx(m).epsilon(0.12));
  }
}

TEST_CASE("meplot discriminates power-law from exponential tails") {
  const auto pareto = meplot(pareto_sample(1.5, 5000, 2024));
  const auto expo = meplot(exponential_sample(2.0, 5000, 404));
  CHECK(upper_half_slope(pareto) > 0.5);   // van der Wijk linear growth
  CHECK(std::abs(upper_half_slope(expo)) < 0.15);
}

TEST_CASE("meplot structure") {
  const std::vector<double> sample{1.0, 2.0, 3.0, 4.0};
  const auto series = meplot(sample);
  REQUIRE(series.size() == 3);  // largest point excluded
  CHECK(series[0].threshold == 1.0);
  CHECK(series[0].mean_excess == doctest::Approx(2.0));
  CHECK(series[2].mean_excess == doctest::Approx(1.0));

  // constant sample: no threshold has exceedances; the defined prefix is empty
  const std::vector<double> constant{5.0, 5.0, 5.0};
  CHECK(meplot(constant).empty());

  CHECK_THROWS_AS(meplot(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("max-to-sum ratios: exact small cases") {
  const std::vector<double> constant(10, 3.0);
  const auto r = max_to_sum(constant, 1);
  for (std::size_t n = 1; n <= r.size(); ++n)
    CHECK(r[n - 1] == doctest::Approx(1.0 / static_cast<double>(n)));

  const std::vector<double> single{42.0};
  for (int p = 1; p <= 4; ++p) CHECK(max_to_sum(single, p)[0] == 1.0);

  CHECK_THROWS_AS(max_to_sum(single, 0), std::invalid_argument);
}

TEST_CASE("max-to-sum diagnoses moment existence for Pareto(1.5)") {
  const std::vector<double> x = pareto_sample(1.5, 10000, 505);
  const auto r1 = max_to_sum(x, 1);
  const auto r2 = max_to_sum(x, 2);
  auto final_decile_mean = [](const std::vector<double>& r) {
    std::vector<double> tail(r.end() - r.size() / 10, r.end());
    return stats::mean(tail);
  };
  CHECK(final_decile_mean(r1) < 0.2);   // first moment finite -> ratio dies out
  CHECK(final_decile_mean(r2) > 0.1);   // second moment infinite -> ratio persists
  CHECK(r1.front() == 1.0);
  for (double v : r1) {
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("max-to-sum ratios are scale-invariant") {
  const std::vector<double> x = pareto_sample(1.2, 500, 606);
  for (int p = 1; p <= 4; ++p) {
    const auto base = max_to_sum(x, p);
    std::vector<double> scaled = x;
    for (double& v : scaled) v *= 37.5;
    const auto r = max_to_sum(scaled, p);
    for (std::size_t i = 0; i < r.size(); ++i)
      CHECK(r[i] == doctest::Approx(base[i]).epsilon(1e-9));
  }
}

TEST_CASE("exponential qq plot: correlation behavior") {
  // exact exponential quantiles give near-perfect correlation
  std::vector<double> grid(500);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = -std::log1p(-static_cast<double>(i + 1) / (grid.size() + 1.0)) * 3.0;
  CHECK(qq_exponential(grid).correlation >= 0.999);

  // two points are always perfectly correlated
  const std::vector<double> pair{1.0, 4.0};
  CHECK(qq_exponential(pair).correlation == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exponential qq plot: heavy tails bend above the bulk line") {
  // Heavy tails make the QQ curve convex: the top-decile slope runs well
  // above the bulk slope and the largest point ends up far above the
  // mean-scaled diagonal. Exponential data stays on one line throughout.
  auto slope_of = [](const QqSeries& s, std::size_t from, std::size_t to) {
    std::vector<double> xs, ys;
    for (std::size_t i = from; i < to; ++i) {
      xs.push_back(s.points[i].theoretical);
      ys.push_back(s.points[i].empirical);
    }
    return stats::ols_slope(xs, ys);
  };

  const QqSeries pareto = qq_exponential(pareto_sample(1.5, 4000, 707));
  const std::size_t n = pareto.points.size();
  const double tail_slope = slope_of(pareto, n - n / 10, n);
  const double bulk_slope = slope_of(pareto, 0, n - n / 10);
  CHECK(tail_slope > 1.5 * bulk_slope);
  CHECK(pareto.points.back().empirical > 2.0 * pareto.points.back().theoretical);

  const QqSeries expo = qq_exponential(exponential_sample(2.0, 4000, 717));
  const double expo_tail = slope_of(expo, n - n / 10, n);
  const double expo_bulk = slope_of(expo, 0, n - n / 10);
  CHECK(expo_tail < 1.5 * expo_bulk);
}

TEST_CASE("zipf data: construction and shapes") {
  const std::vector<double> sample{1.0, 2.0, 3.0, 4.0};
  const auto points = zipf_data(sample);
  REQUIRE(points.size() == 3);
  CHECK(points[0].first == doctest::Approx(std::log(1.0)));
  CHECK(points[0].second == doctest::Approx(std::log(0.75)));
  CHECK(points[2].second == doctest::Approx(std::log(0.25)));

  // Pareto tail: straight line with slope ~ -alpha
  const auto pareto_pts = zipf_data(pareto_sample(1.5, 10000, 808));
  std::vector<double> xs, ys;
  for (const auto& [lx, ls] : pareto_pts) {
    xs.push_back(lx);
    ys.push_back(ls);
  }
  const double slope = stats::ols_slope(xs, ys);
  CHECK(std::abs(-slope - 1.5) <= 0.15);

  // exponential: concave, slope steepens
  const auto exp_pts = zipf_data(exponential_sample(1.0, 10000, 909));
  std::vector<double> x1, y1, x2, y2;
  for (std::size_t i = 0; i < exp_pts.size() / 2; ++i) {
    x1.push_back(exp_pts[i].first);
    y1.push_back(exp_pts[i].second);
  }
  for (std::size_t i = exp_pts.size() / 2; i < exp_pts.size(); ++i) {
    x2.push_back(exp_pts[i].first);
    y2.push_back(exp_pts[i].second);
  }
  CHECK(stats::ols_slope(x2, y2) < stats::ols_slope(x1, y1));

  CHECK_THROWS_AS(zipf_data(std::vector<double>{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("record counts: exact sequences") {
  const std::vector<double> sample{1.0, 3.0, 2.0, 5.0};
  const RecordSeries series = record_counts(sample);
  CHECK(series.counts == std::vector<std::size_t>{1, 2, 2, 3});
  CHECK(series.harmonic[3] == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0 + 0.25));

  std::vector<double> increasing{1, 2, 3, 4, 5, 6};
  CHECK(record_counts(increasing).counts.back() == 6);

  // ties are not records
  const std::vector<double> tied{2.0, 2.0, 2.0};
  CHECK(record_counts(tied).counts.back() == 1);
}

TEST_CASE("record counts match the harmonic expectation on i.i.d. data") {
  const std::size_t n = 565;
  const int runs = 10000;
  Rng rng(1234);
  double total = 0.0;
  for (int r = 0; r < runs; ++r) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform01();
    total += static_cast<double>(record_counts(x).counts.back());
  }
  const double mean_records = total / runs;
  const double expectation = stats::harmonic_number(n);  // ~6.91
  // var = sum (1/i)(1 - 1/i)
  double var = 0.0;
  for (std::size_t i = 1; i <= n; ++i)
    var += (1.0 / i) * (1.0 - 1.0 / i);
  const double se = std::sqrt(var / runs);
  CHECK(std::abs(mean_records - expectation) <= 3.0 * se);
}

TEST_CASE("record positions are invariant under increasing transforms") {
  Rng rng(31337);
  std::vector<double> x(300);
  for (double& v : x) v = rng.uniform(1.0, 100.0);
  std::vector<double> logged = x;
  for (double& v : logged) v = std::log(v);
  CHECK(record_counts(x).counts == record_counts(logged).counts);
}
