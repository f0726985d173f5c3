#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tailrisk/gpd.hpp"
#include "tailrisk/random.hpp"
#include "tailrisk/stats.hpp"
#include "tailrisk/synth.hpp"
#include "test_util.hpp"

using namespace tailrisk;

TEST_CASE("cdf values") {
  CHECK(gpd_cdf(0.0, 0.0, 1.0) == 0.0);
  CHECK(gpd_cdf(1.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gpd_cdf(0.0, 1.5, 2.0) == 0.0);
}

TEST_CASE("branch continuity at xi = 0") {
  for (int i = 0; i <= 100; ++i) {
    const double w = 10.0 * i / 100.0;
    CHECK(std::abs(gpd_cdf(w, 1e-8, 1.0) - gpd_cdf(w, 0.0, 1.0)) <= 1e-6);
    CHECK(std::abs(gpd_pdf(w, 1e-8, 1.0) - gpd_pdf(w, 0.0, 1.0)) <= 1e-6);
  }
}

TEST_CASE("quantile inverts the cdf") {
  for (double xi : {-0.4, -0.1, 0.0, 0.3, 1.0, 1.5, 3.0}) {
    for (int i = 0; i <= 200; ++i) {
      const double q = 0.999 * i / 200.0;
      const double w = gpd_quantile(q, xi, 2.5);
      const double back = gpd_cdf(w, xi, 2.5);
      CHECK(std::abs(back - q) <= 1e-10);
      if (w > 0.0) {
        const double w2 = gpd_quantile(back, xi, 2.5);
        CHECK(std::abs(w2 - w) <= 1e-8 * w);
      }
    }
  }
}

TEST_CASE("support errors") {
  CHECK_THROWS_AS(gpd_cdf(-0.1, 0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(gpd_cdf(2.1, -0.5, 1.0), std::domain_error);  // endpoint at 2
  CHECK_THROWS_AS(gpd_quantile(1.0, 0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(gpd_pdf(0.0, 0.0, -1.0), std::domain_error);
}

TEST_CASE("sampler matches the distribution (Kolmogorov distance)") {
  const double xi = 1.5, sigma = 9.062e4;
  const std::vector<double> w = sample_gpd(xi, sigma, 100000, 20240202);
  const double d = testutil::kolmogorov_distance(
      w, [&](double x) { return gpd_cdf(x, xi, sigma); });
  CHECK(d < 0.01);
}

TEST_CASE("inverse-cdf sampling fixed points") {
  CHECK(gpd_quantile(0.0, 1.0, 1.0) == 0.0);               // U = 0 -> w = 0
  CHECK(gpd_quantile(0.5, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mle recovers synthetic parameters") {
  const double xi = 1.5, sigma = 9.062e4;
  std::vector<double> w = sample_gpd(xi, sigma, 10000, 77);
  const GpdFit fit = fit_mle(w);
  REQUIRE(fit.convergence.converged);
  REQUIRE(fit.se_xi.has_value());
  REQUIRE(fit.se_sigma.has_value());
  CHECK(std::abs(fit.params.xi - xi) <= 3.0 * *fit.se_xi);
  CHECK(std::abs(fit.params.sigma - sigma) <= 3.0 * *fit.se_sigma);
  CHECK(fit.params.n_exceed == 10000);
}

TEST_CASE("mle on exponential data lands near xi = 0") {
  Rng rng(123);
  std::vector<double> w(5000);
  for (double& x : w) x = rng.exponential(3.0);
  const GpdFit fit = fit_mle(w);
  CHECK(std::abs(fit.params.xi) < 0.08);
  CHECK(fit.params.sigma == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("degenerate and undersized inputs") {
  CHECK_THROWS_AS(fit_mle(std::vector<double>(50, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(fit_mle(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("fit is invariant to data ordering") {
  std::vector<double> w = sample_gpd(0.8, 2.0, 500, 5);
  const GpdFit a = fit_mle(w);
  Rng rng(9);
  for (std::size_t i = w.size(); i > 1; --i) std::swap(w[i - 1], w[rng.uniform_index(i)]);
  const GpdFit b = fit_mle(w);
  CHECK(a.params.xi == b.params.xi);
  CHECK(a.params.sigma == b.params.sigma);
}

TEST_CASE("optimum beats random parameter probes") {
  std::vector<double> w = sample_gpd(1.2, 10.0, 800, 31);
  const GpdFit fit = fit_mle(w);
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    const double xi = rng.uniform(-0.49, 5.0);
    const double sigma = fit.params.sigma * std::exp(rng.uniform(-1.5, 1.5));
    CHECK(gpd_loglik(w, xi, sigma) <= fit.log_likelihood + 1e-7);
  }
}

TEST_CASE("moment existence rule") {
  GpdFit fit;
  fit.params.xi = 1.5;
  CHECK(fit.moments_finite_up_to() == 0);  // no finite moments
  fit.params.xi = 0.5;
  CHECK(fit.moments_finite_up_to() == 1);
  fit.params.xi = 0.4;
  CHECK(fit.moments_finite_up_to() == 2);
  fit.params.xi = 0.2;
  CHECK(fit.moments_finite_up_to() == 4);
  fit.params.xi = -0.1;
  CHECK(fit.moments_finite_up_to() == -1);  // all moments finite
}

TEST_CASE("pickands estimator: exact spacing ratio") {
  // construct order statistics with X_k - X_2k = 2 (X_2k - X_4k) at k = 1:
  // upper order stats 7, 3, 2, 1 -> ratio (7-3)/(3-1) = 2 -> xi = 1
  const std::vector<double> sample{1.0, 2.0, 3.0, 7.0};
  const PickandsCurve curve = pickands_curve(sample);
  REQUIRE(curve.points.size() == 1);
  CHECK(curve.points[0].k == 1);
  CHECK(curve.points[0].xi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(curve.stable_estimate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pickands summary concentrates near the true shape") {
  // median absolute error of the stable-region estimate over 100 seeds
  std::vector<double> errors;
  for (int seed = 0; seed < 100; ++seed) {
    std::vector<double> w = sample_gpd(0.5, 1.0, 10000, 1000 + seed);
    errors.push_back(std::abs(pickands_curve(std::move(w)).stable_estimate - 0.5));
  }
  CHECK(stats::median(errors) <= 0.15);
}

TEST_CASE("pickands flags undefined points") {
  std::vector<double> tied(16, 1.0);
  tied[0] = 5.0;  // only the top spacing is positive
  CHECK_THROWS(pickands_curve(tied));
}

TEST_CASE("tail stability across thresholds on synthetic data") {
  int consistent = 0;
  const int seeds = 500;
  for (int seed = 0; seed < seeds; ++seed) {
    std::vector<double> sample = sample_gpd(0.7, 5.0, 2000, 31000 + seed);
    const std::vector<double> thresholds{0.0, 5.0};
    const TailStabilityScan scan = tail_stability_scan(sample, thresholds);
    if (!scan.fits[0].fit || !scan.fits[1].fit) continue;
    if (scan.flags.empty()) ++consistent;
  }
  CHECK(consistent >= static_cast<int>(0.9 * seeds));
}

TEST_CASE("single threshold scan has no flags") {
  std::vector<double> sample = sample_gpd(0.7, 5.0, 500, 3);
  const std::vector<double> one{1.0};
  const TailStabilityScan scan = tail_stability_scan(sample, one);
  CHECK(scan.fits.size() == 1);
  CHECK(scan.flags.empty());
}

TEST_CASE("residuals are standard exponential under the fitted model") {
  std::vector<double> w = sample_gpd(1.5, 100.0, 4000, 66);
  const GpdFit fit = fit_mle(w);
  const std::vector<double> r = gpd_residuals(w, fit);
  CHECK(std::abs(stats::mean(r) - 1.0) <= 3.0 / std::sqrt(4000.0));
}

TEST_CASE("residual edge cases") {
  GpdFit fit;
  fit.params = {0.5, 2.0, 0.0, 1};
  fit.convergence.converged = true;
  const std::vector<double> w{0.0};
  CHECK(gpd_residuals(w, fit)[0] == 0.0);

  // xi -> 0 branch consistency
  fit.params.xi = 1e-8;
  GpdFit fit0 = fit;
  fit0.params.xi = 0.0;
  const std::vector<double> w2{0.5, 1.0, 3.0};
  const auto r1 = gpd_residuals(w2, fit);
  const auto r0 = gpd_residuals(w2, fit0);
  for (std::size_t i = 0; i < w2.size(); ++i) CHECK(std::abs(r1[i] - r0[i]) <= 1e-6);
}

TEST_CASE("goodness of fit: determinism and power") {
  std::vector<double> w = sample_gpd(1.0, 10.0, 200, 17);
  const GpdFit fit = fit_mle(w);
  const GofResult a = goodness_of_fit(w, fit, 999, 555);
  const GofResult b = goodness_of_fit(w, fit, 999, 555);
  CHECK(a.statistic == b.statistic);
  CHECK(a.p_value == b.p_value);

  // uniform data at a low threshold is grossly non-GPD at xi ~ 1 scale:
  Rng rng(888);
  std::vector<double> uniform(300);
  for (double& x : uniform) x = rng.uniform(0.9, 1.0);
  FitOptions opts;
  const GpdFit ufit = fit_mle(uniform, opts);
  const GofResult power = goodness_of_fit(uniform, ufit, 999, 777, opts);
  CHECK(power.p_value < 0.01);
}

TEST_CASE("goodness of fit: bootstrap p-values are calibrated") {
  // data simulated from the fitted model should give roughly uniform p
  int below = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> w = sample_gpd(1.5, 5.0, 80, 40000 + t);
    FitOptions opts;
    const GpdFit fit = fit_mle(w, opts);
    const GofResult gof = goodness_of_fit(w, fit, 999, 90000 + t, opts);
    if (gof.p_value < 0.1) ++below;
  }
  const double fraction = static_cast<double>(below) / trials;
  CHECK(fraction >= 0.05);
  CHECK(fraction <= 0.17);
}
