#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tailrisk {

/// Generalized Pareto parameters for excesses over a threshold.
/// Support: w >= 0 for xi >= 0, w in [0, -sigma/xi] for xi < 0.
struct GpdParams {
  double xi = 0.0;
  double sigma = 1.0;
  double threshold = 0.0;
  std::size_t n_exceed = 0;
};

double gpd_cdf(double w, double xi, double sigma);
double gpd_pdf(double w, double xi, double sigma);
double gpd_quantile(double q, double xi, double sigma);

inline double gpd_cdf(double w, const GpdParams& p) { return gpd_cdf(w, p.xi, p.sigma); }
inline double gpd_pdf(double w, const GpdParams& p) { return gpd_pdf(w, p.xi, p.sigma); }
inline double gpd_quantile(double q, const GpdParams& p) { return gpd_quantile(q, p.xi, p.sigma); }

/// GPD log-likelihood of a sample of excesses.
double gpd_loglik(std::span<const double> excesses, double xi, double sigma);

struct FitOptions {
  std::size_t min_exceedances = 30;
  double xi_min = -0.5;  // open lower box bound; MLE is inconsistent below
  double xi_max = 10.0;
};

struct ConvergenceReport {
  bool converged = false;
  bool at_boundary = false;
  int profile_evaluations = 0;
  std::string message;
};

struct GpdFit {
  GpdParams params;
  std::optional<double> se_xi;
  std::optional<double> se_sigma;
  double log_likelihood = 0.0;
  ConvergenceReport convergence;

  /// Largest p >= 1 with xi < 1/p, i.e. the highest implied finite moment;
  /// 0 when no moment is finite, -1 when all are (xi <= 0).
  int moments_finite_up_to() const;
};

/// Raised when the likelihood maximization fails; carries the best
/// parameters seen so far and a short trace of the search.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, GpdFit best, std::string trace)
      : std::runtime_error(what), best_so_far(std::move(best)), trace(std::move(trace)) {}
  GpdFit best_so_far;
  std::string trace;
};

/// Maximum-likelihood GPD fit on positive excesses. The two-parameter
/// problem is reduced to a one-dimensional profile in theta = xi/sigma
/// (for fixed theta the inner maximum is analytic), seeded from
/// probability-weighted-moment estimates and a bracketing scan, then
/// polished by golden-section search. xi is boxed to (xi_min, xi_max].
/// Standard errors come from the numerically differenced observed
/// information at the optimum and are withheld when xi <= -0.5 or the
/// information matrix is not positive definite.
GpdFit fit_mle(std::vector<double> excesses, const FitOptions& options = {},
               double threshold = 0.0);

struct PickandsPoint {
  std::size_t k;
  double xi;
};

struct PickandsCurve {
  std::vector<PickandsPoint> points;
  std::vector<std::size_t> omitted_k;  // zero/non-positive spacing ratios
  double stable_estimate = 0.0;        // median over the middle third of k
};

/// Pickands estimator curve xi_hat(k) for k = 1..n/4, with a deterministic
/// stable-region summary.
PickandsCurve pickands_curve(std::vector<double> sample);

struct ThresholdFit {
  double threshold;
  std::optional<GpdFit> fit;
  std::string error;  // set when the fit at this threshold failed
};

struct StabilityFlag {
  std::size_t i, j;      // indices into the threshold list
  double xi_difference;  // |xi_i - xi_j|
  double tolerance;      // 2 * combined standard error
};

struct TailStabilityScan {
  std::vector<ThresholdFit> fits;
  std::vector<StabilityFlag> flags;
};

/// Refits at every threshold and flags pairs whose shape estimates differ
/// by more than twice the combined standard error.
TailStabilityScan tail_stability_scan(std::span<const double> sample,
                                      std::span<const double> thresholds,
                                      const FitOptions& options = {});

/// Probability-integral residuals of a GPD fit; standard exponential when
/// the fit is correct.
std::vector<double> gpd_residuals(std::span<const double> excesses, const GpdFit& fit);

struct GofResult {
  double statistic = 0.0;  // Anderson-Darling, residuals vs Exp(1)
  double p_value = 1.0;
  std::size_t n_boot = 0;
  std::size_t replicate_failures = 0;
};

/// Anderson-Darling test of the fitted GPD with a parametric bootstrap
/// p-value: each replicate resimulates from the fitted parameters and is
/// refitted before its statistic is computed.
GofResult goodness_of_fit(std::span<const double> excesses, const GpdFit& fit,
                          std::size_t n_boot, std::uint64_t seed,
                          const FitOptions& options = {});

}  // namespace tailrisk
