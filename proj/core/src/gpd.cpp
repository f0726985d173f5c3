#include "tailrisk/gpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tailrisk/random.hpp"
#include "tailrisk/stats.hpp"

namespace tailrisk {
namespace {

constexpr double kXiZeroBranch = 1e-8;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_support(double w, double xi, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("gpd: sigma must be positive");
  if (w < 0.0) throw std::domain_error("gpd: excess below 0");
  if (xi < 0.0 && w > -sigma / xi) throw std::domain_error("gpd: excess beyond upper endpoint");
}

}  // namespace

double gpd_cdf(double w, double xi, double sigma) {
  check_support(w, xi, sigma);
  if (std::abs(xi) < kXiZeroBranch) return -std::expm1(-w / sigma);
  return -std::expm1(-std::log1p(xi * w / sigma) / xi);
}

double gpd_pdf(double w, double xi, double sigma) {
  check_support(w, xi, sigma);
  if (std::abs(xi) < kXiZeroBranch) return std::exp(-w / sigma) / sigma;
  return std::exp(-(1.0 / xi + 1.0) * std::log1p(xi * w / sigma)) / sigma;
}

double gpd_quantile(double q, double xi, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("gpd: sigma must be positive");
  if (!(q >= 0.0) || q >= 1.0) throw std::domain_error("gpd_quantile: q must be in [0, 1)");
  if (std::abs(xi) < kXiZeroBranch) return -sigma * std::log1p(-q);
  return sigma * std::expm1(-xi * std::log1p(-q)) / xi;
}

double gpd_loglik(std::span<const double> excesses, double xi, double sigma) {
  if (!(sigma > 0.0)) return -kInf;
  const double n = static_cast<double>(excesses.size());
  if (std::abs(xi) < kXiZeroBranch) {
    double sum = 0.0;
    for (double w : excesses) sum += w;
    return -n * std::log(sigma) - sum / sigma;
  }
  double sum = 0.0;
  for (double w : excesses) {
    const double a = 1.0 + xi * w / sigma;
    if (!(a > 0.0)) return -kInf;
    sum += std::log1p(xi * w / sigma);
  }
  return -n * std::log(sigma) - (1.0 + 1.0 / xi) * sum;
}

int GpdFit::moments_finite_up_to() const {
  const double xi = params.xi;
  if (xi <= 0.0) return -1;
  int p = static_cast<int>(std::ceil(1.0 / xi - 1e-12)) - 1;
  return std::max(p, 0);
}

namespace {

// Profile reduction: for theta = xi/sigma the inner maximum over the
// remaining free parameter is analytic,
//   xi(theta) = mean(log1p(theta w_i)),  sigma(theta) = xi(theta)/theta,
//   l*(theta) = -n [log(sigma(theta)) + xi(theta) + 1].
struct ProfileProblem {
  const std::vector<double>& w;  // sorted ascending
  double mean_w;
  double xi_min, xi_max;

  double xi_of(double theta) const {
    if (theta == 0.0) return 0.0;
    double s = 0.0;
    for (double x : w) s += std::log1p(theta * x);
    return s / static_cast<double>(w.size());
  }

  double sigma_of(double theta, double xi) const {
    return theta == 0.0 ? mean_w : xi / theta;
  }

  double value(double theta) const {
    const double n = static_cast<double>(w.size());
    if (theta == 0.0) return -n * (std::log(mean_w) + 1.0);
    if (theta * w.back() <= -1.0) return -kInf;
    const double xi = xi_of(theta);
    if (xi <= xi_min || xi > xi_max) return -kInf;
    const double sigma = sigma_of(theta, xi);
    if (!(sigma > 0.0)) return -kInf;
    return -n * (std::log(sigma) + xi + 1.0);
  }

  // Smallest theta with xi(theta) still above xi_min (theta < 0 side) or
  // largest with xi(theta) <= xi_max (theta > 0 side), by bisection on the
  // monotone map theta -> xi(theta).
  double solve_xi(double target, double lo, double hi) const {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (xi_of(mid) < target) lo = mid;
      else hi = mid;
      if (hi - lo <= 1e-14 * std::max(std::abs(lo), std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
  }
};

// Golden-section maximization; the bracket comes from a dense scan, so
// local unimodality is a safe assumption.
double golden_max(const ProfileProblem& prob, double a, double b, int* evals) {
  constexpr double kGolden = 0.6180339887498949;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = prob.value(x1), f2 = prob.value(x2);
  *evals += 2;
  for (int i = 0; i < 200 && (b - a) > 1e-13 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
       ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = prob.value(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = prob.value(x1);
    }
    ++*evals;
  }
  return f1 > f2 ? x1 : x2;
}

// Hosking-Wallis probability-weighted-moment starting values; returns
// theta = xi/sigma or nothing when the moments are inconsistent.
std::optional<double> pwm_theta(const std::vector<double>& sorted_w) {
  const double n = static_cast<double>(sorted_w.size());
  double b0 = 0.0, b1 = 0.0;
  for (std::size_t i = 0; i < sorted_w.size(); ++i) {
    b0 += sorted_w[i];
    b1 += sorted_w[i] * static_cast<double>(i) / (n - 1.0);
  }
  b0 /= n;
  b1 /= n;
  const double denom = b0 - 2.0 * b1;
  if (denom == 0.0) return std::nullopt;
  const double xi = 2.0 - b0 / denom;
  const double sigma = 2.0 * b0 * b1 / denom;
  if (!(sigma > 0.0) || !std::isfinite(xi)) return std::nullopt;
  return xi / sigma;
}

struct Hessian2 {
  double dxx, dxs, dss;
};

std::optional<Hessian2> observed_information(std::span<const double> w, double xi, double sigma) {
  const double h_xi = std::max(1e-5 * std::abs(xi), 1e-8);
  const double h_sg = std::max(1e-5 * sigma, 1e-8);
  auto l = [&](double x, double s) { return gpd_loglik(w, x, s); };
  const double l0 = l(xi, sigma);
  const double lxp = l(xi + h_xi, sigma), lxm = l(xi - h_xi, sigma);
  const double lsp = l(xi, sigma + h_sg), lsm = l(xi, sigma - h_sg);
  const double lpp = l(xi + h_xi, sigma + h_sg), lpm = l(xi + h_xi, sigma - h_sg);
  const double lmp = l(xi - h_xi, sigma + h_sg), lmm = l(xi - h_xi, sigma - h_sg);
  for (double v : {l0, lxp, lxm, lsp, lsm, lpp, lpm, lmp, lmm})
    if (!std::isfinite(v)) return std::nullopt;
  Hessian2 hess;
  hess.dxx = (lxp - 2.0 * l0 + lxm) / (h_xi * h_xi);
  hess.dss = (lsp - 2.0 * l0 + lsm) / (h_sg * h_sg);
  hess.dxs = (lpp - lpm - lmp + lmm) / (4.0 * h_xi * h_sg);
  return hess;
}

}  // namespace

GpdFit fit_mle(std::vector<double> excesses, const FitOptions& options, double threshold) {
  const std::size_t n = excesses.size();
  if (n < options.min_exceedances)
    throw std::invalid_argument("fit_mle: " + std::to_string(n) + " excesses, need at least " +
                                std::to_string(options.min_exceedances));
  std::sort(excesses.begin(), excesses.end());
  if (excesses.front() < 0.0) throw std::invalid_argument("fit_mle: negative excess");
  if (!(excesses.back() > excesses.front()))
    throw std::invalid_argument("fit_mle: degenerate likelihood (constant excesses)");

  ProfileProblem prob{excesses, stats::mean(excesses), options.xi_min, options.xi_max};
  const double wmax = excesses.back();

  // Assemble candidate thetas: the exponential limit, the PWM seed and a
  // bracketing scan of both signs within the xi box.
  std::vector<double> candidates;
  candidates.push_back(0.0);

  const double theta_pos_lo = 1e-10 / prob.mean_w;
  double theta_pos_hi = 1.0 / prob.mean_w;
  while (prob.xi_of(theta_pos_hi) < options.xi_max && theta_pos_hi < 1e280 / wmax)
    theta_pos_hi *= 4.0;
  theta_pos_hi = prob.solve_xi(options.xi_max, theta_pos_hi / 4.0, theta_pos_hi);
  const int kPosGrid = 49;
  for (int i = 0; i < kPosGrid; ++i) {
    const double t = static_cast<double>(i) / (kPosGrid - 1);
    candidates.push_back(theta_pos_lo * std::pow(theta_pos_hi / theta_pos_lo, t));
  }

  if (options.xi_min < 0.0) {
    const double theta_neg_edge = -(1.0 - 1e-12) / wmax;
    double theta_neg_lo = theta_neg_edge;
    if (prob.xi_of(theta_neg_lo) < options.xi_min)
      theta_neg_lo = prob.solve_xi(options.xi_min, theta_neg_edge, 0.0);
    const int kNegGrid = 25;
    for (int i = 1; i <= kNegGrid; ++i)
      candidates.push_back(theta_neg_lo * static_cast<double>(i) / kNegGrid);
  }

  if (auto pwm = pwm_theta(excesses)) {
    if (*pwm > -1.0 / wmax) candidates.push_back(*pwm);
  }

  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  int evals = 0;
  std::size_t best_idx = 0;
  double best_value = -kInf;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double v = prob.value(candidates[i]);
    ++evals;
    if (v > best_value) {
      best_value = v;
      best_idx = i;
    }
  }

  std::ostringstream trace;
  trace << "candidates=" << candidates.size() << " best_theta=" << candidates[best_idx]
        << " best_profile=" << best_value;

  auto make_fit = [&](double theta) {
    GpdFit fit;
    const double xi = theta == 0.0 ? 0.0 : prob.xi_of(theta);
    fit.params.xi = xi;
    fit.params.sigma = prob.sigma_of(theta, xi);
    fit.params.threshold = threshold;
    fit.params.n_exceed = n;
    fit.log_likelihood = gpd_loglik(excesses, fit.params.xi, fit.params.sigma);
    return fit;
  };

  if (!std::isfinite(best_value)) {
    throw FitError("fit_mle: profile likelihood is degenerate everywhere", make_fit(0.0),
                   trace.str());
  }

  const double lo = best_idx > 0 ? candidates[best_idx - 1] : candidates[best_idx];
  const double hi = best_idx + 1 < candidates.size() ? candidates[best_idx + 1]
                                                     : candidates[best_idx];
  const double theta_hat = golden_max(prob, lo, hi, &evals);
  const double refined = prob.value(theta_hat);
  const double final_theta = refined >= best_value ? theta_hat : candidates[best_idx];

  GpdFit fit = make_fit(final_theta);
  fit.convergence.profile_evaluations = evals;
  if (!std::isfinite(fit.log_likelihood)) {
    throw FitError("fit_mle: log-likelihood not finite at the optimum", fit, trace.str());
  }
  fit.convergence.converged = true;
  const double xi_hat = fit.params.xi;
  if (xi_hat >= options.xi_max - 1e-7) {
    fit.convergence.at_boundary = true;
    fit.convergence.message = "xi at upper box bound";
  } else if (options.xi_min < 0.0 && xi_hat <= options.xi_min + 1e-7) {
    fit.convergence.at_boundary = true;
    fit.convergence.message = "xi at lower box bound";
  }

  if (xi_hat > -0.5) {
    if (auto hess = observed_information(excesses, xi_hat, fit.params.sigma)) {
      const double det = hess->dxx * hess->dss - hess->dxs * hess->dxs;
      // Negative definite Hessian <=> positive definite information.
      if (det > 0.0 && hess->dxx < 0.0) {
        fit.se_xi = std::sqrt(-hess->dss / det);
        fit.se_sigma = std::sqrt(-hess->dxx / det);
      } else if (fit.convergence.message.empty()) {
        fit.convergence.message = "information matrix not positive definite";
      }
    }
  } else if (fit.convergence.message.empty()) {
    fit.convergence.message = "standard errors withheld: xi <= -0.5";
  }
  return fit;
}

PickandsCurve pickands_curve(std::vector<double> sample) {
  if (sample.size() < 4) throw std::invalid_argument("pickands_curve: need n >= 4");
  std::sort(sample.begin(), sample.end(), std::greater<>());
  PickandsCurve curve;
  const std::size_t kmax = sample.size() / 4;
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double num = sample[k - 1] - sample[2 * k - 1];
    const double den = sample[2 * k - 1] - sample[4 * k - 1];
    if (!(num > 0.0) || !(den > 0.0)) {
      curve.omitted_k.push_back(k);
      continue;
    }
    curve.points.push_back({k, std::log(num / den) / std::log(2.0)});
  }
  if (curve.points.empty())
    throw std::runtime_error("pickands_curve: no defined points (too many tied spacings)");

  const std::size_t m = curve.points.size();
  std::size_t lo = m / 3;
  std::size_t hi = std::max(lo + 1, 2 * m / 3);
  hi = std::min(hi, m);
  std::vector<double> middle;
  for (std::size_t i = lo; i < hi; ++i) middle.push_back(curve.points[i].xi);
  curve.stable_estimate = stats::median(std::move(middle));
  return curve;
}

TailStabilityScan tail_stability_scan(std::span<const double> sample,
                                      std::span<const double> thresholds,
                                      const FitOptions& options) {
  TailStabilityScan scan;
  for (double u : thresholds) {
    std::vector<double> w;
    for (double x : sample)
      if (x >= u) w.push_back(x - u);
    ThresholdFit tf;
    tf.threshold = u;
    try {
      tf.fit = fit_mle(std::move(w), options, u);
    } catch (const std::exception& e) {
      tf.error = e.what();
    }
    scan.fits.push_back(std::move(tf));
  }
  for (std::size_t i = 0; i < scan.fits.size(); ++i) {
    for (std::size_t j = i + 1; j < scan.fits.size(); ++j) {
      const auto& a = scan.fits[i].fit;
      const auto& b = scan.fits[j].fit;
      if (!a || !b || !a->se_xi || !b->se_xi) continue;
      const double diff = std::abs(a->params.xi - b->params.xi);
      const double tol = 2.0 * std::hypot(*a->se_xi, *b->se_xi);
      if (diff > tol) scan.flags.push_back({i, j, diff, tol});
    }
  }
  return scan;
}

std::vector<double> gpd_residuals(std::span<const double> excesses, const GpdFit& fit) {
  if (!fit.convergence.converged)
    throw std::invalid_argument("gpd_residuals: fit did not converge");
  const double xi = fit.params.xi;
  const double sigma = fit.params.sigma;
  std::vector<double> r;
  r.reserve(excesses.size());
  for (double w : excesses) {
    if (std::abs(xi) < kXiZeroBranch) r.push_back(w / sigma);
    else r.push_back(std::log1p(xi * w / sigma) / xi);
  }
  return r;
}

namespace {

double anderson_darling_uniform(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const std::size_t n = u.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = std::clamp(u[i], 1e-15, 1.0 - 1e-15);
    const double un = std::clamp(u[n - 1 - i], 1e-15, 1.0 - 1e-15);
    sum += (2.0 * static_cast<double>(i) + 1.0) * (std::log(ui) + std::log1p(-un));
  }
  const double dn = static_cast<double>(n);
  return -dn - sum / dn;
}

}  // namespace

GofResult goodness_of_fit(std::span<const double> excesses, const GpdFit& fit,
                          std::size_t n_boot, std::uint64_t seed,
                          const FitOptions& options) {
  if (!fit.convergence.converged)
    throw std::invalid_argument("goodness_of_fit: fit did not converge");
  if (n_boot < 999) throw std::invalid_argument("goodness_of_fit: n_boot must be >= 999");

  const std::size_t n = excesses.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = gpd_cdf(excesses[i], fit.params);
  GofResult result;
  result.statistic = anderson_darling_uniform(u);
  result.n_boot = n_boot;

  FitOptions boot_options = options;
  boot_options.min_exceedances = std::min<std::size_t>(options.min_exceedances, n);

  std::size_t count_ge = 0;
  std::size_t valid = 0;
  for (std::size_t b = 0; b < n_boot; ++b) {
    Rng rng = Rng::derived(seed, b);
    std::vector<double> sim(n);
    for (double& w : sim) w = gpd_quantile(rng.uniform01(), fit.params);
    try {
      const GpdFit refit = fit_mle(sim, boot_options, fit.params.threshold);
      std::vector<double> ub(n);
      for (std::size_t i = 0; i < n; ++i) ub[i] = gpd_cdf(sim[i], refit.params);
      const double stat = anderson_darling_uniform(std::move(ub));
      ++valid;
      if (stat >= result.statistic) ++count_ge;
    } catch (const std::exception&) {
      ++result.replicate_failures;
    }
  }
  result.p_value = (1.0 + static_cast<double>(count_ge)) / (static_cast<double>(valid) + 1.0);
  return result;
}

}  // namespace tailrisk
