#include "tailrisk/shadow.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tailrisk/quadrature.hpp"
#include "tailrisk/special.hpp"
#include "tailrisk/stats.hpp"

namespace tailrisk {
namespace {

constexpr double kQuadTol = 1e-9;

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// y as a function of u in (0, 1], where u is the survival level of the
/// dual excess: u = (1 + t/(alpha k))^{-alpha} with t = -log((H-y)/(H-L)).
/// Inverting,
///   y(u) = H - (H-L) exp(-alpha k (u^{-1/alpha} - 1)).
/// The pushforward of du is exactly the shadow density measure, so
/// E[(Y - c)^p] = int_0^1 (y(u) - c)^p du with a bounded, smooth integrand:
/// the endpoint singularity of the density at H is absorbed analytically.
double y_of_survival(double u, const ShadowParams& p) {
  const double L = p.bounds.lower, H = p.bounds.upper;
  const double v = std::exp(-std::log(u) / p.alpha);  // u^{-1/alpha} >= 1
  return H - (H - L) * std::exp(-p.alpha * p.k * (v - 1.0));
}

double moment_by_quadrature(const ShadowParams& p, int order, double center) {
  auto integrand = [&](double u) {
    const double d = y_of_survival(u, p) - center;
    double acc = 1.0;
    for (int i = 0; i < order; ++i) acc *= d;
    return acc;
  };
  const quad::Result r = quad::integrate(integrand, 0.0, 1.0, kQuadTol, kQuadTol);
  if (!r.converged)
    throw std::runtime_error("shadow moment quadrature did not converge; achieved error " +
                             format_number(r.error_estimate) + " after " +
                             std::to_string(r.evaluations) + " evaluations");
  return r.value;
}

}  // namespace

ShadowParams ShadowParams::from_fit(const GpdFit& fit, const DualBounds& bounds) {
  bounds.validate();
  if (!(fit.params.xi > 0.0))
    throw std::invalid_argument("ShadowParams: shadow moments need xi > 0 (Frechet-class dual)");
  ShadowParams p;
  p.alpha = 1.0 / fit.params.xi;
  p.k = fit.params.sigma / bounds.upper;
  p.bounds = bounds;
  p.validate();
  return p;
}

void ShadowParams::validate() const {
  bounds.validate();
  if (!(alpha > 0.0) || !(k > 0.0))
    throw std::invalid_argument("ShadowParams: alpha and k must be positive");
}

double real_tail_density(double y, const ShadowParams& params) {
  params.validate();
  const double L = params.bounds.lower, H = params.bounds.upper;
  if (y < L || y >= H) throw std::domain_error("real_tail_density: y outside [L, H)");
  const double log_ratio = std::log((H - y) / (H - L));  // <= 0
  const double base = 1.0 - log_ratio / (params.alpha * params.k);
  return std::exp(-(params.alpha + 1.0) * std::log(base)) / ((H - y) * params.k);
}

double density_normalization(const ShadowParams& params) {
  params.validate();
  const double L = params.bounds.lower, H = params.bounds.upper;
  const double ak = params.alpha * params.k;
  // Integrate through the implemented density in t = -log((H-y)/(H-L))
  // coordinates while H - y is still representable, and add the exact tail
  // mass (1 + T/(alpha k))^{-alpha} beyond that.
  const double T = std::max(std::log((H - L) / (H * 1e-12)), 1.0);
  auto integrand = [&](double t) {
    const double y = H - (H - L) * std::exp(-t);
    return real_tail_density(y, params) * (H - L) * std::exp(-t);
  };
  const quad::Result r = quad::integrate(integrand, 0.0, T, kQuadTol, kQuadTol);
  if (!r.converged)
    throw std::runtime_error("density normalization quadrature did not converge");
  const double tail = std::exp(-params.alpha * std::log1p(T / ak));
  return r.value + tail;
}

bool shadow_mean_uses_closed_form(const ShadowParams& params) {
  return params.alpha < 1.0 && params.alpha * params.k < 700.0;
}

double shadow_mean(const ShadowParams& params) {
  params.validate();
  if (!shadow_mean_uses_closed_form(params)) return shadow_mean_quadrature(params);
  const double L = params.bounds.lower, H = params.bounds.upper;
  const double ak = params.alpha * params.k;
  const double scale =
      std::exp(ak + params.alpha * std::log(ak)) * special::incomplete_gamma_upper(1.0 - params.alpha, ak);
  return L + (H - L) * scale;
}

double shadow_mean_quadrature(const ShadowParams& params) {
  params.validate();
  return moment_by_quadrature(params, 1, 0.0);
}

double shadow_moment(const ShadowParams& params, int p, std::optional<double> center) {
  params.validate();
  if (p < 1 || p > 4) throw std::invalid_argument("shadow_moment: p must be in 1..4");
  return moment_by_quadrature(params, p, center.value_or(0.0));
}

double shadow_sd(const ShadowParams& params) {
  const double m = shadow_mean_quadrature(params);
  return std::sqrt(shadow_moment(params, 2, m));
}

double sample_conditional_mean(std::span<const double> values, double L) {
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (v >= L) {
      sum += v;
      ++count;
    }
  }
  if (count == 0)
    throw std::invalid_argument("sample_conditional_mean: no observations at or above L");
  return sum / static_cast<double>(count);
}

std::vector<ShadowMomentReport> shadow_report(const std::vector<ConflictRecord>& records,
                                              const ViewSpec& base_spec,
                                              std::span<const double> thresholds,
                                              int max_order,
                                              const FitOptions& fit_options) {
  if (max_order < 1 || max_order > 2)
    throw std::invalid_argument("shadow_report: max_order must be 1 or 2");
  std::vector<ShadowMomentReport> rows;
  const double H = base_spec.bounds ? base_spec.bounds->upper : base_spec.reference_population;

  for (double L : thresholds) {
    ViewSpec dual_spec = base_spec;
    dual_spec.view = View::dual;
    dual_spec.threshold = L;
    dual_spec.bounds = DualBounds{L, H};
    const ObservationSet dual_obs = build_observation_set(records, dual_spec);

    std::vector<double> excesses;
    excesses.reserve(dual_obs.size());
    for (double z : dual_obs.values) excesses.push_back(z - L);
    const GpdFit fit = fit_mle(std::move(excesses), fit_options, L);
    const ShadowParams params = ShadowParams::from_fit(fit, *dual_spec.bounds);

    ViewSpec rescaled_spec = base_spec;
    rescaled_spec.view = View::rescaled;
    rescaled_spec.threshold = L;
    rescaled_spec.bounds.reset();
    const ObservationSet rescaled_obs = build_observation_set(records, rescaled_spec);

    ShadowMomentReport mean_row;
    mean_row.threshold = L;
    mean_row.order = 1;
    mean_row.shadow_value = shadow_mean(params);
    mean_row.sample_value = sample_conditional_mean(rescaled_obs.values, L);
    mean_row.ratio = mean_row.shadow_value / mean_row.sample_value;
    mean_row.xi = fit.params.xi;
    mean_row.sigma = fit.params.sigma;
    mean_row.n_exceed = fit.params.n_exceed;
    mean_row.method = shadow_mean_uses_closed_form(params) ? "closed-form" : "quadrature";
    rows.push_back(mean_row);

    if (max_order >= 2) {
      ShadowMomentReport sd_row = mean_row;
      sd_row.order = 2;
      sd_row.shadow_value = shadow_sd(params);
      sd_row.sample_value = stats::stddev(rescaled_obs.values);
      sd_row.ratio = sd_row.shadow_value / sd_row.sample_value;
      sd_row.method = "quadrature";
      rows.push_back(sd_row);
    }
  }
  return rows;
}

}  // namespace tailrisk
