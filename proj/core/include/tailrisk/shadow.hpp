#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailrisk/corpus.hpp"
#include "tailrisk/dual.hpp"
#include "tailrisk/gpd.hpp"

namespace tailrisk {

/// Tail parameters of the bounded (real) distribution implied by a GPD fit
/// on the dual data: alpha = 1/xi, k = sigma/H.
struct ShadowParams {
  double alpha = 0.0;
  double k = 0.0;
  DualBounds bounds;

  static ShadowParams from_fit(const GpdFit& fit, const DualBounds& bounds);
  void validate() const;
};

/// Density of the bounded variable on [L, H) implied by the dual GPD:
///   f(y) = (1 - (log(H-y) - log(H-L)) / (alpha k))^(-alpha-1) / ((H-y) k).
/// Unbounded but integrable as y -> H.
double real_tail_density(double y, const ShadowParams& params);

/// Quadrature of the density over its support; equals 1 up to tolerance.
/// The mass within one double ulp of H is accumulated in closed form, the
/// rest numerically through the implemented density.
double density_normalization(const ShadowParams& params);

/// Conditional mean of the bounded variable above L. Uses the closed form
///   E[Y] = L + (H-L) e^{alpha k} (alpha k)^alpha Gamma(1-alpha, alpha k)
/// when alpha < 1 (the heavy-tail case); otherwise falls back to quadrature.
double shadow_mean(const ShadowParams& params);

/// Pure quadrature route for the mean, kept separate so the closed form can
/// be cross-checked against it.
double shadow_mean_quadrature(const ShadowParams& params);

/// Whether shadow_mean would use the closed form for these parameters.
bool shadow_mean_uses_closed_form(const ShadowParams& params);

/// p-th moment (about `center` when given) of the bounded variable by
/// adaptive quadrature after a change of variable that removes the endpoint
/// singularity. p in 1..4. Throws when the quadrature cannot reach its
/// 1e-9 tolerance, reporting the achieved error.
double shadow_moment(const ShadowParams& params, int p,
                     std::optional<double> center = std::nullopt);

/// sqrt of the centered second shadow moment.
double shadow_sd(const ShadowParams& params);

/// Mean of the observations at or above L (the empirical expected-shortfall
/// counterpart of the shadow mean).
double sample_conditional_mean(std::span<const double> values, double L);

struct ShadowMomentReport {
  double threshold = 0.0;
  int order = 1;  // 1 = mean, 2 = standard deviation
  double shadow_value = 0.0;
  double sample_value = 0.0;
  double ratio = 0.0;
  double xi = 0.0;
  double sigma = 0.0;
  std::size_t n_exceed = 0;
  std::string method;  // "closed-form" or "quadrature"
};

/// Table of shadow-vs-sample mean and standard deviation across a threshold
/// ladder. Every threshold L gets its own dual-view rebuild and GPD refit
/// with support [L, H].
std::vector<ShadowMomentReport> shadow_report(const std::vector<ConflictRecord>& records,
                                              const ViewSpec& base_spec,
                                              std::span<const double> thresholds,
                                              int max_order = 2,
                                              const FitOptions& fit_options = {});

}  // namespace tailrisk
