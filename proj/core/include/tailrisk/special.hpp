#pragma once

namespace tailrisk::special {

/// Upper incomplete gamma function Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt,
/// unregularized, for s > 0 and x >= 0.
double incomplete_gamma_upper(double s, double x);

/// Regularized upper tail Q(s, x) = Gamma(s, x) / Gamma(s).
double regularized_gamma_q(double s, double x);

/// Survival function of a chi-square distribution with dof degrees of freedom.
double chi_square_sf(double x, int dof);

}  // namespace tailrisk::special
