#include "tailrisk/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tailrisk::special {
namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEps = 1e-16;

// Lower incomplete gamma by power series:
//   gamma(s,x) = x^s e^{-x} sum_{n>=0} x^n / (s (s+1) ... (s+n)).
double lower_gamma_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return std::exp(s * std::log(x) - x) * sum;
}

// Upper incomplete gamma by the Legendre continued fraction (modified
// Lentz evaluation), reliable for x not too small relative to s.
double upper_gamma_cf(double s, double x) {
  const double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(s * std::log(x) - x) * h;
}

}  // namespace

double incomplete_gamma_upper(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("incomplete_gamma_upper: s must be > 0");
  if (x < 0.0) throw std::domain_error("incomplete_gamma_upper: x must be >= 0");
  if (x == 0.0) return std::tgamma(s);
  // The series route computes Gamma(s) - gamma(s,x); it cancels badly when
  // gamma(s,x) has nearly absorbed all the mass, which happens for tiny s
  // with x around 1. The continued fraction stays accurate there.
  if (x < s + 1.0 && (s >= 0.01 || x <= 0.5)) {
    return std::tgamma(s) - lower_gamma_series(s, x);
  }
  return upper_gamma_cf(s, x);
}

double regularized_gamma_q(double s, double x) {
  return incomplete_gamma_upper(s, x) / std::tgamma(s);
}

double chi_square_sf(double x, int dof) {
  if (dof < 1) throw std::domain_error("chi_square_sf: dof must be >= 1");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

}  // namespace tailrisk::special
