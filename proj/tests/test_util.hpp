#pragma once

// Test-side oracles, kept independent of the library's numeric paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testutil {

/// Adaptive Simpson integration, an oracle deliberately unrelated to the
/// library's Gauss-Kronrod code.
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double tol,
                           int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                                double tol = 1e-12, int max_depth = 60) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Upper incomplete gamma by direct quadrature of the defining integral;
/// the integrand decays like e^{-t}, so a finite cut at x + 60 + 10 s
/// truncates less than machine epsilon of the mass.
inline double incomplete_gamma_upper_oracle(double s, double x) {
  if (!(x > 0.0) || !(s > 0.0))
    throw std::invalid_argument("oracle domain: s > 0, x > 0 (x = 0 is the complete gamma)");
  const double hi = x + 60.0 + 10.0 * s;
  // Work with the integrand rescaled by e^{+x} so the tolerance can be tied
  // to its magnitude even when Gamma(s, x) itself is ~ e^{-x} tiny. For
  // s < 1 substitute u = t^s first, which removes the power singularity:
  //   int_x^hi t^{s-1} e^{-t} dt = (1/s) int_{x^s}^{hi^s} e^{-u^{1/s}} du.
  std::function<double(double)> g;
  double lo_u, hi_u, prefactor;
  if (s < 1.0) {
    lo_u = std::pow(x, s);
    hi_u = std::pow(hi, s);
    g = [s, x](double u) { return std::exp(x - std::exp(std::log(u) / s)); };
    prefactor = std::exp(-x) / s;
  } else {
    lo_u = x;
    hi_u = hi;
    g = [s, x](double t) { return std::exp((s - 1.0) * std::log(t) + x - t); };
    prefactor = std::exp(-x);
  }
  double peak = 0.0;
  for (int i = 0; i <= 256; ++i)
    peak = std::max(peak, g(lo_u + (hi_u - lo_u) * i / 256.0));
  const double tol = 1e-13 * peak * std::min(hi_u - lo_u, 30.0);
  return prefactor * integrate_simpson(g, lo_u, hi_u, tol);
}

/// Kolmogorov distance between a sample and a continuous CDF.
inline double kolmogorov_distance(std::vector<double> sample,
                                  const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
  }
  return d;
}

}  // namespace testutil
