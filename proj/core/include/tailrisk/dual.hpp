#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tailrisk {

/// Support [L, H] of a bounded severity variable. L is the analysis floor,
/// H the hard upper bound (for casualty data, the world population).
struct DualBounds {
  double lower = 0.0;
  double upper = 0.0;

  void validate() const {
    if (!(lower > 0.0) || !(upper > lower))
      throw std::invalid_argument("DualBounds: need 0 < lower < upper");
  }
};

/// Maps the bounded variable onto [L, inf):
///   phi(y) = L - H * log((H - y) / (H - L)).
/// Strictly increasing, phi(L) = L, and phi(y) -> inf as y -> H. The log
/// argument is formed as a single quotient so no cancellation occurs as
/// y approaches H.
inline double phi(double y, const DualBounds& b) {
  b.validate();
  if (y < b.lower || y > b.upper)
    throw std::domain_error("phi: y outside [L, H]");
  if (y == b.upper)
    throw std::domain_error("phi: y = H maps to infinity");
  return b.lower - b.upper * std::log((b.upper - y) / (b.upper - b.lower));
}

/// Inverse map back onto [L, H): phi_inverse(z) = (L - H) e^{(L - z)/H} + H.
/// For very large z the expression rounds to H; the result is pinned one ulp
/// below so the codomain stays [L, H) in floating point as well.
inline double phi_inverse(double z, const DualBounds& b) {
  b.validate();
  if (z < b.lower) throw std::domain_error("phi_inverse: z below L");
  const double y = (b.lower - b.upper) * std::exp((b.lower - z) / b.upper) + b.upper;
  return std::min(y, std::nextafter(b.upper, b.lower));
}

}  // namespace tailrisk
