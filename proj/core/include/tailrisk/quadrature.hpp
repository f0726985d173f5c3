#pragma once

#include <functional>

namespace tailrisk::quad {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod 7-15 integration of f over [a, b].
/// Refines the segment with the largest error estimate until the summed
/// error falls below max(abs_tol, rel_tol * |integral|) or the evaluation
/// budget is exhausted.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-9, double rel_tol = 1e-9,
                 int max_evaluations = 500000);

}  // namespace tailrisk::quad
