#include "tailrisk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace tailrisk::quad {
namespace {

// QUADPACK dqk15 nodes and weights on [-1, 1]. Even-indexed abscissae carry
// the embedded 7-point Gauss rule.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double integral;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment evaluate(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[8];
  double kronrod = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kNodes[i];
    fv[i] = f(c - dx) + f(c + dx);
    kronrod += kKronrodW[i] * fv[i];
  }
  fv[7] = f(c);
  kronrod += kKronrodW[7] * fv[7];
  // The embedded 7-point Gauss rule uses the odd-indexed nodes plus the center.
  const double gauss =
      kGaussW[0] * fv[1] + kGaussW[1] * fv[3] + kGaussW[2] * fv[5] + kGaussW[3] * fv[7];
  kronrod *= h;
  const double err = std::abs(kronrod - gauss * h);
  return Segment{a, b, kronrod, err};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol, int max_evaluations) {
  Result res;
  if (a == b) {
    res.converged = true;
    return res;
  }

  std::priority_queue<Segment> active;
  Segment first = evaluate(f, a, b);
  res.evaluations = 15;
  double total = first.integral;
  double total_err = first.error;
  active.push(first);

  auto tolerance = [&]() { return std::max(abs_tol, rel_tol * std::abs(total)); };

  while (total_err > tolerance() && res.evaluations + 30 <= max_evaluations) {
    Segment worst = active.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // cannot subdivide further
    active.pop();
    Segment left = evaluate(f, worst.a, mid);
    Segment right = evaluate(f, mid, worst.b);
    res.evaluations += 30;
    total += left.integral + right.integral - worst.integral;
    total_err += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
  }

  res.value = total;
  res.error_estimate = total_err;
  res.converged = total_err <= tolerance();
  return res;
}

}  // namespace tailrisk::quad
