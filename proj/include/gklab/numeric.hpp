#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace gklab::numeric {

// Adaptive Simpson quadrature with absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-9, int max_depth = 48) {
  auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole,
          double eps, int depth) -> double {
    double m = 0.5 * (lo + hi);
    double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
    double flm = f(lm), frm = f(rm);
    double left = simpson(lo, m, flo, flm, fmid);
    double right = simpson(m, hi, fmid, frm, fhi);
    double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("adaptive_simpson: depth exhausted");
    if (std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return rec(lo, m, flo, flm, fmid, left, 0.5 * eps, depth - 1) +
           rec(m, hi, fmid, frm, fhi, right, 0.5 * eps, depth - 1);
  };
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = simpson(a, b, fa, fm, fb);
  return rec(a, b, fa, fm, fb, whole, tol, max_depth);
}

// Monotone root bracketing by bisection: finds x in [lo,hi] with f(x)=0.
// Assumes f(lo) and f(hi) straddle zero.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-12, int max_iter = 200) {
  double flo = f(lo);
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol) return mid;
    double fmid = f(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > tol) throw std::runtime_error("bisect: no convergence after max_iter");
  return 0.5 * (lo + hi);
}

// Golden-section maximization on [a,b]; returns {argmax, max}.
inline std::pair<double, double> golden_section_max(
    const std::function<double(double)>& f, double a, double b, double tol = 1e-8) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double mid = 0.5 * (a + b);
  return {mid, f(mid)};
}

}  // namespace gklab::numeric
