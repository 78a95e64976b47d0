#pragma once

#include <cmath>
#include <utility>

#include "pcx/errors.hpp"

namespace pcx {

/// Safeguarded Newton on a bracketed root: Newton steps are taken while they
/// stay inside the current bracket, otherwise the step falls back to
/// bisection. Requires f(lo) and f(hi) of opposite sign (or zero).
/// Converges to |hi - lo| <= xtol * max(1, |x|).
template <typename F, typename DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double xtol,
                     int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error("newton_bisect: root not bracketed");

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (fhi > 0.0)) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    if (hi - lo <= xtol * std::max(1.0, std::abs(x))) return 0.5 * (lo + hi);

    double d = df(x);
    double step = (d != 0.0) ? fx / d : 0.0;
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
  }
  return 0.5 * (lo + hi);
}

/// Plain bisection for functions without a cheap derivative.
template <typename F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw Error("bisect: root not bracketed");
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
    }
    if (hi - lo <= xtol * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pcx
