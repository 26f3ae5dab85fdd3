#pragma once

#include <cmath>
#include <string>

#include "error.hpp"

namespace mpgreedy {

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Bisection down to `bracket_width`, then Newton polish until
/// |f(x)| <= tolerance. Newton steps that leave the bracket fall back to
/// bisection, so the returned root always lies in [lo, hi].
template <class Fn, class Deriv>
RootResult bisect_newton(Fn&& f, Deriv&& df, double lo, double hi, double tolerance = 1e-12,
                         double bracket_width = 1e-8, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0)) {
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    throw numeric_error("no root: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  int it = 0;
  while (hi - lo > bracket_width && it < max_iter) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0, it};
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    ++it;
  }
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  while (std::abs(fx) > tolerance && it < max_iter) {
    double d = df(x);
    double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double fn = f(next);
    if ((fn > 0) == (flo > 0)) {
      lo = next;
      flo = fn;
    } else {
      hi = next;
    }
    if (next == x) break;
    x = next;
    fx = fn;
    ++it;
  }
  return {x, fx, it};
}

}  // namespace mpgreedy
