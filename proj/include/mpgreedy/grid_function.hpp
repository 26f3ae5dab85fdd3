#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "quadrature.hpp"

namespace mpgreedy {

/// How a grid function is continued outside [lo, hi].
enum class Extension {
  none,                   // evaluation outside is an error
  zero_outside,           // 0 on both sides
  zero_below_const_above  // 0 below lo, value(hi) above hi
};

/// Real function sampled on M equispaced nodes of [lo, hi] (M odd, >= 3),
/// evaluated by cubic Hermite interpolation with fourth-order finite-difference
/// node slopes.
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(double lo, double hi, std::vector<double> values, Extension ext = Extension::none)
      : lo_(lo), hi_(hi), values_(std::move(values)), ext_(ext) {
    if (values_.size() < 3 || values_.size() % 2 == 0) {
      throw usage_error("grid function needs an odd number of nodes >= 3, got " + std::to_string(values_.size()));
    }
    if (!(hi > lo)) throw usage_error("grid function needs lo < hi");
    h_ = (hi_ - lo_) / static_cast<double>(values_.size() - 1);
    compute_slopes();
  }

  template <class Fn>
  static GridFunction sample(double lo, double hi, std::size_t m, Fn&& fn, Extension ext = Extension::none) {
    if (m < 3 || m % 2 == 0) throw usage_error("grid function needs an odd number of nodes >= 3");
    std::vector<double> v(m);
    double h = (hi - lo) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) v[i] = fn(i + 1 == m ? hi : lo + h * static_cast<double>(i));
    return GridFunction(lo, hi, std::move(v), ext);
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double spacing() const { return h_; }
  std::size_t size() const { return values_.size(); }
  Extension extension() const { return ext_; }
  std::span<const double> values() const { return values_; }
  double value(std::size_t i) const { return values_[i]; }
  double node(std::size_t i) const { return i + 1 == values_.size() ? hi_ : lo_ + h_ * static_cast<double>(i); }
  std::span<const double> slopes() const { return slopes_; }

  GridFunction with_extension(Extension ext) const {
    GridFunction g = *this;
    g.ext_ = ext;
    return g;
  }

  bool contains(double x) const { return x >= lo_ && x <= hi_; }

  double operator()(double x) const {
    if (x < lo_ || x > hi_) return outside(x);
    auto [i, t] = locate(x);
    double y0 = values_[i], y1 = values_[i + 1];
    double m0 = slopes_[i] * h_, m1 = slopes_[i + 1] * h_;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
  }

  /// Derivative of the interpolant.
  double derivative(double x) const {
    if (x < lo_ || x > hi_) {
      (void)outside(x);
      return 0.0;
    }
    auto [i, t] = locate(x);
    double y0 = values_[i], y1 = values_[i + 1];
    double m0 = slopes_[i] * h_, m1 = slopes_[i + 1] * h_;
    double t2 = t * t;
    double d = (6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * m1;
    return d / h_;
  }

  double max_value() const { return *std::max_element(values_.begin(), values_.end()); }
  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }

 private:
  std::pair<std::size_t, double> locate(double x) const {
    double s = (x - lo_) / h_;
    auto last = values_.size() - 2;
    std::size_t i = s <= 0.0 ? 0 : std::min(static_cast<std::size_t>(s), last);
    return {i, s - static_cast<double>(i)};
  }

  double outside(double x) const {
    switch (ext_) {
      case Extension::none:
        throw usage_error("grid function evaluated at " + std::to_string(x) + " outside [" + std::to_string(lo_) +
                          ", " + std::to_string(hi_) + "]");
      case Extension::zero_outside: return 0.0;
      case Extension::zero_below_const_above: return x < lo_ ? 0.0 : values_.back();
    }
    return 0.0;
  }

  void compute_slopes() {
    std::size_t m = values_.size();
    const auto& y = values_;
    slopes_.assign(m, 0.0);
    if (m < 5) {
      slopes_[0] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * h_);
      slopes_[m - 1] = (3 * y[m - 1] - 4 * y[m - 2] + y[m - 3]) / (2 * h_);
      for (std::size_t i = 1; i + 1 < m; ++i) slopes_[i] = (y[i + 1] - y[i - 1]) / (2 * h_);
      return;
    }
    double d = 12 * h_;
    slopes_[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / d;
    slopes_[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / d;
    for (std::size_t i = 2; i + 2 < m; ++i) slopes_[i] = (y[i - 2] - 8 * y[i - 1] + 8 * y[i + 1] - y[i + 2]) / d;
    slopes_[m - 2] = (3 * y[m - 1] + 10 * y[m - 2] - 18 * y[m - 3] + 6 * y[m - 4] - y[m - 5]) / d;
    slopes_[m - 1] = (25 * y[m - 1] - 48 * y[m - 2] + 36 * y[m - 3] - 16 * y[m - 4] + 3 * y[m - 5]) / d;
  }

  double lo_ = 0.0;
  double hi_ = 1.0;
  double h_ = 1.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
  Extension ext_ = Extension::none;
};

/// Composite Simpson over the nodes of g.
inline double integrate(const GridFunction& g) { return quad::simpson_samples(g.values(), g.spacing()); }

/// Integral of fn over [a, b] using 4-point Gauss on the pieces of [a, b]
/// cut by the nodes of `grid`. Exact for products of two cubic pieces.
template <class Fn>
double integrate_on_cells(const GridFunction& grid, Fn&& fn, double a, double b) {
  if (b <= a) return 0.0;
  double h = grid.spacing();
  double lo = grid.lo();
  double s = 0.0;
  double left = a;
  while (left < b) {
    double cell = std::floor((left - lo) / h + 1e-12);
    double right = std::min(b, lo + (cell + 1.0) * h);
    if (right <= left) right = std::min(b, left + h);
    s += quad::gauss4(fn, left, right);
    left = right;
  }
  return s;
}

/// Precomputed x -> int_x^hi g(z) dz / z for g on [lo, hi] with lo >= 0.
class LogTailTable {
 public:
  LogTailTable() = default;

  explicit LogTailTable(const GridFunction& g) : g_(g) {
    if (g.lo() < 0.0) throw usage_error("log tail needs lo >= 0");
    std::size_t m = g.size();
    tail_.assign(m, 0.0);
    auto integrand = [this](double z) { return g_(z) / z; };
    for (std::size_t i = m - 1; i-- > 0;) tail_[i] = tail_[i + 1] + quad::gauss4(integrand, g.node(i), g.node(i + 1));
  }

  /// int_x^hi g(z)/z dz for x in [lo, hi].
  double operator()(double x) const {
    if (x < g_.lo() || x > g_.hi()) {
      throw usage_error("log_tail: x=" + std::to_string(x) + " outside [" + std::to_string(g_.lo()) + ", " +
                        std::to_string(g_.hi()) + "]");
    }
    return eval(x);
  }

  /// As operator(), but x below lo is treated as lo (g vanishes there) and x
  /// above hi gives 0.
  double clamped(double x) const {
    if (x <= g_.lo()) return tail_.front();
    if (x >= g_.hi()) return 0.0;
    return eval(x);
  }

  const GridFunction& function() const { return g_; }

 private:
  double eval(double x) const {
    double s = (x - g_.lo()) / g_.spacing();
    std::size_t i = std::min(static_cast<std::size_t>(std::max(0.0, s)), tail_.size() - 1);
    if (i + 1 >= tail_.size()) return 0.0;
    double right = g_.node(i + 1);
    if (x == g_.node(i)) return tail_[i];
    auto integrand = [this](double z) { return g_(z) / z; };
    return tail_[i + 1] + quad::gauss4(integrand, x, right);
  }

  GridFunction g_;
  std::vector<double> tail_;
};

inline double log_tail(const GridFunction& g, double x) { return LogTailTable(g)(x); }

/// a^-1 int_tau^a f(x) f(x/a) dx with f taken as 0 below tau.
inline double scaled_selfconv(const GridFunction& f, double a, double tau) {
  if (a <= tau) return 0.0;
  if (tau < f.lo() - 1e-14) throw usage_error("scaled_selfconv: tau below the grid");
  if (a > f.hi() + 1e-14) throw usage_error("scaled_selfconv: a above the grid");
  double inv_a = 1.0 / a;
  auto product = [&](double x) { return f(x) * f(std::min(x * inv_a, f.hi())); };
  double h = f.spacing();
  if (std::abs(tau - f.lo()) <= 1e-14 * std::max(1.0, std::abs(tau))) {
    // Node path: Simpson on nodes up to the last node <= a, Gauss on the rest.
    double sa = (a - f.lo()) / h;
    std::size_t last = std::min(static_cast<std::size_t>(std::floor(sa + 1e-9)), f.size() - 1);
    std::vector<double> y(last + 1);
    for (std::size_t i = 0; i <= last; ++i) {
      double x = f.node(i);
      y[i] = f.value(i) * f(std::min(x * inv_a, f.hi()));
    }
    double s = quad::simpson_samples(y, h);
    double xl = f.node(last);
    if (a > xl + 1e-15) s += quad::gauss4(product, xl, a);
    return s * inv_a;
  }
  return integrate_on_cells(f, product, tau, a) * inv_a;
}

}  // namespace mpgreedy
