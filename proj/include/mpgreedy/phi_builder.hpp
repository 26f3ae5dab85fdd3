#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"
#include "grid_function.hpp"
#include "quadrature.hpp"

namespace mpgreedy {

/// Unnormalized bump exp(-1/(1-u^2)) on (-1, 1).
inline double bump(double u) {
  double d = 1.0 - u * u;
  return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

/// Mass of the unnormalized bump.
inline double bump_mass() {
  static const double mass = quad::gauss_composite(bump, -1.0, 1.0, 64);
  return mass;
}

/// Normalized mollifier nu_t(y) = t^-1 nu(y/t) with unit mass.
inline double mollifier(double y, double t) { return bump(y / t) / (bump_mass() * t); }

/// phi_bar_t(x) = int f(x - y) nu_t(y) dy on [0, 1], with f extended by 0
/// below its grid and by f(hi) above. Quadrature is split at the jump and the
/// kink of the extension.
inline GridFunction mollify(const GridFunction& f, double t, std::size_t m = 2001) {
  double tau = f.lo();
  if (!(t > 0.0)) throw usage_error("mollify: t must be positive");
  if (!(t < tau)) throw usage_error("mollify: t must be smaller than tau");
  GridFunction fe = f.with_extension(Extension::zero_below_const_above);
  double z = bump_mass();
  auto value_at = [&](double x) {
    // substitution z = x - t u; breakpoints where the extension switches
    std::vector<double> cuts = {-1.0, 1.0};
    for (double edge : {fe.lo(), fe.hi()}) {
      double u = (x - edge) / t;
      if (u > -1.0 && u < 1.0) cuts.push_back(u);
    }
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double u) { return fe(x - t * u) * bump(u); };
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      int panels = std::max(1, static_cast<int>(std::ceil(32.0 * (cuts[i + 1] - cuts[i]))));
      s += quad::gauss_composite(integrand, cuts[i], cuts[i + 1], panels);
    }
    return s / z;
  };
  return GridFunction::sample(0.0, 1.0, m, value_at);
}

struct Normalization {
  double C_t = 1.0;
  GridFunction phi;
  double B = 0.0;  // int phi_bar
  double C = 0.0;  // int phi_bar(x) int_x^1 phi_bar(z) dz/z dx
};

/// int g (1 + int_x^1 g dz/z) dx for g on [lo, 1], lo >= 0.
inline double weighted_mass(const GridFunction& g) {
  LogTailTable tail(g);
  std::vector<double> y(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) y[i] = g.value(i) * (1.0 + tail(g.node(i)));
  return quad::simpson_samples(y, g.spacing());
}

/// Positive root of C x^2 + B x - A = 0, written to stay accurate as C -> 0.
inline double normalization_constant(double A, double B, double C) {
  return 2.0 * A / (B + std::sqrt(B * B + 4.0 * A * C));
}

/// Scales phi_bar by the positive root C_t of C x^2 + B x - beta/(1-2beta) = 0.
inline Normalization normalize(const GridFunction& phi_bar, double beta) {
  Normalization out;
  LogTailTable tail(phi_bar);
  std::vector<double> y(phi_bar.size());
  for (std::size_t i = 0; i < phi_bar.size(); ++i) y[i] = phi_bar.value(i) * tail(phi_bar.node(i));
  out.B = integrate(phi_bar);
  out.C = quad::simpson_samples(y, phi_bar.spacing());
  if (out.B == 0.0 && out.C == 0.0) throw numeric_error("degenerate profile");
  double A = beta / (1.0 - 2.0 * beta);
  out.C_t = normalization_constant(A, out.B, out.C);
  std::vector<double> v(phi_bar.values().begin(), phi_bar.values().end());
  for (double& x : v) x *= out.C_t;
  out.phi = GridFunction(phi_bar.lo(), phi_bar.hi(), std::move(v), phi_bar.extension());
  double residual = std::abs(weighted_mass(out.phi) - A);
  if (residual > 1e-8) throw numeric_error("normalize: mass condition residual " + std::to_string(residual));
  return out;
}

enum class ConditionMode { phi_form, f_form };

struct ConditionEntry {
  std::string name;
  double sup_value = 0.0;
  double argmax = 0.0;
  double threshold = 1.0;
  bool pass = false;
};

struct ConditionReport {
  ConditionMode mode = ConditionMode::phi_form;
  std::vector<ConditionEntry> entries;
  double equality_value = 0.0;     // int fn (1 + int_x^1 fn dz/z) dx
  double equality_residual = 0.0;  // |equality_value - beta/(1-2 beta)|

  bool all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const ConditionEntry& e) { return e.pass; });
  }
  const ConditionEntry& entry(const std::string& name) const {
    for (const auto& e : entries) {
      if (e.name == name) return e;
    }
    throw usage_error("no condition named " + name);
  }
};

/// The two a-dependent expressions whose absolute values must stay below 1,
/// for either a smooth profile phi on [0,1] or a solution f on [tau,1] (zero
/// below tau). The f form carries the boundary term from the jump at tau.
class ConditionEvaluator {
 public:
  ConditionEvaluator(const GridFunction& fn, double beta, double tau, ConditionMode mode)
      : fn_(fn), L_(fn), beta_(beta), tau_(tau), f_form_(mode == ConditionMode::f_form), start_(fn.lo()) {
    // skip the region where fn vanishes identically
    for (std::size_t i = 0; i < fn.size(); ++i) {
      if (fn.value(i) != 0.0) {
        start_ = fn.node(i > 0 ? i - 1 : 0);
        break;
      }
    }
  }

  double derivative_form(double a) const {
    if (a <= 0.0) return 0.0;
    auto integrand = [&](double x) {
      return (fn_.derivative(x) * x - (beta_ - 1.0) * fn_(x)) * (1.0 + L_.clamped(x / a));
    };
    double lower = f_form_ ? tau_ : start_;
    double v = a > lower ? integrate_on_cells(fn_, integrand, lower, a) : 0.0;
    if (f_form_) v += fn_(tau_) * tau_ * (1.0 + L_.clamped(tau_ / a));
    return v;
  }

  double cross_form(double a) const {
    auto integrand = [&](double x) {
      return ((beta_ - 1.0) * (1.0 + L_.clamped(x)) + fn_(x)) * (L_.clamped(a * x) - L_.clamped(x));
    };
    return integrate_on_cells(fn_, integrand, f_form_ ? tau_ : start_, 1.0) + L_.clamped(a);
  }

 private:
  const GridFunction& fn_;
  LogTailTable L_;
  double beta_, tau_;
  bool f_form_;
  double start_;
};

/// Sups of both expressions over `a_points` uniform values of a plus the known
/// extremizers and a refined window of half-width `window` around tau, and the
/// mass equality.
inline ConditionReport check_conditions(const GridFunction& fn, double beta, double tau, ConditionMode mode,
                                        int a_points = 2000, double window = 0.02) {
  ConditionReport rep;
  rep.mode = mode;
  bool f_form = mode == ConditionMode::f_form;
  ConditionEvaluator ev(fn, beta, tau, mode);

  double a_lo = f_form ? tau : 0.0;
  std::vector<double> as;
  for (int i = 0; i < a_points; ++i) as.push_back(a_lo + (1.0 - a_lo) * i / (a_points - 1));
  double b_crit = tau * std::pow((1.0 - beta) / (1.0 - 2.0 * beta), 1.0 / beta);
  if (b_crit > a_lo && b_crit < 1.0) as.push_back(b_crit);
  as.push_back(tau);
  for (int i = 0; i <= 200; ++i) {
    double a = tau - window + 2.0 * window * i / 200.0;
    if (a >= a_lo && a <= 1.0) as.push_back(a);
  }
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());

  ConditionEntry e1{f_form ? "f_derivative_sup" : "phi_derivative_sup"};
  ConditionEntry e2{f_form ? "f_cross_sup" : "phi_cross_sup"};
  for (double a : as) {
    double v1 = std::abs(ev.derivative_form(a));
    double v2 = std::abs(ev.cross_form(a));
    if (v1 > e1.sup_value) {
      e1.sup_value = v1;
      e1.argmax = a;
    }
    if (v2 > e2.sup_value) {
      e2.sup_value = v2;
      e2.argmax = a;
    }
  }
  e1.pass = e1.sup_value < e1.threshold;
  e2.pass = e2.sup_value < e2.threshold;
  rep.entries = {e1, e2};
  rep.equality_value = weighted_mass(fn);
  rep.equality_residual = std::abs(rep.equality_value - beta / (1.0 - 2.0 * beta));
  return rep;
}

/// F(a) = int_tau^a f(x) (1 + int_{x/a}^1 f(z) dz/z) dx, assembled numerically.
inline double assembled_F(const GridFunction& f, double tau, double a) {
  LogTailTable L(f);
  auto integrand = [&](double x) { return f(x) * (1.0 + L.clamped(x / a)); };
  return integrate_on_cells(f, integrand, tau, a);
}

struct PhiProfile {
  GridFunction phi;
  double t = 0.0;
  double C_t = 1.0;
  double delta = 0.0;
  double beta = 0.0;
  double tau = 0.0;
  ConditionReport conditions;
  std::vector<std::pair<double, double>> attempts;  // (t, C_t) for each tried width
};

struct PhiOptions {
  double t = 0.01;
  double t_min = 1e-4;
  std::size_t grid = 2001;
  int a_points = 2000;
};

/// Mollifies and normalizes f, halving t until every phi condition holds.
inline PhiProfile build_phi(const GridFunction& f, double beta, const PhiOptions& opts = {}) {
  double tau = f.lo();
  PhiProfile prof;
  prof.beta = beta;
  prof.tau = tau;
  for (double t = opts.t; t >= opts.t_min; t *= 0.5) {
    if (t >= tau) continue;
    Normalization nz = normalize(mollify(f, t, opts.grid), beta);
    ConditionReport rep = check_conditions(nz.phi, beta, tau, ConditionMode::phi_form, opts.a_points, 2.0 * t);
    prof.attempts.emplace_back(t, nz.C_t);
    if (rep.all_pass() && rep.equality_residual <= 1e-8) {
      prof.phi = nz.phi;
      prof.t = t;
      prof.C_t = nz.C_t;
      prof.delta = tau - 2.0 * t;
      prof.conditions = rep;
      return prof;
    }
  }
  throw numeric_error("build_phi: no mollification width down to t_min satisfies the conditions");
}

}  // namespace mpgreedy
