#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace mpgreedy {

/// Decay exponent of the pure greedy algorithm with shrinkage s.
struct RateConstants {
  double shrinkage = 1.0;
  double gamma = 0.0;
  double alpha = 0.0;  // gamma / (2 (2 + gamma))
  double beta = 0.0;   // 1/2 - alpha
  double residual = 0.0;
};

/// Left-hand side of the rate equation
///   (1+g)^(1/(2+g)) (1 + 1/(1+g)) - 1 - (2-s)/g.
inline double gamma_equation(double g, double s) {
  return std::pow(1.0 + g, 1.0 / (2.0 + g)) * (1.0 + 1.0 / (1.0 + g)) - 1.0 - (2.0 - s) / g;
}

inline double gamma_equation_derivative(double g, double s) {
  double u = 1.0 + g;
  double p = 1.0 / (2.0 + g);
  double a = std::pow(u, p);
  double da = a * (p / u - std::log(u) * p * p);
  double b = 1.0 + 1.0 / u;
  double db = -1.0 / (u * u);
  return da * b + a * db + (2.0 - s) / (g * g);
}

inline RateConstants solve_gamma(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw usage_error("shrinkage must lie in (0, 1]");
  auto f = [s](double g) { return gamma_equation(g, s); };
  auto df = [s](double g) { return gamma_equation_derivative(g, s); };
  RootResult rr = bisect_newton(f, df, 1.0 + 1e-12, 100.0);
  RateConstants rc;
  rc.shrinkage = s;
  rc.gamma = rr.root;
  rc.residual = rr.residual;
  rc.alpha = rc.gamma / (2.0 * (2.0 + rc.gamma));
  rc.beta = 0.5 - rc.alpha;
  return rc;
}

/// (beta/(1-beta))^beta (1-beta)^2/(1-2 beta); the construction needs this < 1.
inline double beta_condition_lhs(double beta) {
  return std::pow(beta / (1.0 - beta), beta) * ((1.0 - beta) * (1.0 - beta) / (1.0 - 2.0 * beta));
}

/// Critical beta: equality in beta_condition_lhs(beta) = 1 on (0, 1/2).
inline double solve_beta_star() {
  // Log form has the same root and is better conditioned for Newton.
  auto psi = [](double b) {
    return b * std::log(b / (1.0 - b)) + 2.0 * std::log(1.0 - b) - std::log(1.0 - 2.0 * b);
  };
  auto dpsi = [](double b) {
    return std::log(b / (1.0 - b)) + 1.0 + b / (1.0 - b) - 2.0 / (1.0 - b) + 2.0 / (1.0 - 2.0 * b);
  };
  RootResult rr = bisect_newton(psi, dpsi, 0.01, 0.49, 1e-14);
  if (std::abs(beta_condition_lhs(rr.root) - 1.0) > 1e-12) throw numeric_error("beta*: residual too large");
  return rr.root;
}

/// Largest tau allowed by c < 1: ((1-2b)/(1-b)^2)^(1/b).
inline double tau_star(double beta) {
  if (!(beta > 0.0 && beta < 0.5)) throw usage_error("tau_star: beta must lie in (0, 1/2)");
  return std::pow((1.0 - 2.0 * beta) / ((1.0 - beta) * (1.0 - beta)), 1.0 / beta);
}

struct Margin {
  std::string name;
  double lhs = 0.0;
  double bound = 0.0;
  bool upper = true;  // lhs < bound when true, lhs > bound otherwise
  bool satisfied() const { return upper ? lhs < bound : lhs > bound; }
};

/// Closed forms for the power-law choice of F on [tau, 1].
struct ClosedFormBundle {
  double beta = 0.0;
  double tau = 0.0;
  double c = 0.0;
  double rg = 0.0;             // R_G at the closed-form maximizer
  double rg_maximizer = 0.0;
  double rg_scan = 0.0;        // R_G by grid scan with numerical quadrature
  std::vector<Margin> margins;

  double F(double a) const { return c / beta * (std::pow(tau, -beta) * std::pow(a, beta) - 1.0); }
  double G(double a) const { return c * std::pow(tau, -beta) * std::pow(a, beta - 1.0); }
  double G_derivative(double a) const { return (beta - 1.0) * c * std::pow(tau, -beta) * std::pow(a, beta - 2.0); }

  bool all_satisfied() const {
    return std::all_of(margins.begin(), margins.end(), [](const Margin& m) { return m.satisfied(); }) && rg < 1.0;
  }
};

/// a^-2 int_tau^a G(x/a) dx in closed form.
inline double rg_integral(double beta, double tau, double c, double a) {
  return c * std::pow(a, -(beta + 1.0)) / beta * (std::pow(a / tau, beta) - 1.0);
}

inline ClosedFormBundle bundle(double beta, double tau, int scan_points = 10000) {
  if (!(beta > 0.0 && beta < 0.5)) throw usage_error("bundle: beta must lie in (0, 1/2)");
  if (!(tau > 0.0 && tau < 1.0)) throw usage_error("bundle: tau must lie in (0, 1)");
  ClosedFormBundle b;
  b.beta = beta;
  b.tau = tau;
  double tb = std::pow(tau, -beta);
  b.c = beta * beta / ((1.0 - 2.0 * beta) * (tb - 1.0));
  b.rg_maximizer = std::min(1.0, tau * std::pow(1.0 + beta, 1.0 / beta));
  b.rg = rg_integral(beta, tau, b.c, b.rg_maximizer);

  // Independent route: quadrature of a^-2 int_tau^a G(x/a) dx on a uniform a-grid.
  double best = 0.0;
  for (int i = 0; i < scan_points; ++i) {
    double a = tau + (1.0 - tau) * i / (scan_points - 1);
    if (a <= tau) continue;
    auto integrand = [&](double x) { return b.G(x / a); };
    double v = quad::gauss_composite(integrand, tau, a, 4) / (a * a);
    best = std::max(best, v);
  }
  b.rg_scan = best;

  double pre = beta / ((1.0 - 2.0 * beta) * (tb - 1.0));
  double cond2 = pre * (beta - 1.0 + tb * (1.0 - 2.0 * beta) / (1.0 - beta) -
                        beta / tau * std::pow((1.0 - 2.0 * beta) / (1.0 - beta), 1.0 / beta));
  double cond3 = pre * (beta - 1.0 + tb * (1.0 - 2.0 * beta) / (1.0 - beta) + beta * beta / (tau * (1.0 - beta)));
  b.margins = {
      {"c_below_one", b.c, 1.0, true},
      {"lower_sup_bound", cond2, -1.0, false},
      {"upper_sup_bound", cond3, 1.0, true},
      {"beta_one_minus_beta", beta * std::pow(1.0 - beta, 1.0 / beta), 1.0, true},
      {"beta_condition", beta_condition_lhs(beta), 1.0, true},
  };
  return b;
}

/// Strict-margin operating point derived from the critical pair.
struct OperatingPoint {
  double beta_margin = 0.002;  // beta = beta* - beta_margin
  double tau_margin = 0.02;    // tau = (1 - tau_margin) * tau*(beta)

  double beta() const { return solve_beta_star() - beta_margin; }
  double tau() const { return (1.0 - tau_margin) * tau_star(beta()); }
};

}  // namespace mpgreedy
