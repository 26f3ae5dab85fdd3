#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"
#include "grid_function.hpp"

namespace mpgreedy {

/// Output of the bracketing iteration f_j = T~(f_{j-1}), f_0 = G.
struct IterationReport {
  std::vector<GridFunction> iterates;
  double bracket_width = 0.0;  // sup |f_even - f_odd| over the last pair
  GridFunction converged_f;
  double residual_sup = 0.0;
  double f3_min = 0.0;
  double rg = 0.0;
  int iterations = 0;
  bool upper_bracket_ok = false;  // G - S(g1) <= g2 with (g1, g2) = (f3, f2)
  bool lower_bracket_ok = false;  // G - S(g2) >= g1
  double derivative_max = 0.0;    // max |f'| of converged_f on the grid
  double derivative_bound = 0.0;  // K / (1 - R_G)
};

/// a -> G(a) - a^-1 int_tau^a f(x) f(x/a) dx on the nodes of G, optionally
/// clamped below at 0.
inline GridFunction apply_T(const GridFunction& G, const GridFunction& f, double tau, bool clamp) {
  std::vector<double> out(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) {
    double v = G.value(i) - scaled_selfconv(f, G.node(i), tau);
    out[i] = clamp ? std::max(0.0, v) : v;
  }
  return GridFunction(G.lo(), G.hi(), std::move(out), G.extension());
}

/// sup_a a^-2 int_tau^a G(x/a) dx over the nodes of G.
inline double rg_numeric(const GridFunction& G, double tau) {
  double best = 0.0;
  for (std::size_t i = 1; i < G.size(); ++i) {
    double a = G.node(i);
    if (a <= tau) continue;
    auto integrand = [&](double x) { return G(std::min(x / a, G.hi())); };
    double v = integrate_on_cells(G, integrand, tau, a) / (a * a);
    best = std::max(best, v);
  }
  return best;
}

/// sup over the nodes of |f(a) + a^-1 int f(x) f(x/a) dx - G(a)|.
inline double residual_sup(const GridFunction& G, const GridFunction& f, double tau) {
  double worst = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i) {
    double a = G.node(i);
    double r = f(a) + scaled_selfconv(f, a, tau) - G.value(i);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

namespace detail {

inline double sup_diff(const GridFunction& a, const GridFunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.value(i) - b.value(i)));
  return d;
}

// Pointwise lhs <= rhs + slack.
inline bool below(const GridFunction& lhs, const GridFunction& rhs, double slack) {
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs.value(i) > rhs.value(i) + slack) return false;
  }
  return true;
}

inline void check_monotone(const std::vector<GridFunction>& it, double slack) {
  for (std::size_t j = 2; j < it.size(); ++j) {
    bool ok = j % 2 == 0 ? below(it[j], it[j - 2], slack) : below(it[j - 2], it[j], slack);
    if (!ok || !below(it[j % 2 == 0 ? j - 1 : j], it[j % 2 == 0 ? j : j - 1], slack)) {
      throw numeric_error("grid too coarse: bracket monotonicity violated at iterate " + std::to_string(j));
    }
  }
}

inline void fill_bracket_checks(IterationReport& rep, const GridFunction& G, double tau) {
  const GridFunction& f2 = rep.iterates[2];
  const GridFunction& f3 = rep.iterates[3];
  rep.f3_min = f3.min_value();
  rep.upper_bracket_ok = below(apply_T(G, f3, tau, false), f2, 1e-12);
  rep.lower_bracket_ok = below(f3, apply_T(G, f2, tau, false), 1e-12);
}

}  // namespace detail

/// Iterates f_0 = G, f_j = max(0, T_G(f_{j-1})) for j <= k and checks the
/// interleaving f_0 >= f_2 >= ..., f_1 <= f_3 <= ..., f_odd <= f_even.
inline IterationReport bracket_sequence(const GridFunction& G, double tau, int k) {
  if (k < 4) throw usage_error("bracket_sequence: k must be >= 4");
  IterationReport rep;
  rep.iterates.push_back(G);
  for (int j = 1; j <= k; ++j) rep.iterates.push_back(apply_T(G, rep.iterates.back(), tau, true));
  detail::check_monotone(rep.iterates, 1e-9);
  detail::fill_bracket_checks(rep, G, tau);
  rep.iterations = k;
  rep.bracket_width = detail::sup_diff(rep.iterates[k], rep.iterates[k - 1]);
  return rep;
}

/// Solves f(a) + a^-1 int_tau^a f(x) f(x/a) dx = G(a) on the grid of G by the
/// clamped alternating iteration, stopping once sup |f_{j+2} - f_j| < tol.
inline IterationReport solve_f(const GridFunction& G, double tau, double tol = 1e-8, int max_iter = 500) {
  if (!(tol > 0.0)) throw usage_error("solve_f: tol must be positive");
  IterationReport rep;
  rep.rg = rg_numeric(G, tau);
  if (!(rep.rg < 1.0)) throw numeric_error("contraction hypothesis violated: R_G = " + std::to_string(rep.rg));

  rep.iterates.push_back(G);
  bool converged = false;
  for (int j = 1; j <= max_iter; ++j) {
    rep.iterates.push_back(apply_T(G, rep.iterates.back(), tau, true));
    if (j >= 2 && detail::sup_diff(rep.iterates[j], rep.iterates[j - 2]) < tol) {
      rep.iterations = j;
      converged = true;
      break;
    }
  }
  std::size_t last = rep.iterates.size() - 1;
  rep.bracket_width = detail::sup_diff(rep.iterates[last], rep.iterates[last - 1]);
  if (!converged) {
    throw numeric_error("solve_f: max_iter exceeded, bracket_width = " + std::to_string(rep.bracket_width));
  }
  detail::check_monotone(rep.iterates, 1e-9);
  if (rep.iterates.size() > 3) detail::fill_bracket_checks(rep, G, tau);

  std::vector<double> avg(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) avg[i] = 0.5 * (rep.iterates[last].value(i) + rep.iterates[last - 1].value(i));
  rep.converged_f = GridFunction(G.lo(), G.hi(), std::move(avg), G.extension());
  rep.residual_sup = residual_sup(G, rep.converged_f, tau);

  double gmax = 0.0, gprime = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i) {
    gmax = std::max(gmax, std::abs(G.value(i)));
    gprime = std::max(gprime, std::abs(G.slopes()[i]));
  }
  for (std::size_t i = 0; i < G.size(); ++i) {
    rep.derivative_max = std::max(rep.derivative_max, std::abs(rep.converged_f.slopes()[i]));
  }
  double K = gprime + gmax * gmax * (2.0 / tau + 3.0 / (tau * tau));
  rep.derivative_bound = K / (1.0 - rep.rg);
  return rep;
}

/// G(a) = c tau^-beta a^(beta-1) sampled on [tau, 1].
inline GridFunction power_law_G(double c, double beta, double tau, std::size_t m) {
  return GridFunction::sample(tau, 1.0, m, [&](double a) { return c * std::pow(tau, -beta) * std::pow(a, beta - 1.0); });
}

}  // namespace mpgreedy
