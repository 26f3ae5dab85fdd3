#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"
#include "greedy.hpp"

namespace mpgreedy {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_min = 0, n_max = 0;
  int points = 0;
};

/// Least-squares fit of log(residual) against log(n) with n = step_index +
/// index_offset restricted to [n_min, n_max]. Steps whose residual is at or
/// below 1e-13 are skipped.
inline RateFit fit_decay(const GreedyTrace& trace, int n_min, int n_max, int index_offset = 0) {
  if (!(n_min >= 1 && n_max > n_min)) throw usage_error("fit_decay: need n_max > n_min >= 1");
  std::vector<double> xs, ys;
  for (const auto& s : trace.steps) {
    int n = s.step_index + index_offset;
    if (n < n_min || n > n_max || !(s.residual_norm > 1e-13)) continue;
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(s.residual_norm));
  }
  if (xs.size() < 10) {
    throw numeric_error("fit_decay: fewer than 10 usable points in [" + std::to_string(n_min) + ", " +
                        std::to_string(n_max) + "]");
  }
  double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw numeric_error("fit_decay: degenerate abscissae");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.n_min = n_min;
  fit.n_max = n_max;
  fit.points = static_cast<int>(xs.size());
  return fit;
}

struct BoundReport {
  double upper_witness = 0.0;  // sup_n r_n n^alpha / B
  double lower_witness = 0.0;  // inf_{n >= 10} r_n n^alpha / B
  int upper_at = 0, lower_at = 0;
};

/// Witnesses for r_n <= C B n^-alpha and r_n >= c B n^-alpha. A trace that
/// reached zero residual, or never got to n = 10, has lower witness 0.
inline BoundReport check_bounds(const GreedyTrace& trace, double alpha, double variation_bound, int index_offset = 0) {
  if (!(variation_bound > 0.0)) throw usage_error("check_bounds: variation_bound must be positive");
  BoundReport rep;
  double inf = std::numeric_limits<double>::infinity();
  for (const auto& s : trace.steps) {
    int n = s.step_index + index_offset;
    double w = s.residual_norm * std::pow(static_cast<double>(n), alpha) / variation_bound;
    if (w > rep.upper_witness) {
      rep.upper_witness = w;
      rep.upper_at = n;
    }
    if (n >= 10 && w < inf) {
      inf = w;
      rep.lower_at = n;
    }
  }
  bool exhausted = trace.steps.empty() || trace.steps.back().residual_norm < 1e-14;
  rep.lower_witness = (exhausted || !std::isfinite(inf)) ? 0.0 : inf;
  return rep;
}

struct CompareRow {
  Algorithm algorithm = Algorithm::pga;
  int steps = 0;
  double final_residual = 0.0;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
  GreedyTrace trace;
};

struct CompareOptions {
  int steps = 100;
  double shrinkage = 0.5;  // used for pga_shrink
  double variation_bound = 1.0;
  int fit_min = 1, fit_max = 0;  // fit_max = 0 means the last step
  int index_offset = 0;
};

/// Runs each algorithm on the same target and fits its decay. A trace too short
/// to fit leaves slope and r2 as NaN.
inline std::vector<CompareRow> compare(const CoeffVector& f, const Dictionary& dict, const std::vector<Algorithm>& algs,
                                       const CompareOptions& opts) {
  std::vector<CompareRow> rows;
  for (Algorithm a : algs) {
    RunOptions ro;
    ro.algorithm = a;
    ro.steps = opts.steps;
    ro.shrinkage = opts.shrinkage;
    ro.variation_bound = opts.variation_bound;
    CompareRow row;
    row.algorithm = a;
    row.trace = run(f, dict, ro);
    row.steps = static_cast<int>(row.trace.steps.size());
    row.final_residual = row.steps > 0 ? row.trace.steps.back().residual_norm : row.trace.initial_norm;
    int hi = opts.fit_max > 0 ? opts.fit_max : opts.steps + opts.index_offset;
    if (hi <= opts.fit_min) {
      rows.push_back(std::move(row));
      continue;
    }
    try {
      RateFit fit = fit_decay(row.trace, opts.fit_min, hi, opts.index_offset);
      row.slope = fit.slope;
      row.r2 = fit.r_squared;
    } catch (const numeric_error&) {
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mpgreedy
