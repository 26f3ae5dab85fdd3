#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "linear_core.hpp"

namespace mpgreedy {

/// Finite symmetric dictionary. Only one representative of each +/- pair is
/// stored; selection considers both signs.
class Dictionary {
 public:
  Dictionary() = default;

  /// Atoms must be unit vectors (within 1e-9). Labels default to "d<i>".
  explicit Dictionary(std::vector<CoeffVector> atoms, std::vector<std::string> labels = {})
      : atoms_(std::move(atoms)), labels_(std::move(labels)) {
    if (labels_.empty()) {
      labels_.reserve(atoms_.size());
      for (std::size_t i = 0; i < atoms_.size(); ++i) labels_.push_back("d" + std::to_string(i));
    }
    if (labels_.size() != atoms_.size()) throw usage_error("dictionary: label count does not match atom count");
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      double nrm = norm(atoms_[i]);
      if (std::abs(nrm - 1.0) > 1e-9) {
        throw usage_error("dictionary: atom " + labels_[i] + " has norm " + std::to_string(nrm));
      }
    }
  }

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const CoeffVector& atom(std::size_t i) const { return atoms_[i]; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<CoeffVector>& atoms() const { return atoms_; }

  /// Largest active length among the atoms.
  std::size_t dimension() const {
    std::size_t d = 0;
    for (const auto& a : atoms_) d = std::max(d, a.active_len());
    return d;
  }

  /// The dictionary made of the negated representatives.
  Dictionary negated() const {
    std::vector<CoeffVector> neg;
    neg.reserve(atoms_.size());
    for (const auto& a : atoms_) neg.push_back(scaled(-1.0, a));
    return Dictionary(std::move(neg), labels_);
  }

 private:
  std::vector<CoeffVector> atoms_;
  std::vector<std::string> labels_;
};

struct Selection {
  std::size_t atom_id = 0;
  int sign = 1;
  double value = 0.0;  // max over +/- atoms of <residual, d>, always >= 0
};

/// Best signed atom for the residual. Ties go to the lowest index and to the
/// positive sign.
inline Selection select_atom(const CoeffVector& residual, const Dictionary& dict) {
  if (dict.empty()) throw usage_error("empty dictionary");
  Selection best;
  best.value = -1.0;
  for (std::size_t i = 0; i < dict.size(); ++i) {
    double ip = dot(residual, dict.atom(i));
    double v = std::abs(ip);
    if (v > best.value) {
      best.atom_id = i;
      best.sign = ip < 0.0 ? -1 : 1;
      best.value = v;
    }
  }
  return best;
}

enum class Algorithm { pga, pga_shrink, oga, rga };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::pga: return "pga";
    case Algorithm::pga_shrink: return "pga_shrink";
    case Algorithm::oga: return "oga";
    case Algorithm::rga: return "rga";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "pga") return Algorithm::pga;
  if (s == "pga_shrink") return Algorithm::pga_shrink;
  if (s == "oga") return Algorithm::oga;
  if (s == "rga") return Algorithm::rga;
  throw usage_error("unknown algorithm '" + s + "' (expected pga, pga_shrink, oga, rga)");
}

struct GreedyStep {
  int step_index = 0;
  std::size_t atom_id = 0;
  int sign = 1;
  double coefficient = 0.0;      // f_n = f_{n-1} + coefficient * sign * d (pga family)
  double residual_norm = 0.0;
  double selection_value = 0.0;  // |<r_{n-1}, d_n>| at selection time
};

struct GreedyTrace {
  Algorithm algorithm = Algorithm::pga;
  double shrinkage = 1.0;
  double initial_norm = 0.0;
  std::vector<GreedyStep> steps;

  std::vector<double> residual_norms() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.residual_norm);
    return out;
  }
};

struct RunOptions {
  Algorithm algorithm = Algorithm::pga;
  int steps = 1;
  double shrinkage = 1.0;        // pga_shrink only
  double variation_bound = 1.0;  // rga only
  double halt_below = 1e-14;
};

namespace detail {

inline void check_finite(const CoeffVector& r, double value, int step) {
  if (!std::isfinite(value) || !all_finite(r)) throw numeric_error("numeric breakdown at step " + std::to_string(step));
}

}  // namespace detail

/// Runs one of the greedy algorithms on target f for at most opts.steps steps.
/// Stops early once the residual norm drops below opts.halt_below.
inline GreedyTrace run(const CoeffVector& f, const Dictionary& dict, const RunOptions& opts) {
  if (opts.steps < 1) throw usage_error("run: steps must be >= 1");
  if (opts.algorithm == Algorithm::pga_shrink && !(opts.shrinkage > 0.0 && opts.shrinkage <= 1.0)) {
    throw usage_error("run: shrinkage must lie in (0, 1]");
  }
  if (opts.algorithm == Algorithm::rga && !(opts.variation_bound > 0.0)) {
    throw usage_error("run: variation_bound must be positive");
  }
  if (dict.empty()) throw usage_error("empty dictionary");

  GreedyTrace trace;
  trace.algorithm = opts.algorithm;
  trace.shrinkage = opts.algorithm == Algorithm::pga_shrink ? opts.shrinkage : 1.0;
  trace.initial_norm = norm(f);
  trace.steps.reserve(static_cast<std::size_t>(opts.steps));

  CoeffVector r = f;
  r.extend(dict.dimension());
  if (trace.initial_norm < opts.halt_below) return trace;

  std::vector<CoeffVector> basis;  // oga: orthonormalized selected atoms
  CoeffVector approx;              // rga: current approximant f_n
  double s = trace.shrinkage;

  for (int n = 1; n <= opts.steps; ++n) {
    Selection sel = select_atom(r, dict);
    const CoeffVector& d = dict.atom(sel.atom_id);
    GreedyStep step;
    step.step_index = n;
    step.atom_id = sel.atom_id;
    step.sign = sel.sign;
    step.selection_value = sel.value;

    switch (opts.algorithm) {
      case Algorithm::pga:
      case Algorithm::pga_shrink: {
        step.coefficient = s * sel.value;
        add_scaled(r, -step.coefficient * sel.sign, d);
        break;
      }
      case Algorithm::oga: {
        // Modified Gram-Schmidt with one reorthogonalization pass.
        CoeffVector q = d;
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& b : basis) add_scaled(q, -dot(b, q), b);
        }
        double qn = norm(q);
        if (qn > 1e-12) {
          q = scaled(1.0 / qn, q);
          double proj = dot(q, r);
          add_scaled(r, -proj, q);
          basis.push_back(std::move(q));
        }
        step.coefficient = sel.value;
        break;
      }
      case Algorithm::rga: {
        double b = opts.variation_bound;
        if (n == 1) {
          approx = scaled(b * sel.sign, d);
        } else {
          double w = 2.0 / n;
          approx = scaled(1.0 - w, approx);
          add_scaled(approx, w * b * sel.sign, d);
        }
        r = axpy(-1.0, approx, f);
        r.extend(dict.dimension());
        step.coefficient = n == 1 ? b : 2.0 * b / n;
        break;
      }
    }
    step.residual_norm = norm(r);
    detail::check_finite(r, step.residual_norm, n);
    trace.steps.push_back(step);
    if (step.residual_norm < opts.halt_below) break;
  }
  return trace;
}

}  // namespace mpgreedy
