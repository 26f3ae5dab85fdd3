#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "greedy.hpp"
#include "grid_function.hpp"
#include "linear_core.hpp"
#include "phi_builder.hpp"

namespace mpgreedy {

/// q_n = sqrt(n^(-1+2b) - (n+1)^(-1+2b)), the greedy coefficient that makes
/// ||r_n|| = (n+1)^(b-1/2).
inline double q_of(long n, double beta) {
  if (n < 1) throw usage_error("q_of: n must be >= 1");
  if (!(beta > 0.0 && beta < 0.5)) throw usage_error("q_of: beta must lie in (0, 1/2)");
  double e = -1.0 + 2.0 * beta;
  double nn = static_cast<double>(n);
  // n^e - (n+1)^e = n^e (1 - (1+1/n)^e), evaluated without cancellation.
  double diff = -std::pow(nn, e) * std::expm1(e * std::log1p(1.0 / nn));
  return std::sqrt(diff);
}

struct ConstructionParams {
  double beta = 0.0;
  int K = 200;
  int N = 400;
  int n_max = 5000;
  double epsilon = 0.0;
  PhiProfile phi;
};

inline void validate(const ConstructionParams& p) {
  if (!(p.beta > 0.0 && p.beta < 0.5)) throw usage_error("construction: beta must lie in (0, 1/2)");
  if (p.K < 2) throw usage_error("construction: K must be >= 2");
  if (p.N < p.K) throw usage_error("construction: N must be >= K");
  if (p.n_max <= p.N) throw usage_error("construction: n_max must exceed N");
  if (p.phi.phi.size() < 3) throw usage_error("construction: missing phi profile");
}

/// The sequences r_{K-1}, ..., r_n and d_K, ..., d_n with their scalars.
/// Scalar sequences are indexed by n (entries before K are NaN, except q_{K-1}).
struct ConstructionState {
  int n = 0;
  int K = 0;
  double beta = 0.0;
  std::vector<double> q, gamma, alpha, xi;
  std::vector<CoeffVector> residuals;  // residuals[m - (K-1)] = r_m
  std::vector<CoeffVector> atoms;      // atoms[m - K] = d_m

  const CoeffVector& r(int m) const { return residuals[static_cast<std::size_t>(m - (K - 1))]; }
  const CoeffVector& d(int m) const { return atoms[static_cast<std::size_t>(m - K)]; }
  const CoeffVector& current() const { return residuals.back(); }
};

struct SequenceRow {
  int n = 0;
  double q = 0.0, gamma = 0.0, alpha = 0.0, xi = 0.0;
};

namespace detail {

// phi(i/n)/n for i = 1..n-1; h_n = alpha_n times this vector.
inline CoeffVector h_shape(const GridFunction& phi, int n) {
  CoeffVector v(static_cast<std::size_t>(n - 1));
  auto c = v.coeffs_mut();
  double inv = 1.0 / n;
  for (int i = 1; i < n; ++i) c[static_cast<std::size_t>(i - 1)] = phi(i * inv) * inv;
  return v;
}

inline void ensure_capacity(ConstructionState& s, int n) {
  std::size_t need = static_cast<std::size_t>(n) + 1;
  double nan = std::numeric_limits<double>::quiet_NaN();
  if (s.q.size() < need) {
    s.q.resize(need, nan);
    s.gamma.resize(need, nan);
    s.alpha.resize(need, nan);
    s.xi.resize(need, nan);
  }
}

// d_n = gamma r_{n-1} + alpha shape + xi e_n ; r_n = r_{n-1} - q d_n
inline void apply_step(ConstructionState& s, const CoeffVector& shape, const SequenceRow& row) {
  int n = row.n;
  CoeffVector d = scaled(row.gamma, s.current());
  add_scaled(d, row.alpha, shape);
  d.at_grow(static_cast<std::size_t>(n - 1)) = row.xi;
  CoeffVector r = s.current();
  add_scaled(r, -row.q, d);
  ensure_capacity(s, n);
  s.q[static_cast<std::size_t>(n)] = row.q;
  s.gamma[static_cast<std::size_t>(n)] = row.gamma;
  s.alpha[static_cast<std::size_t>(n)] = row.alpha;
  s.xi[static_cast<std::size_t>(n)] = row.xi;
  s.atoms.push_back(std::move(d));
  s.residuals.push_back(std::move(r));
  s.n = n;
}

}  // namespace detail

/// r_{K-1} = -K^(-1/2+b) (K-1)^(-1/2) (e_1 + ... + e_{K-1}).
inline ConstructionState init_state(const ConstructionParams& p) {
  if (p.K < 2) throw usage_error("init_state: K must be >= 2");
  ConstructionState s;
  s.K = p.K;
  s.n = p.K - 1;
  s.beta = p.beta;
  detail::ensure_capacity(s, p.K - 1);
  s.q[static_cast<std::size_t>(p.K - 1)] = q_of(p.K - 1, p.beta);
  double coeff = -std::pow(static_cast<double>(p.K), -0.5 + p.beta) / std::sqrt(static_cast<double>(p.K - 1));
  s.residuals.emplace_back(std::vector<double>(static_cast<std::size_t>(p.K - 1), coeff));
  return s;
}

/// Advances the construction by one index, choosing gamma_n, alpha_n, xi_n so
/// that ||r_n|| = (n+1)^(b-1/2), <r_{n-1}, d_n> = q_n and ||d_n|| = 1.
inline void step(ConstructionState& s, const ConstructionParams& p) {
  int n = s.n + 1;
  double beta = p.beta;
  double qn = q_of(n, beta);
  double qprev = s.q[static_cast<std::size_t>(n - 1)];
  double gamma = 1.0 / qn - 1.0 / qprev;
  CoeffVector shape = detail::h_shape(p.phi.phi, n);
  const CoeffVector& r = s.current();
  double S = dot(r, shape);
  if (S == 0.0) throw numeric_error("phi support misses residual at n = " + std::to_string(n));
  double target = qn - gamma * std::pow(static_cast<double>(n), -1.0 + 2.0 * beta);
  double alpha = target / S;
  if (alpha < 0.0) throw numeric_error("negative alpha at n = " + std::to_string(n) + ", increase K");
  CoeffVector v = scaled(gamma, r);
  add_scaled(v, alpha, shape);
  double vv = norm_squared(v);
  if (vv > 1.0) throw numeric_error("xi imaginary at n = " + std::to_string(n) + " - increase K");
  double xi = std::sqrt(1.0 - vv);
  detail::apply_step(s, shape, {n, qn, gamma, alpha, xi});

  const CoeffVector& d = s.d(n);
  double norm_err = std::abs(norm(s.current()) * std::pow(n + 1.0, 0.5 - beta) - 1.0);
  double unit_err = std::abs(norm(d) - 1.0);
  double sel_err = std::abs(dot(s.r(n - 1), d) - qn) / qn;
  if (norm_err > 1e-9 || unit_err > 1e-9 || sel_err > 1e-9) {
    throw numeric_error("step " + std::to_string(n) + ": condition check failed (norm " + std::to_string(norm_err) +
                        ", unit " + std::to_string(unit_err) + ", selection " + std::to_string(sel_err) + ")");
  }
}

/// Runs the construction from K-1 up to p.n_max.
inline ConstructionState construct(const ConstructionParams& p) {
  validate(p);
  ConstructionState s = init_state(p);
  s.residuals.reserve(static_cast<std::size_t>(p.n_max - p.K + 2));
  s.atoms.reserve(static_cast<std::size_t>(p.n_max - p.K + 1));
  while (s.n < p.n_max) step(s, p);
  return s;
}

/// Replays stored scalar sequences (rows for n = K..n_max, in order). Uses the
/// same evaluation order as step(), so identical inputs give identical atoms.
inline ConstructionState replay(const ConstructionParams& p, const std::vector<SequenceRow>& rows) {
  validate(p);
  ConstructionState s = init_state(p);
  for (const auto& row : rows) {
    if (row.n != s.n + 1) throw usage_error("replay: sequence rows out of order at n = " + std::to_string(row.n));
    detail::apply_step(s, detail::h_shape(p.phi.phi, row.n), row);
  }
  if (s.n != p.n_max) throw usage_error("replay: sequences end at " + std::to_string(s.n));
  return s;
}

inline std::vector<SequenceRow> sequence_rows(const ConstructionState& s) {
  std::vector<SequenceRow> rows;
  for (int n = s.K; n <= s.n; ++n) {
    auto i = static_cast<std::size_t>(n);
    rows.push_back({n, s.q[i], s.gamma[i], s.alpha[i], s.xi[i]});
  }
  return rows;
}

/// f = r_N, d~_N = eps r_N/||r_N|| + sqrt(1-eps^2) d_N, dictionary
/// {+-d~_N} u {+-d_n : N <= n <= n_max}.
struct AdversarialInstance {
  ConstructionParams params;
  ConstructionState state;
  CoeffVector f;
  CoeffVector d_tilde;
  double variation_bound = 0.0;

  /// Atom 0 is d~_N; atom j >= 1 is d_{N+j-1}.
  Dictionary dictionary() const {
    std::vector<CoeffVector> atoms{d_tilde};
    std::vector<std::string> labels{"dtilde_" + std::to_string(params.N)};
    for (int n = params.N; n <= params.n_max; ++n) {
      atoms.push_back(state.d(n));
      labels.push_back("d_" + std::to_string(n));
    }
    return Dictionary(std::move(atoms), std::move(labels));
  }
};

inline CoeffVector make_d_tilde(const ConstructionState& s, int N, double eps) {
  const CoeffVector& rN = s.r(N);
  CoeffVector dt = scaled(eps / norm(rN), rN);
  add_scaled(dt, std::sqrt(1.0 - eps * eps), s.d(N));
  return dt;
}

/// ||f||_K1 bound from f = (||r_N||/eps)(d~_N - sqrt(1-eps^2) d_N).
inline double variation_bound(double r_norm, double eps) { return r_norm / eps * (1.0 + std::sqrt(1.0 - eps * eps)); }

inline AdversarialInstance finalize(ConstructionState state, const ConstructionParams& p) {
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw usage_error("finalize: epsilon must lie in (0, 1)");
  if (state.n < p.n_max) throw usage_error("finalize: construction not advanced to n_max");
  AdversarialInstance inst;
  inst.params = p;
  inst.f = state.r(p.N);
  inst.d_tilde = make_d_tilde(state, p.N, p.epsilon);
  inst.variation_bound = variation_bound(norm(inst.f), p.epsilon);
  inst.state = std::move(state);
  return inst;
}

// ---------------------------------------------------------------------------
// Inner products <r_{n-1}, d_k> through the closed-form recursions.

/// Precomputed h_i vectors for i in [first, last]; shared by the oracle paths.
class HTable {
 public:
  HTable(const ConstructionState& s, const GridFunction& phi, int first, int last) : first_(first) {
    for (int i = first; i <= last; ++i) {
      CoeffVector h = detail::h_shape(phi, i);
      double a = s.alpha[static_cast<std::size_t>(i)];
      for (double& x : h.coeffs_mut()) x *= a;
      rows_.push_back(std::move(h));
    }
  }
  const CoeffVector& h(int i) const { return rows_[static_cast<std::size_t>(i - first_)]; }

 private:
  int first_;
  std::vector<CoeffVector> rows_;
};

namespace detail {

// <h_i, v> using only the first `len` coefficients of v (h_i has i-1 of them).
inline double h_dot(const ConstructionState& s, const GridFunction& phi, int i, const CoeffVector& v) {
  std::size_t len = std::min(v.active_len(), static_cast<std::size_t>(i - 1));
  double inv = 1.0 / i;
  double a = s.alpha[static_cast<std::size_t>(i)];
  std::vector<double> h(len);
  for (std::size_t j = 0; j < len; ++j) h[j] = a * (phi(static_cast<double>(j + 1) * inv) * inv);
  return dot(std::span<const double>(h), v.coeffs().first(len));
}

}  // namespace detail

/// <r_{n-1}, d_k> for N <= k <= n_max, N < n <= n_max, k != n, evaluated by
/// the recursions in n (k < n) and in k (k > n) rather than a direct product.
inline double inner_product_oracle(const ConstructionState& s, const GridFunction& phi, int N, int n, int k) {
  if (k == n || n <= N || k < N || n > s.n || k > s.n) {
    throw usage_error("inner_product_oracle: index out of range (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  auto at = [](const std::vector<double>& v, int i) { return v[static_cast<std::size_t>(i)]; };
  if (k < n) {
    double acc = 0.0;
    for (int i = k + 1; i <= n - 1; ++i) acc += detail::h_dot(s, phi, i, s.d(k));
    return -at(s.q, n - 1) * acc;
  }
  const CoeffVector& r = s.r(n - 1);
  double x = at(s.q, n);
  double p_prev = detail::h_dot(s, phi, n, r);
  for (int m = n + 1; m <= k; ++m) {
    double p = detail::h_dot(s, phi, m, r);
    double factor = (1.0 / at(s.gamma, m - 1) - at(s.q, m - 1)) * at(s.gamma, m);
    x = factor * x + p - at(s.gamma, m) / at(s.gamma, m - 1) * p_prev;
    p_prev = p;
  }
  return x;
}

/// <r_{n-1}, d~_N> by the recursion seeded with <f, d~_N> = eps ||r_N||.
inline double tilde_inner_product_oracle(const AdversarialInstance& inst, int n) {
  const auto& s = inst.state;
  int N = inst.params.N;
  if (n <= N || n > s.n) throw usage_error("tilde oracle: n out of range");
  double acc = 0.0;
  for (int i = N + 1; i <= n - 1; ++i) acc += detail::h_dot(s, inst.params.phi.phi, i, inst.d_tilde);
  double base = inst.params.epsilon * norm(s.r(N)) / s.q[static_cast<std::size_t>(N)];
  return -s.q[static_cast<std::size_t>(n - 1)] * (acc - base);
}

// ---------------------------------------------------------------------------
// Verification

struct ScheduleReport {
  double max_norm_error = 0.0;       // | ||r_n|| (n+1)^(1/2-b) - 1 |
  double max_unit_error = 0.0;       // | ||d_n|| - 1 |
  double max_selection_error = 0.0;  // |<r_{n-1},d_n> - q_n| / q_n
  double max_orthogonality = 0.0;    // |<r_n, d_n>|
  double alpha_min = 0.0, xi_min = 0.0, xi_max = 0.0;
  bool pass = false;
};

/// Checks the three per-step conditions for every n in [K, n_max].
inline ScheduleReport check_schedule(const ConstructionState& s, double tol = 1e-9) {
  ScheduleReport rep;
  rep.alpha_min = std::numeric_limits<double>::infinity();
  rep.xi_min = std::numeric_limits<double>::infinity();
  rep.xi_max = -std::numeric_limits<double>::infinity();
  for (int n = s.K; n <= s.n; ++n) {
    auto i = static_cast<std::size_t>(n);
    rep.max_norm_error = std::max(rep.max_norm_error, std::abs(norm(s.r(n)) * std::pow(n + 1.0, 0.5 - s.beta) - 1.0));
    rep.max_unit_error = std::max(rep.max_unit_error, std::abs(norm(s.d(n)) - 1.0));
    rep.max_selection_error = std::max(rep.max_selection_error, std::abs(dot(s.r(n - 1), s.d(n)) - s.q[i]) / s.q[i]);
    rep.max_orthogonality = std::max(rep.max_orthogonality, std::abs(dot(s.r(n), s.d(n))));
    rep.alpha_min = std::min(rep.alpha_min, s.alpha[i]);
    rep.xi_min = std::min(rep.xi_min, s.xi[i]);
    rep.xi_max = std::max(rep.xi_max, s.xi[i]);
  }
  rep.pass = rep.max_norm_error <= tol && rep.max_unit_error <= tol && rep.max_selection_error <= tol &&
             rep.max_orthogonality <= tol &&
             rep.alpha_min >= 0.0 && rep.xi_min > 0.0 && rep.xi_max <= 1.0;
  return rep;
}

struct PairReport {
  long pairs_checked = 0;
  double max_ratio = 0.0;  // max |<r_{n-1}, d_k>| / q_n over k != n (both routes)
  int worst_n = 0, worst_k = 0;
  double min_margin = 0.0;        // 1 - max_ratio
  double max_ratio_below = 0.0;   // k < n
  double max_ratio_above = 0.0;   // k > n
  double max_discrepancy = 0.0;   // |oracle - direct|
  double max_diagonal_error = 0.0;  // |<r_{n-1}, d_n> - q_n|
  bool strict = false;
  bool truncated = false;  // stopped at the first violating block
};

/// Checks |<r_{n-1}, d_k>| < q_n for all N < n <= n_max, N <= k <= n_max,
/// k != n, computing every value twice: directly and through the recursions.
inline PairReport verify_pairs(const ConstructionState& s, const GridFunction& phi, int N, bool stop_early = false) {
  const int n_max = s.n;
  const int block = 32;
  auto at = [](const std::vector<double>& v, int i) { return v[static_cast<std::size_t>(i)]; };
  HTable H(s, phi, N + 1, n_max);
  const int kcount = n_max - N + 1;
  std::vector<double> acc(static_cast<std::size_t>(kcount), 0.0);  // sum_{i=k+1}^{n-1} <h_i, d_k>

  PairReport rep;
  auto record = [&](int n, int k, double direct, double oracle) {
    double qn = at(s.q, n);
    double ratio = std::max(std::abs(direct), std::abs(oracle)) / qn;
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(direct - oracle));
    ++rep.pairs_checked;
    if (k < n) rep.max_ratio_below = std::max(rep.max_ratio_below, ratio);
    else rep.max_ratio_above = std::max(rep.max_ratio_above, ratio);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_n = n;
      rep.worst_k = k;
    }
  };

  for (int n0 = N + 1; n0 <= n_max; n0 += block) {
    int n1 = std::min(n_max, n0 + block - 1);
    int bs = n1 - n0 + 1;
    auto idx = [&](int b, int k) { return static_cast<std::size_t>(b) * kcount + static_cast<std::size_t>(k - N); };
    std::vector<double> direct(static_cast<std::size_t>(bs) * kcount);
    std::vector<double> hd(static_cast<std::size_t>(bs) * kcount, 0.0);  // <h_{n-1}, d_k>, k < n-1
    std::vector<double> pk(static_cast<std::size_t>(bs) * kcount, 0.0);  // <r_{n-1}, h_k>, k >= n
    for (int k = N; k <= n_max; ++k) {
      const CoeffVector& dk = s.d(k);
      for (int b = 0; b < bs; ++b) {
        int n = n0 + b;
        direct[idx(b, k)] = dot(s.r(n - 1), dk);
        if (n - 1 >= N + 1 && k < n - 1) hd[idx(b, k)] = dot(H.h(n - 1), dk);
        if (k >= n) pk[idx(b, k)] = dot(s.r(n - 1), H.h(k));
      }
    }
    for (int b = 0; b < bs; ++b) {
      int n = n0 + b;
      if (n - 1 >= N + 1) {
        for (int k = N; k < n - 1; ++k) acc[static_cast<std::size_t>(k - N)] += hd[idx(b, k)];
      }
      for (int k = N; k < n; ++k) record(n, k, direct[idx(b, k)], -at(s.q, n - 1) * acc[static_cast<std::size_t>(k - N)]);
      rep.max_diagonal_error = std::max(rep.max_diagonal_error, std::abs(direct[idx(b, n)] - at(s.q, n)));
      double x = at(s.q, n);
      for (int k = n + 1; k <= n_max; ++k) {
        double factor = (1.0 / at(s.gamma, k - 1) - at(s.q, k - 1)) * at(s.gamma, k);
        x = factor * x + pk[idx(b, k)] - at(s.gamma, k) / at(s.gamma, k - 1) * pk[idx(b, k - 1)];
        record(n, k, direct[idx(b, k)], x);
      }
    }
    if (stop_early && rep.max_ratio >= 1.0 && n1 < n_max) {
      rep.truncated = true;
      break;
    }
  }
  rep.min_margin = 1.0 - rep.max_ratio;
  rep.strict = rep.max_ratio < 1.0;
  return rep;
}

struct TildeReport {
  double epsilon = 0.0;
  double max_ratio = 0.0;  // max_n |<r_{n-1}, d~_N>| / q_n
  int worst_n = 0;
  double max_discrepancy = 0.0;
  double base_error = 0.0;  // |<f, d~_N> - eps ||r_N|||
  bool strict = false;
};

/// |<r_{n-1}, d~_N>| < q_n for every N < n <= n_max, directly and by recursion.
inline TildeReport check_tilde(const ConstructionState& s, const GridFunction& phi, int N, double eps) {
  TildeReport rep;
  rep.epsilon = eps;
  CoeffVector dt = make_d_tilde(s, N, eps);
  double rn = norm(s.r(N));
  rep.base_error = std::abs(dot(s.r(N), dt) - eps * rn);
  double base = eps * rn / s.q[static_cast<std::size_t>(N)];
  double acc = 0.0;
  for (int n = N + 1; n <= s.n; ++n) {
    if (n - 1 >= N + 1) {
      int i = n - 1;
      acc += s.alpha[static_cast<std::size_t>(i)] * dot(detail::h_shape(phi, i), dt);
    }
    double qn = s.q[static_cast<std::size_t>(n)];
    double oracle = -s.q[static_cast<std::size_t>(n - 1)] * (acc - base);
    double direct = dot(s.r(n - 1), dt);
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(oracle - direct));
    double ratio = std::max(std::abs(oracle), std::abs(direct)) / qn;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_n = n;
    }
  }
  rep.strict = rep.max_ratio < 1.0;
  return rep;
}

struct VerificationReport {
  ScheduleReport schedule;
  PairReport pairs;
  TildeReport tilde;
  double d_tilde_norm_error = 0.0;
  double span_residual = 0.0;  // f minus its least-squares fit by d~_N, d_N
  double discrepancy_tol = 1e-9;
  double diagonal_tol = 1e-10;

  double max_discrepancy() const { return std::max(pairs.max_discrepancy, tilde.max_discrepancy); }
  double min_margin() const { return std::min(pairs.min_margin, 1.0 - tilde.max_ratio); }
  bool pass() const {
    return schedule.pass && pairs.strict && tilde.strict && max_discrepancy() <= discrepancy_tol &&
           pairs.max_diagonal_error <= diagonal_tol && d_tilde_norm_error <= 1e-9 && span_residual <= 1e-9;
  }
};

/// Largest eps = 2^-j with eps ||r_N|| <= q_{N+1}/2 whose d~_N inequalities
/// all hold. Requires the d_k inequalities to hold already.
inline double choose_epsilon(const ConstructionState& s, const GridFunction& phi, int N, const PairReport& pairs,
                             TildeReport* out = nullptr) {
  if (!pairs.strict || pairs.max_discrepancy > 1e-9) throw numeric_error("increase N: atom inequalities fail");
  double bound = 0.5 * s.q[static_cast<std::size_t>(N + 1)] / norm(s.r(N));
  for (int j = 0; j <= 60; ++j) {
    double eps = std::ldexp(1.0, -j);
    if (eps > bound || eps >= 1.0) continue;
    TildeReport t = check_tilde(s, phi, N, eps);
    if (t.strict && t.max_discrepancy <= 1e-9) {
      if (out) *out = t;
      return eps;
    }
  }
  throw numeric_error("increase N: no epsilon in the dyadic grid passes");
}

inline double two_atom_residual(const CoeffVector& f, const CoeffVector& a, const CoeffVector& b) {
  double g = dot(a, b);
  double fa = dot(f, a), fb = dot(f, b);
  double det = 1.0 - g * g;
  if (!(det > 0.0)) return norm(f);
  double ca = (fa - g * fb) / det;
  double cb = (fb - g * fa) / det;
  CoeffVector res = f;
  add_scaled(res, -ca, a);
  add_scaled(res, -cb, b);
  return norm(res);
}

inline void fill_instance_checks(VerificationReport& rep, const AdversarialInstance& inst) {
  rep.d_tilde_norm_error = std::abs(norm(inst.d_tilde) - 1.0);
  rep.span_residual = two_atom_residual(inst.f, inst.d_tilde, inst.state.d(inst.params.N));
}

inline VerificationReport verify(const AdversarialInstance& inst) {
  VerificationReport rep;
  fill_instance_checks(rep, inst);
  rep.schedule = check_schedule(inst.state);
  rep.pairs = verify_pairs(inst.state, inst.params.phi.phi, inst.params.N);
  rep.tilde = check_tilde(inst.state, inst.params.phi.phi, inst.params.N, inst.params.epsilon);
  return rep;
}

struct BuildOptions {
  int K = 200;
  int N = 400;
  int n_max = 5000;
  int max_doublings = 4;
};

struct BuildResult {
  AdversarialInstance instance;
  VerificationReport report;
  std::vector<std::pair<int, double>> attempts;  // (N, max pair ratio) per attempt
};

/// Builds and certifies an instance. The construction itself does not depend
/// on N, so on failure only N is doubled and the same sequences are re-verified.
inline BuildResult build_instance(const PhiProfile& phi, double beta, const BuildOptions& opts) {
  ConstructionParams p;
  p.beta = beta;
  p.K = opts.K;
  p.N = opts.N;
  p.n_max = opts.n_max;
  p.phi = phi;
  validate(p);
  ConstructionState state = construct(p);
  ScheduleReport schedule = check_schedule(state);
  if (!schedule.pass) throw numeric_error("construction violates the per-step conditions");

  BuildResult out;
  for (int attempt = 0, N = opts.N; attempt <= opts.max_doublings && N < opts.n_max; ++attempt, N *= 2) {
    PairReport pairs = verify_pairs(state, phi.phi, N, true);
    out.attempts.emplace_back(N, pairs.max_ratio);
    if (!pairs.strict || pairs.max_discrepancy > 1e-9) continue;
    TildeReport tilde;
    double eps;
    try {
      eps = choose_epsilon(state, phi.phi, N, pairs, &tilde);
    } catch (const numeric_error&) {
      continue;
    }
    p.N = N;
    p.epsilon = eps;
    out.report.schedule = schedule;
    out.report.pairs = pairs;
    out.report.tilde = tilde;
    out.instance = finalize(std::move(state), p);
    fill_instance_checks(out.report, out.instance);
    return out;
  }
  throw numeric_error("increase N: no N in the doubling schedule certifies the instance");
}

}  // namespace mpgreedy
