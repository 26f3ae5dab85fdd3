#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace mpgreedy {

namespace detail {

inline constexpr std::size_t kPairwiseBlock = 128;

// Four independent accumulators keep the inner loop vectorizable while the
// summation order stays fixed.
inline double dot_block(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  const std::size_t tail = n - i;
  for (std::size_t j = 0; j < tail; ++j) s0 += a[i + j] * b[i + j];
  return (s0 + s1) + (s2 + s3);
}

inline double dot_pairwise(const double* a, const double* b, std::size_t n) {
  if (n <= kPairwiseBlock) return dot_block(a, b, n);
  std::size_t half = (n / 2 + kPairwiseBlock - 1) / kPairwiseBlock * kPairwiseBlock;
  return dot_pairwise(a, b, half) + dot_pairwise(a + half, b + half, n - half);
}

}  // namespace detail

/// Pairwise-summed inner product of two raw coefficient ranges over their
/// common length.
inline double dot(std::span<const double> u, std::span<const double> v) {
  std::size_t n = std::min(u.size(), v.size());
  return detail::dot_pairwise(u.data(), v.data(), n);
}

/// Finite section of an element of l2 in the standard basis {e_1, e_2, ...}.
/// Coefficient k (0-based) multiplies e_{k+1}; everything past active_len()
/// is zero.
class CoeffVector {
 public:
  CoeffVector() = default;
  explicit CoeffVector(std::size_t active_len) : coeffs_(active_len, 0.0) {}
  explicit CoeffVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}
  CoeffVector(std::initializer_list<double> init) : coeffs_(init) {}

  /// Basis vector e_{index+1}.
  static CoeffVector unit(std::size_t index) {
    CoeffVector v(index + 1);
    v.coeffs_[index] = 1.0;
    return v;
  }

  std::size_t active_len() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

  /// Coefficient of e_{k+1}; zero past the active length.
  double operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

  /// Mutable access; grows the vector with zeros as needed.
  double& at_grow(std::size_t k) {
    if (k >= coeffs_.size()) coeffs_.resize(k + 1, 0.0);
    return coeffs_[k];
  }

  void extend(std::size_t len) {
    if (len > coeffs_.size()) coeffs_.resize(len, 0.0);
  }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs_mut() { return coeffs_; }
  const double* data() const { return coeffs_.data(); }

  friend bool operator==(const CoeffVector&, const CoeffVector&) = default;

 private:
  std::vector<double> coeffs_;
};

inline double dot(const CoeffVector& u, const CoeffVector& v) { return dot(u.coeffs(), v.coeffs()); }

inline double norm_squared(const CoeffVector& v) { return dot(v, v); }

inline double norm(const CoeffVector& v) { return std::sqrt(norm_squared(v)); }

/// a*u + v; the result has the larger of the two active lengths.
inline CoeffVector axpy(double a, const CoeffVector& u, const CoeffVector& v) {
  std::size_t len = std::max(u.active_len(), v.active_len());
  std::vector<double> out(len, 0.0);
  for (std::size_t k = 0; k < len; ++k) out[k] = a * u[k] + v[k];
  return CoeffVector(std::move(out));
}

/// In-place v += a*u.
inline void add_scaled(CoeffVector& v, double a, const CoeffVector& u) {
  v.extend(u.active_len());
  auto out = v.coeffs_mut();
  auto in = u.coeffs();
  for (std::size_t k = 0; k < in.size(); ++k) out[k] += a * in[k];
}

inline CoeffVector scaled(double a, const CoeffVector& u) {
  std::vector<double> out(u.coeffs().begin(), u.coeffs().end());
  for (double& x : out) x *= a;
  return CoeffVector(std::move(out));
}

inline bool all_finite(const CoeffVector& v) {
  return std::all_of(v.coeffs().begin(), v.coeffs().end(), [](double x) { return std::isfinite(x); });
}

}  // namespace mpgreedy
