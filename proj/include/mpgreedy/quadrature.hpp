#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace mpgreedy::quad {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// 4-point rule: exact for degree 7, which covers products of two cubics.
inline constexpr std::array<double, 4> kGauss4Nodes = {-0.8611363115940526, -0.3399810435848563,
                                                      0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 4> kGauss4Weights = {0.3478548451374538, 0.6521451548625461,
                                                        0.6521451548625461, 0.3478548451374538};

/// Gauss-Legendre (4 points) of fn over [a, b].
template <class Fn>
double gauss4(Fn&& fn, double a, double b) {
  double half = 0.5 * (b - a);
  double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += kGauss4Weights[i] * fn(mid + half * kGauss4Nodes[i]);
  return s * half;
}

/// Composite 8-point Gauss-Legendre with `panels` equal panels.
template <class Fn>
double gauss_composite(Fn&& fn, double a, double b, int panels) {
  if (b <= a) return 0.0;
  double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h;
    double mid = lo + 0.5 * h;
    double ps = 0.0;
    for (std::size_t i = 0; i < 8; ++i) ps += kGaussWeights[i] * fn(mid + 0.5 * h * kGaussNodes[i]);
    s += ps * 0.5 * h;
  }
  return s;
}

/// Integral of equispaced samples with spacing h. Composite Simpson when the
/// interval count is even; otherwise Simpson on the leading part plus the
/// 3/8 rule on the last three intervals. Two nodes fall back to the trapezoid.
inline double simpson_samples(std::span<const double> y, double h) {
  std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  std::size_t intervals = n - 1;
  std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  double s = 0.0;
  if (simpson_end > 0) {
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < simpson_end; i += 2) odd += y[i];
    for (std::size_t i = 2; i < simpson_end; i += 2) even += y[i];
    s = h / 3.0 * (y[0] + 4.0 * odd + 2.0 * even + y[simpson_end]);
  }
  if (simpson_end != intervals) {
    std::size_t j = simpson_end;
    s += 3.0 * h / 8.0 * (y[j] + 3.0 * y[j + 1] + 3.0 * y[j + 2] + y[j + 3]);
  }
  return s;
}

}  // namespace mpgreedy::quad
