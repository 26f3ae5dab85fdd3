#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mpgreedy/linear_core.hpp"

using namespace mpgreedy;

namespace {

CoeffVector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  CoeffVector v(n);
  for (double& x : v.coeffs_mut()) x = nd(rng);
  return v;
}

long double naive_dot(const CoeffVector& u, const CoeffVector& v) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < std::min(u.active_len(), v.active_len()); ++i) {
    s += static_cast<long double>(u[i]) * static_cast<long double>(v[i]);
  }
  return s;
}

}  // namespace

TEST(Dot, SmallExamples) {
  EXPECT_EQ(dot(CoeffVector{1, 0}, CoeffVector{0, 1}), 0.0);
  EXPECT_NEAR(dot(CoeffVector{0.6, 0.8}, CoeffVector{0.6, 0.8}), 1.0, 1e-15);
  EXPECT_EQ(dot(CoeffVector{1, 2, 3}, CoeffVector{4, 5, 6}), 32.0);
}

TEST(Dot, ShorterOperandIsZeroPadded) {
  EXPECT_EQ(dot(CoeffVector{1, 2}, CoeffVector{3, 4, 5}), 11.0);
  EXPECT_EQ(dot(CoeffVector{}, CoeffVector{3, 4, 5}), 0.0);
}

TEST(Dot, MatchesExtendedPrecisionSum) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1ul, 3ul, 127ul, 128ul, 129ul, 1000ul, 100000ul}) {
    CoeffVector u = random_vector(rng, n), v = random_vector(rng, n);
    long double ref = naive_dot(u, v);
    double scale = norm(u) * norm(v);
    EXPECT_NEAR(dot(u, v), static_cast<double>(ref), 1e-14 * scale) << "n=" << n;
  }
}

TEST(Norm, SquaredEqualsSumOfSquaresAtLargeLength) {
  std::mt19937_64 rng(11);
  CoeffVector v = random_vector(rng, 1000000);
  long double ref = naive_dot(v, v);
  EXPECT_NEAR(norm_squared(v) / static_cast<double>(ref), 1.0, 1e-12);
}

TEST(Axpy, Examples) {
  EXPECT_EQ(axpy(0.0, CoeffVector{5, 7, 9}, CoeffVector{1, 1}).coeffs()[0], 1.0);
  CoeffVector z = axpy(-1.0, CoeffVector{1, 1}, CoeffVector{1, 1});
  EXPECT_EQ(z[0], 0.0);
  EXPECT_EQ(z[1], 0.0);
  CoeffVector w = axpy(2.0, CoeffVector{1, 0, 3}, CoeffVector{0, 1, 0});
  EXPECT_EQ(w, (CoeffVector{2, 1, 6}));
}

TEST(Axpy, GrowsToLongerOperand) {
  CoeffVector w = axpy(1.0, CoeffVector{1, 2, 3}, CoeffVector{1});
  ASSERT_EQ(w.active_len(), 3u);
  EXPECT_EQ(w, (CoeffVector{2, 2, 3}));
  CoeffVector v{1};
  add_scaled(v, 2.0, CoeffVector{0, 0, 1});
  EXPECT_EQ(v, (CoeffVector{1, 0, 2}));
}

TEST(CoeffVector, ZeroBeyondActiveLength) {
  CoeffVector v{1, 2};
  EXPECT_EQ(v[2], 0.0);
  EXPECT_EQ(v[1000], 0.0);
  v.at_grow(5) = 4.0;
  EXPECT_EQ(v.active_len(), 6u);
  EXPECT_EQ(v[3], 0.0);
  EXPECT_EQ(v[5], 4.0);
  v.extend(10);
  EXPECT_EQ(v.active_len(), 10u);
  EXPECT_EQ(CoeffVector::unit(3), (CoeffVector{0, 0, 0, 1}));
}

TEST(CoeffVector, FiniteCheck) {
  EXPECT_TRUE(all_finite(CoeffVector{1, 2}));
  EXPECT_FALSE(all_finite(CoeffVector{1, std::nan("")}));
  EXPECT_FALSE(all_finite(CoeffVector{INFINITY}));
}

TEST(Properties, CauchySchwarzBilinearityAndExpansion) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(-3.0, 3.0);
  std::uniform_int_distribution<int> len(1, 400);
  for (int trial = 0; trial < 200; ++trial) {
    CoeffVector u = random_vector(rng, static_cast<std::size_t>(len(rng)));
    CoeffVector v = random_vector(rng, static_cast<std::size_t>(len(rng)));
    CoeffVector w = random_vector(rng, static_cast<std::size_t>(len(rng)));
    double a = ua(rng);
    EXPECT_LE(std::abs(dot(u, v)), norm(u) * norm(v) * (1 + 1e-14));
    EXPECT_NEAR(dot(u, v), dot(v, u), 1e-12 * norm(u) * norm(v));
    double lhs = dot(axpy(a, u, v), w);
    double rhs = a * dot(u, w) + dot(v, w);
    EXPECT_NEAR(lhs, rhs, 1e-12 * (std::abs(a) * norm(u) + norm(v)) * norm(w));
    double expanded = a * a * norm_squared(u) + 2 * a * dot(u, v) + norm_squared(v);
    double scale = a * a * norm_squared(u) + norm_squared(v);
    EXPECT_NEAR(norm_squared(axpy(a, u, v)), expanded, 1e-10 * scale);
  }
}
