#include <gtest/gtest.h>

#include <cmath>

#include "mpgreedy/constants.hpp"
#include "mpgreedy/error.hpp"
#include "mpgreedy/quadrature.hpp"

using namespace mpgreedy;

namespace {

// Plain bisection on the rate equation, used as an independent oracle.
double bisect_gamma(double s) {
  auto h = [s](double g) { return std::pow(1 + g, 1 / (2 + g)) * (1 + 1 / (1 + g)) - 1 - (2 - s) / g; };
  double lo = 1.0, hi = 100.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    ((h(mid) > 0) == (h(hi) > 0) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(SolveGamma, PlainMatchingPursuit) {
  RateConstants rc = solve_gamma(1.0);
  EXPECT_GE(rc.alpha, 0.182);
  EXPECT_LE(rc.alpha, 0.183);
  EXPECT_LE(std::abs(rc.residual), 1e-12);
  EXPECT_NEAR(rc.gamma, 1.15, 0.01);
  EXPECT_NEAR(rc.gamma, bisect_gamma(1.0), 1e-10);
  EXPECT_NEAR(rc.beta, 0.5 - rc.alpha, 1e-15);
}

TEST(SolveGamma, SmallShrinkageLimit) {
  RateConstants rc = solve_gamma(1e-6);
  EXPECT_GE(rc.alpha, 0.304);
  EXPECT_LE(rc.alpha, 0.306);
  EXPECT_NEAR(rc.gamma, bisect_gamma(1e-6), 1e-9);
}

TEST(SolveGamma, ExponentDecreasesInShrinkage) {
  double prev = 1.0;
  for (double s : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    RateConstants rc = solve_gamma(s);
    EXPECT_GT(rc.alpha, 0.0);
    EXPECT_LT(rc.alpha, 0.5);
    EXPECT_LT(rc.alpha, prev) << "s=" << s;
    prev = rc.alpha;
  }
}

TEST(SolveGamma, OutOfRangeIsUsageError) {
  EXPECT_THROW(solve_gamma(2.0), usage_error);
  EXPECT_THROW(solve_gamma(0.0), usage_error);
  EXPECT_THROW(solve_gamma(-0.5), usage_error);
}

TEST(BetaStar, ValueAndConsistency) {
  double b = solve_beta_star();
  EXPECT_NEAR(b, 0.317, 0.005);
  EXPECT_NEAR(0.5 - b, solve_gamma(1.0).alpha, 1e-9);
  EXPECT_NEAR(beta_condition_lhs(b), 1.0, 1e-12);
  EXPECT_LT(beta_condition_lhs(b / 2), 1.0);
}

TEST(TauStar, Values) {
  double b = solve_beta_star();
  EXPECT_NEAR(tau_star(b), 0.465, 0.01);
  EXPECT_NEAR(tau_star(0.25), std::pow(8.0 / 9.0, 4), 1e-14);
  for (double beta : {0.05, 0.1, 0.2, 0.3, 0.45}) {
    double t = tau_star(beta);
    EXPECT_NEAR((1 - beta) * (1 - beta) / (1 - 2 * beta) * std::pow(t, beta), 1.0, 1e-12);
  }
}

TEST(Bundle, CriticalPoint) {
  double b = solve_beta_star();
  ClosedFormBundle cb = bundle(b, tau_star(b));
  EXPECT_NEAR(cb.c, 1.0, 1e-9);
  EXPECT_NEAR(cb.rg, 0.87, 0.01);
  EXPECT_LT(cb.rg, 1.0);
  EXPECT_NEAR(cb.rg, cb.rg_scan, 1e-8);
  EXPECT_NEAR(cb.F(1.0), b / (1 - 2 * b), 1e-10);
  EXPECT_NEAR(cb.F(cb.tau), 0.0, 1e-14);
}

TEST(Bundle, PowerLawRelations) {
  OperatingPoint op;
  ClosedFormBundle cb = bundle(op.beta(), op.tau());
  for (double a = cb.tau; a <= 1.0; a += 0.01) {
    // a F'(a) - beta F(a) = c, with F' by central differences
    double h = 1e-6;
    double Fp = (cb.F(a + h) - cb.F(a - h)) / (2 * h);
    EXPECT_NEAR(a * Fp - cb.beta * cb.F(a), cb.c, 1e-8);
    EXPECT_DOUBLE_EQ(cb.G(a), cb.c * std::pow(cb.tau, -cb.beta) * std::pow(a, cb.beta - 1));
  }
  EXPECT_NEAR(cb.F(1.0), cb.c / cb.beta * (std::pow(cb.tau, -cb.beta) - 1), 1e-14);
}

TEST(Bundle, ClosedFormRgMatchesQuadrature) {
  for (double beta : {0.2, 0.3, 0.31}) {
    double tau = 0.97 * tau_star(beta);
    ClosedFormBundle cb = bundle(beta, tau);
    for (double a : {tau + 0.01, 0.5 * (tau + 1), 1.0}) {
      double q = quad::gauss_composite([&](double x) { return cb.G(x / a); }, tau, a, 64) / (a * a);
      EXPECT_NEAR(rg_integral(beta, tau, cb.c, a), q, 1e-12);
    }
    EXPECT_NEAR(cb.rg, cb.rg_scan, 1e-8);
  }
}

TEST(Bundle, OperatingPointHasStrictMargins) {
  OperatingPoint op;
  EXPECT_NEAR(op.beta(), solve_beta_star() - 0.002, 1e-15);
  EXPECT_NEAR(op.tau(), 0.98 * tau_star(op.beta()), 1e-15);
  ClosedFormBundle cb = bundle(op.beta(), op.tau());
  EXPECT_TRUE(cb.all_satisfied());
  for (const auto& m : cb.margins) EXPECT_TRUE(m.satisfied()) << m.name;
}

TEST(Bundle, CIncreasesInTauAndReachesOneAtTauStar) {
  double beta = 0.3;
  double ts = tau_star(beta);
  double prev = 0.0;
  for (double f = 0.5; f < 1.0; f += 0.05) {
    double c = bundle(beta, f * ts, 10).c;
    EXPECT_GT(c, prev);
    EXPECT_LT(c, 1.0);
    prev = c;
  }
  EXPECT_NEAR(bundle(beta, ts, 10).c, 1.0, 1e-12);
  EXPECT_GT(bundle(beta, 1.02 * ts, 10).c, 1.0);
}

TEST(Bundle, BetaOneMinusBetaBelowOne) {
  for (double beta = 0.05; beta < 0.46; beta += 0.05) EXPECT_LT(beta * std::pow(1 - beta, 1 / beta), 1.0);
}

TEST(Bundle, DomainErrors) {
  EXPECT_THROW(bundle(0.6, 0.4), usage_error);
  EXPECT_THROW(bundle(0.3, 1.2), usage_error);
}
