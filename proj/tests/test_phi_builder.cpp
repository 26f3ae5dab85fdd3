#include <gtest/gtest.h>

#include <cmath>

#include "mpgreedy/constants.hpp"
#include "mpgreedy/error.hpp"
#include "mpgreedy/integral_equation.hpp"
#include "mpgreedy/phi_builder.hpp"
#include "mpgreedy/quadrature.hpp"

using namespace mpgreedy;

namespace {

struct Pipeline {
  double beta, tau;
  ClosedFormBundle b;
  GridFunction f;
};

const Pipeline& pipeline() {
  static const Pipeline p = [] {
    OperatingPoint op;
    Pipeline q{op.beta(), op.tau(), bundle(op.beta(), op.tau()), {}};
    q.f = solve_f(power_law_G(q.b.c, q.beta, q.tau, 2001), q.tau).converged_f;
    return q;
  }();
  return p;
}

}  // namespace

TEST(Mollifier, UnitMass) {
  for (double t : {0.05, 0.01}) {
    double m = quad::gauss_composite([t](double y) { return mollifier(y, t); }, -t, t, 256);
    EXPECT_NEAR(m, 1.0, 1e-10);
  }
  EXPECT_EQ(bump(1.0), 0.0);
  EXPECT_EQ(bump(-1.5), 0.0);
}

TEST(Mollify, ZeroStaysZero) {
  GridFunction f = GridFunction::sample(0.45, 1.0, 201, [](double) { return 0.0; });
  EXPECT_EQ(mollify(f, 0.01, 201).max_value(), 0.0);
}

TEST(Mollify, ConstantAwayFromTheJump) {
  double tau = 0.45, t = 0.01;
  GridFunction f = GridFunction::sample(tau, 1.0, 201, [](double) { return 1.0; });
  GridFunction phi = mollify(f, t, 2001);
  EXPECT_NEAR(phi(tau + 2 * t), 1.0, 1e-8);
  EXPECT_NEAR(phi(0.9), 1.0, 1e-8);
  EXPECT_EQ(phi(tau - 2 * t), 0.0);
}

TEST(Mollify, RampMatchesFineOracle) {
  double tau = 0.45, t = 0.02;
  auto fn = [](double x) { return std::pow(x, -0.7); };
  GridFunction f = GridFunction::sample(tau, 1.0, 2001, fn);
  GridFunction phi = mollify(f, t, 2001);
  for (double x : {tau - 0.5 * t, tau, tau + 0.3 * t, 1.0 - 0.5 * t, 1.0}) {
    // x - y >= tau  <=>  y <= x - tau ; above 1 the input is held at f(1)
    auto integrand = [&](double y) {
      double z = x - y;
      return (z > 1.0 ? fn(1.0) : fn(z)) * mollifier(y, t);
    };
    double hi = std::min(t, x - tau);
    double lo = -t;
    double ref = 0.0;
    double kink = x - 1.0;  // y below this reads the constant extension
    if (kink > lo && kink < hi) {
      ref = quad::gauss_composite(integrand, lo, kink, 400) + quad::gauss_composite(integrand, kink, hi, 400);
    } else if (hi > lo) {
      ref = quad::gauss_composite(integrand, lo, hi, 800);
    }
    EXPECT_NEAR(phi(x), ref, 1e-8) << "x=" << x;
  }
}

TEST(Mollify, WidthMustStayBelowTau) {
  GridFunction f = GridFunction::sample(0.45, 1.0, 201, [](double) { return 1.0; });
  EXPECT_THROW(mollify(f, 0.45), usage_error);
  EXPECT_THROW(mollify(f, 0.0), usage_error);
}

TEST(Normalize, ClosedFormRoot) {
  EXPECT_NEAR(normalization_constant(0.75, 0.5, 0.25), 1.0, 1e-15);
  EXPECT_NEAR(normalization_constant(0.6, 0.6, 1e-14), 1.0, 1e-12);
  EXPECT_NEAR(normalization_constant(0.6, 0.6, 0.0), 1.0, 1e-15);
}

TEST(Normalize, DegenerateProfile) {
  GridFunction z = GridFunction::sample(0.0, 1.0, 101, [](double) { return 0.0; });
  EXPECT_THROW(normalize(z, 0.3), numeric_error);
}

TEST(Normalize, SatisfiesMassEquality) {
  const Pipeline& p = pipeline();
  Normalization nz = normalize(mollify(p.f, 0.01), p.beta);
  EXPECT_NEAR(weighted_mass(nz.phi), p.beta / (1 - 2 * p.beta), 1e-8);
  EXPECT_NEAR(nz.C_t * nz.C_t * nz.C + nz.C_t * nz.B, p.beta / (1 - 2 * p.beta), 1e-12);
}

TEST(Normalize, ConstantTendsToOne) {
  const Pipeline& p = pipeline();
  double prev = INFINITY;
  for (double t : {0.02, 0.01, 0.005}) {
    double ct = normalize(mollify(p.f, t), p.beta).C_t;
    EXPECT_GE(ct, 0.9);
    EXPECT_LE(ct, 1.1);
    EXPECT_LT(std::abs(ct - 1.0), prev) << "t=" << t;
    prev = std::abs(ct - 1.0);
  }
}

TEST(CheckConditions, ZeroProfile) {
  GridFunction z = GridFunction::sample(0.0, 1.0, 201, [](double) { return 0.0; });
  ConditionReport r = check_conditions(z, 0.3, 0.45, ConditionMode::phi_form, 200);
  EXPECT_EQ(r.entries.at(0).sup_value, 0.0);
  EXPECT_EQ(r.entries.at(1).sup_value, 0.0);
  EXPECT_TRUE(r.all_pass());
}

TEST(CheckConditions, ConvergedFIsStrict) {
  const Pipeline& p = pipeline();
  ConditionReport r = check_conditions(p.f, p.beta, p.tau, ConditionMode::f_form);
  EXPECT_LT(r.entry("f_derivative_sup").sup_value, 1.0);
  EXPECT_LT(r.entry("f_cross_sup").sup_value, 1.0);
  EXPECT_LT(p.tau * p.f.value(0), 1.0);
  EXPECT_NEAR(r.equality_value, p.beta / (1 - 2 * p.beta), 1e-6);
}

TEST(CheckConditions, DerivativeFormAtTauIsBoundaryTerm) {
  const Pipeline& p = pipeline();
  ConditionEvaluator ev(p.f, p.beta, p.tau, ConditionMode::f_form);
  EXPECT_DOUBLE_EQ(ev.derivative_form(p.tau), p.tau * p.f.value(0));
  EXPECT_LT(p.tau * p.f.value(0), 1.0);
}

TEST(CheckConditions, MollifiedProfilePasses) {
  const Pipeline& p = pipeline();
  Normalization nz = normalize(mollify(p.f, 0.01), p.beta);
  ConditionReport r = check_conditions(nz.phi, p.beta, p.tau, ConditionMode::phi_form, 2000, 0.02);
  EXPECT_LE(r.equality_residual, 1e-8);
  EXPECT_LT(r.entry("phi_derivative_sup").sup_value, 0.99);
  EXPECT_LT(r.entry("phi_cross_sup").sup_value, 0.99);
}

TEST(CheckConditions, StableUnderGridDoubling) {
  const Pipeline& p = pipeline();
  Normalization coarse = normalize(mollify(p.f, 0.01, 2001), p.beta);
  Normalization fine = normalize(mollify(p.f, 0.01, 4001), p.beta);
  ConditionReport a = check_conditions(coarse.phi, p.beta, p.tau, ConditionMode::phi_form, 2000, 0.02);
  ConditionReport b = check_conditions(fine.phi, p.beta, p.tau, ConditionMode::phi_form, 2000, 0.02);
  for (std::size_t i = 0; i < a.entries.size(); ++i) EXPECT_NEAR(a.entries[i].sup_value, b.entries[i].sup_value, 1e-4);
}

TEST(AssembledF, MatchesClosedForm) {
  const Pipeline& p = pipeline();
  double worst = 0.0;
  for (double a = p.tau; a <= 1.0; a += 0.005) worst = std::max(worst, std::abs(assembled_F(p.f, p.tau, a) - p.b.F(a)));
  EXPECT_LE(worst, 1e-5);
}

TEST(BuildPhi, OperatingPointProfile) {
  const Pipeline& p = pipeline();
  PhiProfile prof = build_phi(p.f, p.beta);
  EXPECT_TRUE(prof.conditions.all_pass());
  EXPECT_LE(prof.conditions.equality_residual, 1e-8);
  EXPECT_DOUBLE_EQ(prof.delta, p.tau - 2 * prof.t);
  EXPECT_GE(prof.phi.min_value(), 0.0);
  for (double x = 0.0; x <= prof.delta; x += 0.01) EXPECT_EQ(prof.phi(x), 0.0);
}
