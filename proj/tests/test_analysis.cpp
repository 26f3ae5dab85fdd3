#include <gtest/gtest.h>

#include <cmath>

#include "mpgreedy/analysis.hpp"

using namespace mpgreedy;

namespace {

GreedyTrace power_trace(double scale, double rate, int steps) {
  GreedyTrace tr;
  tr.initial_norm = scale;
  for (int n = 1; n <= steps; ++n) {
    GreedyStep s;
    s.step_index = n;
    s.residual_norm = scale * std::pow(n, -rate);
    tr.steps.push_back(s);
  }
  return tr;
}

Dictionary axes(std::size_t d) {
  std::vector<CoeffVector> atoms;
  for (std::size_t i = 0; i < d; ++i) atoms.push_back(CoeffVector::unit(i));
  return Dictionary(std::move(atoms));
}

}  // namespace

TEST(FitDecay, ExactPowerLaw) {
  RateFit f = fit_decay(power_trace(1.0, 0.3, 100), 1, 100);
  EXPECT_NEAR(f.slope, -0.3, 1e-12);
  EXPECT_NEAR(f.intercept, 0.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(f.points, 100);

  RateFit g = fit_decay(power_trace(2.0, 0.5, 100), 1, 100);
  EXPECT_NEAR(g.slope, -0.5, 1e-12);
  EXPECT_NEAR(g.intercept, std::log(2.0), 1e-12);
}

TEST(FitDecay, ScaleInvariantSlope) {
  GreedyTrace a = power_trace(1.0, 0.2, 200);
  GreedyTrace b = power_trace(37.5, 0.2, 200);
  for (std::size_t i = 0; i < a.steps.size(); i += 3) {
    a.steps[i].residual_norm *= 1.0 + 0.01 * std::sin(i);
    b.steps[i].residual_norm *= 1.0 + 0.01 * std::sin(i);
  }
  EXPECT_NEAR(fit_decay(a, 10, 200).slope, fit_decay(b, 10, 200).slope, 1e-12);
}

TEST(FitDecay, OffsetShiftsAbscissa) {
  GreedyTrace tr;
  for (int j = 1; j <= 50; ++j) {
    GreedyStep s;
    s.step_index = j;
    s.residual_norm = std::pow(100.0 + j, -0.25);
    tr.steps.push_back(s);
  }
  EXPECT_NEAR(fit_decay(tr, 101, 150, 100).slope, -0.25, 1e-12);
}

TEST(FitDecay, TooFewPoints) {
  EXPECT_THROW(fit_decay(power_trace(1.0, 0.3, 9), 1, 100), numeric_error);
  GreedyTrace z = power_trace(1.0, 0.3, 50);
  for (auto& s : z.steps) s.residual_norm = 0.0;
  EXPECT_THROW(fit_decay(z, 1, 50), numeric_error);
  EXPECT_THROW(fit_decay(z, 5, 5), usage_error);
}

TEST(CheckBounds, Witnesses) {
  BoundReport b = check_bounds(power_trace(3.0, 0.2, 100), 0.2, 3.0);
  EXPECT_NEAR(b.upper_witness, 1.0, 1e-12);
  EXPECT_NEAR(b.lower_witness, 1.0, 1e-12);

  GreedyTrace tr = power_trace(1.0, 0.2, 100);
  tr.steps.back().residual_norm = 0.0;
  EXPECT_EQ(check_bounds(tr, 0.2, 1.0).lower_witness, 0.0);
  EXPECT_EQ(check_bounds(power_trace(1.0, 0.2, 5), 0.2, 1.0).lower_witness, 0.0);
  EXPECT_THROW(check_bounds(tr, 0.2, 0.0), usage_error);
}

TEST(Compare, OrthonormalTargets) {
  Dictionary d = axes(5);
  CoeffVector f{0.5, -0.4, 0.3, 0.2, 0.1};
  CompareOptions o;
  o.steps = 5;
  auto rows = compare(f, d, {Algorithm::pga, Algorithm::oga}, o);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_LE(r.final_residual, 1e-12) << to_string(r.algorithm);

  CoeffVector single{0.0, 1.0};
  CompareOptions one;
  one.steps = 1;
  one.variation_bound = 1.0;
  auto r2 = compare(single, d, {Algorithm::pga, Algorithm::oga, Algorithm::rga}, one);
  for (const auto& r : r2) EXPECT_LE(r.final_residual, 1e-12) << to_string(r.algorithm);
  EXPECT_TRUE(std::isnan(r2[0].slope));
}

TEST(Compare, ShrinkageDecaysGeometrically) {
  Dictionary d = axes(3);
  CoeffVector f{1.0};
  CompareOptions o;
  o.steps = 20;
  o.shrinkage = 0.5;
  auto rows = compare(f, d, {Algorithm::pga_shrink}, o);
  EXPECT_NEAR(rows[0].final_residual, std::pow(0.5, 20), 1e-18);
  EXPECT_EQ(rows[0].steps, 20);
}
