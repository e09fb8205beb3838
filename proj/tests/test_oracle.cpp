#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "gravinst/oracle.hpp"

using namespace gravinst;

namespace {

ModelParams eds() { return ModelParams{Rational(2, 3), {Rational(4, 3)}, {Rational(1)}, {0.0}}; }

}  // namespace

TEST(Integrator, EinsteinDeSitterModes) {
  const auto mp = eds();
  const auto grow = integrate_system(mp, InitialData{1.0, {1.0}, {2.0 / 3.0}}, 1e3, 1e-11, 60);
  const auto decay = integrate_system(mp, InitialData{1.0, {1.0}, {-1.0}}, 1e3, 1e-11, 60);
  for (std::size_t k = 0; k < grow.t.size(); ++k) {
    const double t = grow.t[k];
    EXPECT_NEAR(grow.delta[0][k] / std::pow(t, 2.0 / 3.0), 1.0, 1e-9) << t;
    EXPECT_NEAR(decay.delta[0][k] * t, 1.0, 1e-9) << t;
  }
  EXPECT_GT(grow.stats.steps, 0u);
  EXPECT_LT(grow.stats.achieved, 1e-9);
}

TEST(Integrator, RejectsBadInput) {
  const auto mp = eds();
  EXPECT_THROW(integrate_system(mp, InitialData{1.0, {1.0}, {0.0}}, 10.0, 1e-14), std::invalid_argument);
  EXPECT_THROW(integrate_system(mp, InitialData{0.0, {1.0}, {0.0}}, 10.0), std::domain_error);
  EXPECT_THROW(integrate_system(mp, InitialData{1.0, {1.0, 2.0}, {0.0}}, 10.0), std::invalid_argument);
}

TEST(DeltaJet, MatchesEinsteinDeSitterDerivatives) {
  const auto j = delta_jet(eds(), 1.0, {1.0}, {2.0 / 3.0});
  EXPECT_NEAR(j[0], 1.0, 1e-15);
  EXPECT_NEAR(j[1], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(j[2], -2.0 / 9.0, 1e-14);
  EXPECT_NEAR(j[3], 8.0 / 27.0, 1e-14);
}

TEST(OperatorResidual, SeparatesSolutionsFromPerturbations) {
  const DerivedParams dp = derive_params_real(2.0 / 3.0, 4.0 / 3.0, 0.5, 0.0);
  ASSERT_TRUE(dp.alpha1_zero);
  const auto grid = log_grid(0.1, 10.0, 32);
  // delta = t^(2/3) means Phi = t^(2/3 - alpha) = t^(5/6)
  const auto exact = operator_residual([](double t) { return cplx(std::pow(t, 5.0 / 6.0)); }, dp, 0.5, grid);
  const auto off = operator_residual([](double t) { return cplx(std::pow(t, 5.0 / 6.0 + 0.1)); }, dp, 0.5, grid);
  EXPECT_LT(exact.max_rel, 1e-8);
  EXPECT_GT(off.max_rel, 1e-2);
  EXPECT_GT(off.max_rel / std::max(exact.max_rel, 1e-300), 1e4);
  EXPECT_EQ(exact.points.size(), grid.size());
}

TEST(CompareAnalytic, PowerLawRow) {
  ModelParams mp{Rational(2, 3), {Rational(4, 3), Rational(1)}, {Rational(1, 2), Rational(1, 2)}, {0.0, 0.0}};
  const double t0 = 1.0;
  const auto cmp = compare_analytic(mp, InitialData{t0, {1.0, 0.5}, {0.3, -0.2}}, 100.0, 1e-11, 80);
  EXPECT_LT(cmp.max_rel_deviation, 1e-8);
  EXPECT_TRUE(std::isnan(cmp.t_switch));

  mp.ks = {0.0, 0.5};
  EXPECT_THROW(compare_analytic(mp, InitialData{t0, {1.0, 0.5}, {0.3, -0.2}}, 10.0), std::domain_error);
}

TEST(LogGrid, EndpointsAndDensity) {
  const auto g = log_grid(0.01, 10.0, 16);
  EXPECT_DOUBLE_EQ(g.front(), 0.01);
  EXPECT_NEAR(g.back(), 10.0, 1e-12);
  EXPECT_EQ(g.size(), 49u);
  EXPECT_THROW(log_grid(1.0, 1.0, 8), std::invalid_argument);
}
