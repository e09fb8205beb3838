#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gravinst/oracle.hpp"
#include "gravinst/solutions.hpp"

using namespace gravinst;

namespace {

DerivedParams row(Rational eta, Rational gamma, double k1 = 1.0) {
  return derive_params(ModelParams{eta, {gamma, Rational(1)}, {Rational(1, 2), Rational(1, 2)}, {k1, 0.0}});
}

std::vector<double> sorted_real(const std::array<cplx, 4>& r) {
  std::vector<double> v;
  for (const auto& z : r) v.push_back(z.real());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Quartic, RootsSatisfyThePolynomial) {
  for (double eta : {0.5, 2.0 / 3.0})
    for (double omega1 : {0.1, 0.5, 1.0})
      for (double k1 : {0.0, 0.3, 1.0, 2.0})
        for (const cplx& r : quartic_roots(eta, omega1, k1))
          EXPECT_LT(quartic_residual(eta, omega1, k1, r), 1e-12 * std::max(1.0, std::norm(r) * std::norm(r)));
}

TEST(Quartic, FactorsWithoutWaveTerm) {
  // k1 = 0: (x^2 - beta)(x^2 - beta - 2/3)
  for (double eta : {0.5, 2.0 / 3.0, 0.8}) {
    const double beta = (2 * eta - 1) * (2 * eta - 1) / 4;
    const double p = std::sqrt(beta), q = std::sqrt(beta + 2.0 / 3.0);
    const auto got = sorted_real(quartic_roots(eta, 0.5, 0.0));
    const std::vector<double> want{-q, -p, p, q};
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(got[j], want[j], 1e-12);
  }
}

TEST(Quartic, EinsteinDeSitterExponents) {
  for (double omega1 : {0.1, 0.5, 1.0}) {
    std::vector<double> e;
    for (const cplx& d : quartic_roots(2.0 / 3.0, omega1, 0.0)) e.push_back(-1.0 / 6.0 + d.real());
    std::sort(e.begin(), e.end());
    EXPECT_NEAR(e[0], -1.0, 1e-12);
    EXPECT_NEAR(e[1], -1.0 / 3.0, 1e-12);
    EXPECT_NEAR(e[2], 0.0, 1e-12);
    EXPECT_NEAR(e[3], 2.0 / 3.0, 1e-12);
  }
}

TEST(Quartic, UnsquaredInnerRadicalIsNotARoot) {
  const double eta = 2.0 / 3.0, omega1 = 0.5, k1 = 1.0;
  const double beta = 1.0 / 36.0;
  const double unsquared = beta + 1.0 / 3.0 - k1 * k1 / 2 + std::sqrt((1.0 / 3.0 + k1 * k1 / 2) - 2.0 / 3.0 * omega1);
  EXPECT_GT(quartic_residual(eta, omega1, k1, std::sqrt(cplx(unsquared))), 1e-3);
  const double squared = beta + 1.0 / 3.0 - k1 * k1 / 2 +
                       std::sqrt(std::pow(1.0 / 3.0 + k1 * k1 / 2, 2) - 2.0 / 3.0 * omega1 * k1 * k1);
  EXPECT_LT(quartic_residual(eta, omega1, k1, std::sqrt(cplx(squared))), 1e-14);
}

TEST(PowerLawBasis, DoubleRootCarriesLogarithm) {
  // eta = 1/2, gamma = 3/2 gives alpha_1 = 0 and, at k1 = 0, a double root d = 0
  const SolutionSet ss = basis_power_law(0.5, 0.5, 0.0);
  int logs = 0;
  for (const auto& b : ss.basis) logs += b.log_power();
  EXPECT_EQ(logs, 1);
  const DerivedParams dp = derive_params_real(0.5, 1.5, 0.5, 0.0);
  ASSERT_TRUE(dp.alpha1_zero);
  const auto grid = log_grid(2.0, 200.0, 64);
  for (const auto& b : ss.basis) {
    const auto prof = operator_residual([&](double t) { return b.eval(t).value; }, dp, 0.5, grid);
    EXPECT_LT(prof.max_rel, 1e-8) << b.name();
  }
}

TEST(ResidueBases, KindsNamesAndLogFlags) {
  const DerivedParams dp = row(Rational(1, 2), Rational(1));
  const PoleReport pr = classify_poles(dp);
  const SolutionSet fin = basis_finite_t(dp, pr);
  const SolutionSet near = basis_near_inf(dp, pr);
  EXPECT_EQ(fin.kind(), BasisKind::FiniteT);
  EXPECT_EQ(near.kind(), BasisKind::NearInf);
  EXPECT_TRUE(std::any_of(fin.basis.begin(), fin.basis.end(), [](const BasisSolution& b) { return b.log_terms(); }));
  EXPECT_NE(near.basis[0].name(), near.basis[1].name());
  EXPECT_NE(near.basis[0].name().find("G^{4,1}"), std::string::npos);

  const DerivedParams generic = row(Rational(2, 3), Rational(2, 3));
  const SolutionSet g = basis_finite_t(generic, classify_poles(generic));
  EXPECT_TRUE(std::none_of(g.basis.begin(), g.basis.end(), [](const BasisSolution& b) { return b.log_terms(); }));
}

TEST(ResidueBases, RefuseUnsupportedParameters) {
  const DerivedParams flat = row(Rational(2, 3), Rational(4, 3));
  EXPECT_THROW(basis_finite_t(flat, classify_poles(flat)), std::domain_error);
  const DerivedParams still = row(Rational(2, 3), Rational(1), 0.0);
  EXPECT_THROW(basis_finite_t(still, classify_poles(still)), std::domain_error);
  EXPECT_THROW(basis_near_inf(still, classify_poles(still)), std::domain_error);
}

TEST(ResidueBases, ValidityWindowIsEnforced) {
  const DerivedParams dp = row(Rational(2, 3), Rational(1));
  const SolutionSet fin = basis_finite_t(dp, classify_poles(dp));
  const double t_far = dp.t_of_x(8.0);
  try {
    (void)fin.basis[0].eval(t_far);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("near-infinity"), std::string::npos);
  }
  EXPECT_NO_THROW((void)fin.basis[0].eval_unchecked(t_far));
  EXPECT_TRUE(fin.basis[0].valid_at(dp.t_of_x(4.0)));
}

TEST(ResidueBases, FitRecoversCoefficients) {
  const DerivedParams dp = row(Rational(1, 2), Rational(4, 3), 0.3);
  const SolutionSet fin = basis_finite_t(dp, classify_poles(dp));
  const double t0 = dp.t_of_x(0.7);
  const Coeffs c{cplx(1.0), cplx(-0.5), cplx(2.0), cplx(0.25)};
  const Eigen::Matrix4cd jet = basis_jet(fin, t0);
  PhiJet values;
  for (int k = 0; k < 4; ++k) {
    values[k] = 0;
    for (int j = 0; j < 4; ++j) values[k] += jet(k, j) * c[j];
  }
  const FitResult fr = fit_coefficients(fin, t0, values);
  EXPECT_FALSE(fr.ill_conditioned);
  for (int j = 0; j < 4; ++j) EXPECT_LT(std::abs(fr.coeffs[j] - c[j]), 1e-8) << j;
}

TEST(ResidueBases, CrossFitAndRank) {
  for (const auto& [eta, gamma] : {std::pair{Rational(2, 3), Rational(1)}, std::pair{Rational(1, 2), Rational(2)}}) {
    const DerivedParams dp = row(eta, gamma);
    const PoleReport pr = classify_poles(dp);
    const SolutionSet fin = basis_finite_t(dp, pr);
    const SolutionSet near = basis_near_inf(dp, pr);
    EXPECT_LT(cross_fit(fin, near).max_rel_residual, 1e-6);
    const double ta = dp.t_of_x(0.05), tb = dp.t_of_x(5.0);
    int rank = 0;
    collocation_rank_ratio(fin, log_grid(std::min(ta, tb), std::max(ta, tb), 8), &rank);
    EXPECT_EQ(rank, 4);
  }
}

TEST(GrowthSolution, ContinuousAcrossTheSwitch) {
  const DerivedParams dp = row(Rational(2, 3), Rational(1), 0.3);
  GrowthSolution g(dp);
  g.set_coefficients({cplx(1.0), cplx(0.2), cplx(-0.7), cplx(0.1)}, BasisKind::FiniteT);
  const double ts = g.t_switch();
  EXPECT_EQ(g.basis_at(ts * 0.999), BasisKind::FiniteT);
  EXPECT_EQ(g.basis_at(ts * 1.001), BasisKind::NearInf);
  const double a = g.delta(ts * (1 - 1e-9)).delta, b = g.delta(ts * (1 + 1e-9)).delta;
  // the handover error is relative to the size of the individual terms, not of their sum
  const Coeffs c{cplx(1.0), cplx(0.2), cplx(-0.7), cplx(0.1)};
  double scale = 0;
  for (int j = 0; j < 4; ++j) scale += std::abs(c[j] * g.finite_t().basis[j].eval(ts).value);
  scale *= std::pow(ts, dp.alpha);
  EXPECT_LT(std::abs(a - b), 1e-6 * scale);
  EXPECT_THROW((void)g.delta(dp.t_of_x(25.0)), std::domain_error);
}

TEST(DeltaOfT, ZeroCoefficientsGiveZero) {
  const SolutionSet ss = basis_power_law(2.0 / 3.0, 0.5, 0.0);
  EXPECT_EQ(delta_of_t(ss, Coeffs{}, 3.0).delta, 0.0);
}
