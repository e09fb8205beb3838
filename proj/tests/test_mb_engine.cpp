#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gravinst/mb_engine.hpp"

using namespace gravinst;

namespace {

constexpr double kAuto = std::numeric_limits<double>::quiet_NaN();

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

DerivedParams row(Rational eta, Rational gamma) {
  return derive_params(ModelParams{eta, {gamma, Rational(1)}, {Rational(1, 2), Rational(1, 2)}, {1.0, 0.0}});
}

// 2 x^{(b1+b2)/2} K_{b1-b2}(2 sqrt x)
double g20_02(double b1, double b2, double x) {
  return 2 * std::pow(x, (b1 + b2) / 2) * std::cyl_bessel_k(b1 - b2, 2 * std::sqrt(x));
}

}  // namespace

TEST(MeijerIntegrand, ExponentialKernel) {
  // G^{1,0}_{0,1}(x | b) = x^b e^{-x}
  const MBIntegrand ib = meijer_integrand(1, 0, {}, {0.35});
  EXPECT_EQ(ib.left_degree(), 1);
  for (double x : {0.2, 3.0, 11.0, 20.0}) {
    const double want = std::pow(x, 0.35) * std::exp(-x);
    const ResidueSum r = residue_sum(ib, Direction::Left, x);
    // alternating terms up to x^x / x! cancel at large x; the estimate must say so
    EXPECT_LE(std::abs(r.value - want), r.abs_error_estimate) << x;
    if (x < 5) {
      EXPECT_TRUE(r.converged);
      EXPECT_LT(rel(r.value, want), 1e-12) << x;
    }
    if (x > 15) {
      EXPECT_FALSE(r.converged);
    }
  }
  for (double x : {0.2, 3.0, 11.0}) EXPECT_LT(rel(contour_quadrature(ib, x, kAuto).value, std::pow(x, 0.35) * std::exp(-x)), 1e-9) << x;
}

TEST(MeijerIntegrand, BalancedBinomialKernel) {
  // G^{1,1}_{1,1}(x | a; b) = Gamma(1 - a + b) x^b (1 + x)^{a - b - 1}
  const double a = 0.3, b = 0.2;
  const MBIntegrand ib = meijer_integrand(1, 1, {a}, {b});
  EXPECT_EQ(ib.left_degree(), 0);
  auto want = [&](double x) { return std::tgamma(1 - a + b) * std::pow(x, b) * std::pow(1 + x, a - b - 1); };
  EXPECT_LT(rel(residue_sum(ib, Direction::Left, 0.4).value, want(0.4)), 1e-12);
  EXPECT_LT(rel(residue_sum(ib, Direction::Right, 2.5).value, want(2.5)), 1e-12);
  EXPECT_THROW(residue_sum(ib, Direction::Left, 2.5), std::domain_error);
  EXPECT_THROW(residue_sum(ib, Direction::Right, 0.4), std::domain_error);
  for (double x : {0.4, 2.5}) EXPECT_LT(rel(contour_quadrature(ib, x, kAuto).value, want(x)), 1e-9) << x;
}

TEST(MeijerIntegrand, BesselKSimpleAndDoublePoles) {
  for (const auto& [b1, b2] : {std::pair{0.2, -0.2}, std::pair{0.0, 0.0}, std::pair{0.5, -0.5}, std::pair{0.7, 0.7}}) {
    const MBIntegrand ib = meijer_integrand(2, 0, {}, {b1, b2});
    for (double x : {0.05, 1.0, 6.0}) {
      const ResidueSum r = residue_sum(ib, Direction::Left, x);
      const double want = g20_02(b1, b2, x);
      EXPECT_LT(rel(r.value, want), 1e-11) << b1 << ' ' << b2 << ' ' << x;
      EXPECT_LT(rel(contour_quadrature(ib, x, kAuto).value, want), 1e-9);
      const bool integer_diff = std::abs(b1 - b2 - std::round(b1 - b2)) < 1e-12;
      EXPECT_EQ(r.max_order, integer_diff ? 2 : 1);
      EXPECT_EQ(r.log_parts.size(), integer_diff ? 2u : 1u);
    }
  }
}

TEST(MeijerIntegrand, BesselJ) {
  // G^{1,0}_{0,2}(x | nu/2, -nu/2) = J_nu(2 sqrt x)
  const double nu = 1.3;
  const MBIntegrand ib = meijer_integrand(1, 0, {}, {nu / 2, -nu / 2});
  for (double x : {0.3, 4.0, 25.0}) {
    const double want = std::cyl_bessel_j(nu, 2 * std::sqrt(x));
    EXPECT_LT(std::abs(residue_sum(ib, Direction::Left, x).value - want), 1e-12);
  }
}

TEST(ResidueEngine, SyntheticTriplePole) {
  const MBIntegrand ib = meijer_integrand(3, 0, {}, {0.0, 0.0, 0.0});
  EXPECT_EQ(pole_order_at(ib, 0.0), 3);
  EXPECT_EQ(pole_order_at(ib, -4.0), 3);
  EXPECT_EQ(pole_order_at(ib, 0.5), 0);
  for (double x : {0.3, 2.0}) {
    const ResidueSum r = residue_sum(ib, Direction::Left, x);
    EXPECT_EQ(r.max_order, 3);
    EXPECT_EQ(r.log_parts.size(), 3u);
    EXPECT_LT(rel(r.value, contour_quadrature(ib, x, kAuto).value), 1e-9);
  }
}

TEST(ResidueEngine, CancelledPolesHaveLowerOrder) {
  // Gamma(s) Gamma(s + 1) / Gamma(s): regular at 0, simple from -1 on
  MBIntegrand ib;
  ib.numerator = {{1, 0.0}, {1, 1.0}};
  ib.denominator = {{1, 0.0}};
  EXPECT_EQ(pole_order_at(ib, 0.0), 0);
  EXPECT_EQ(pole_order_at(ib, -1.0), 1);
  const auto poles = enumerate_poles(ib, Direction::Left, 4);
  ASSERT_FALSE(poles.empty());
  EXPECT_NEAR(poles.front().location.real(), -1.0, 1e-15);
}

TEST(ResidueEngine, ErrorEstimateBoundsActualError) {
  const MBIntegrand ib = meijer_integrand(2, 0, {}, {0.0, 0.0});
  for (double x : {0.5, 9.0, 30.0}) {
    const ResidueSum r = residue_sum(ib, Direction::Left, x);
    EXPECT_LE(std::abs(r.value - g20_02(0, 0, x)), 10 * r.abs_error_estimate + 1e-300) << x;
  }
}

TEST(ResidueEngine, RejectsBadX) {
  const MBIntegrand ib = meijer_integrand(1, 0, {}, {0.0});
  EXPECT_THROW(residue_sum(ib, Direction::Left, 0.0), std::invalid_argument);
  EXPECT_THROW(residue_sum(ib, Direction::Left, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(ResidueEngine, RightSumOfDivergentSideIsAsymptoticOnly) {
  const DerivedParams dp = row(Rational(2, 3), Rational(2, 3));
  const MBIntegrand ib = build_integrand(IntegrandKind::G_2_4_4_1, dp);
  EXPECT_THROW(residue_sum(ib, Direction::Right, 0.5), std::domain_error);
  const ResidueSum r = residue_sum(ib, Direction::Right, 40.0);
  EXPECT_FALSE(r.converged);
}

TEST(CatalogueIntegrands, LabelsAndDegrees) {
  const DerivedParams dp = row(Rational(2, 3), Rational(1));
  const MBIntegrand g = build_integrand(IntegrandKind::G_2_4_1_2, dp, {2, 0, 1, 3});
  EXPECT_EQ(g.label, "G^{1,2}_{2,4} b-order 3124");
  EXPECT_EQ(g.left_degree(), 2);
  EXPECT_EQ(build_integrand(IntegrandKind::G_2_4_4_1, dp, {0, 1, 2, 3}, 0, true).label,
            "G^{4,1}_{2,4} b-order 1234 a swapped");
  EXPECT_THROW(build_integrand(IntegrandKind::G_2_4_1_2, dp, {0, 0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(build_integrand(IntegrandKind::G_2_4_4_1, row(Rational(2, 3), Rational(4, 3))), std::domain_error);
}

TEST(CatalogueIntegrands, RotatedPairIsConjugate) {
  for (const auto& [eta, gamma] : {std::pair{Rational(2, 3), Rational(1)}, std::pair{Rational(1, 2), Rational(2)}}) {
    const DerivedParams dp = row(eta, gamma);
    const MBIntegrand up = build_integrand(IntegrandKind::G_2_4_4_0, dp, {0, 1, 2, 3}, std::numbers::pi);
    const MBIntegrand down = build_integrand(IntegrandKind::G_2_4_4_0, dp, {0, 1, 2, 3}, -std::numbers::pi);
    for (double x : {0.5, 4.0}) {
      const cplx a = residue_sum(up, Direction::Left, x).value;
      const cplx b = residue_sum(down, Direction::Left, x).value;
      EXPECT_LT(std::abs(a - std::conj(b)), 1e-12 * std::abs(a));
      EXPECT_GT(std::abs(a.imag()), 1e-6 * std::abs(a));
    }
  }
}

TEST(CatalogueIntegrands, CancellationRewriteIsExact) {
  const DerivedParams dp = row(Rational(2, 3), Rational(1));
  for (const auto order : {std::array<int, 4>{0, 1, 2, 3}, std::array<int, 4>{1, 0, 2, 3}}) {
    const MBIntegrand raw = build_integrand(IntegrandKind::G_2_4_1_2, dp, order);
    const MBIntegrand rewritten = remove_cancellations(raw);
    for (double x : {0.2, 1.0, 3.0}) {
      const cplx a = residue_sum(raw, Direction::Left, x).value;
      EXPECT_LT(rel(residue_sum(rewritten, Direction::Left, x).value, a), 1e-13);
      EXPECT_LT(rel(contour_quadrature(rewritten, x, kAuto).value, a), 1e-9);
    }
    // the rewritten integrand has no zero/pole coincidence left
    for (const auto& f : rewritten.numerator)
      for (const auto& d : rewritten.denominator)
        if (f.slope == 1 && d.slope == -1) {
          const double k = -(f.offset + d.offset).real();
          EXPECT_FALSE(k >= 0 && std::abs(k - std::round(k)) < 1e-12);
        }
  }
}

TEST(ContourQuadrature, PerronIntegral) {
  // (1 / 2 pi i) int Gamma(s)/Gamma(1+s) x^{-s} ds on Re s = 1/2 is 1 for x < 1, 0 for x > 1
  MBIntegrand ib;
  ib.numerator = {{1, 0.0}};
  ib.denominator = {{1, 1.0}};
  EXPECT_NEAR(std::abs(contour_quadrature(ib, 0.5, 0.5).value - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(contour_quadrature(ib, 2.0, 0.5).value), 0.0, 1e-8);
}

TEST(ContourQuadrature, ShiftDoesNotMatter) {
  const DerivedParams dp = row(Rational(1, 2), Rational(4, 3));
  const MBIntegrand ib = build_integrand(IntegrandKind::G_2_4_4_1, dp);
  const cplx ref = residue_sum(ib, Direction::Left, 1.5).value;
  for (double c : {default_contour_shift(ib), 1.2, 3.0})
    EXPECT_LT(rel(contour_quadrature(ib, 1.5, c).value, ref), 1e-9) << c;
}
