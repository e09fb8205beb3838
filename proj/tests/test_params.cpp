#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "gravinst/params.hpp"

using namespace gravinst;

namespace {

ModelParams two_component(Rational eta, Rational gamma, double k1 = 1.0) {
  return {eta, {gamma, Rational(1)}, {Rational(1, 2), Rational(1, 2)}, {k1, 0.0}};
}

}  // namespace

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("2/3"), Rational(2, 3));
  EXPECT_EQ(Rational::parse("-4/6"), Rational(-2, 3));
  EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
  EXPECT_EQ(Rational::parse("-1.5e-1"), Rational(-3, 20));
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
}

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ(Rational(1, 2) * Rational(2, 3), Rational(1, 3));
  EXPECT_EQ(Rational(1, 2) / Rational(1, 4), Rational(2));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational(-3, 4).str(), "-3/4");
}

TEST(QuadSurd, ReducesSquareRoots) {
  EXPECT_EQ(QuadSurd::sqrt_of(Rational(13, 16)).str(), "sqrt(13)/4");
  EXPECT_EQ(QuadSurd::sqrt_of(Rational(2, 3)).str(), "sqrt(6)/3");
  EXPECT_EQ(QuadSurd::sqrt_of(Rational(6)).str(), "sqrt(6)");
  EXPECT_EQ(QuadSurd::sqrt_of(Rational(25, 16)).str(), "5/4");
  EXPECT_NEAR(QuadSurd::sqrt_of(Rational(24, 25)).to_double(), std::sqrt(24.0 / 25.0), 1e-15);
}

TEST(QuadSurd, DifferencesAndIntegerTest) {
  const QuadSurd r6 = QuadSurd::sqrt_of(Rational(6));
  EXPECT_TRUE((r6 - r6).is_zero());
  EXPECT_EQ((r6 - (-r6)).str(), "2*sqrt(6)");
  EXPECT_TRUE((QuadSurd(Rational(1, 4)) - QuadSurd(Rational(5, 4))).is_integer());
  EXPECT_THROW(r6 + QuadSurd::sqrt_of(Rational(3)), std::domain_error);
}

TEST(ModelParams, ValidationNamesTheField) {
  ModelParams mp = two_component(Rational(2, 3), Rational(1));
  mp.omegas = {Rational(1, 2), Rational(1, 3)};
  try {
    mp.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("omegas"), std::string::npos);
  }
  mp = two_component(Rational(2, 3), Rational(1));
  mp.ks = {-1.0, 0.0};
  EXPECT_THROW(mp.validate(), std::invalid_argument);
  mp.ks = {1.0};
  EXPECT_THROW(mp.validate(), std::invalid_argument);
}

TEST(DerivedParams, RowTwoThirdsOne) {
  const DerivedParams dp = derive_params(two_component(Rational(2, 3), Rational(1)));
  EXPECT_DOUBLE_EQ(dp.alpha_i, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(dp.alpha, -1.0 / 6.0);
  ASSERT_TRUE(dp.exact.has_value());
  EXPECT_EQ(dp.exact->b_star[0].str(), "1/4");
  EXPECT_EQ(dp.exact->b_star[3].str(), "-5/4");
  ASSERT_TRUE(dp.exact->a_star.has_value());
  EXPECT_EQ((*dp.exact->a_star)[0].str(), "-1+sqrt(13)/4");
  EXPECT_NEAR(dp.a_star[1].real(), -1 - std::sqrt(13.0) / 4, 1e-15);
  EXPECT_FALSE(dp.complex_a);
}

TEST(DerivedParams, AlphaOneZeroRow) {
  const DerivedParams dp = derive_params(two_component(Rational(2, 3), Rational(4, 3)));
  EXPECT_TRUE(dp.alpha1_zero);
  EXPECT_TRUE(std::isnan(dp.b_star[0]));
  EXPECT_THROW((void)dp.x_of_t(1.0), std::domain_error);
  EXPECT_EQ(classify_poles(dp).regime, Regime::Alpha1Zero);
}

TEST(DerivedParams, ComplexIndicialPairIsReported) {
  // small alpha_1 at Omega_1 = 1 keeps the radicand (beta + 2/3 - 2/3) = beta >= 0;
  // eta = 1/2 has beta = 0, so Omega_1 = 1 gives a* = -1 (double).
  ModelParams mp{Rational(1, 2), {Rational(1)}, {Rational(1)}, {1.0}};
  DerivedParams dp = derive_params(mp);
  EXPECT_FALSE(dp.complex_a);
  EXPECT_NEAR(dp.a_star[0].real(), -1.0, 1e-15);
  // Omega_1 > 1 is impossible, so force a negative radicand through the float entry.
  dp = derive_params_real(0.5, 1.0, 2.0, 1.0);
  EXPECT_TRUE(dp.complex_a);
  EXPECT_NEAR(dp.a_star[0].imag(), -dp.a_star[1].imag(), 1e-15);
}

TEST(DerivedParams, FloatEntryAgreesWithExact) {
  for (const auto& [eta, gamma] : catalogue_rows()) {
    const DerivedParams ex = derive_params(two_component(eta, gamma, 0.7));
    const DerivedParams fl = derive_params_real(eta.to_double(), gamma.to_double(), 0.5, 0.7);
    EXPECT_EQ(ex.alpha1_zero, fl.alpha1_zero);
    if (ex.alpha1_zero) continue;
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(ex.b_star[j], fl.b_star[j], 1e-14);
    EXPECT_NEAR(std::abs(ex.a_star[0] - fl.a_star[0]), 0.0, 1e-14);
  }
}

TEST(DerivedParams, TimeToXRoundTrip) {
  const DerivedParams dp = derive_params(two_component(Rational(1, 2), Rational(2), 0.3));
  for (double t : {0.01, 1.0, 250.0}) EXPECT_NEAR(dp.t_of_x(dp.x_of_t(t)) / t, 1.0, 1e-13);
  // x = k1^2 t^alpha_i / alpha_i^2 with alpha_i = -1
  EXPECT_NEAR(dp.x_of_t(2.0), 0.09 / 2.0, 1e-16);
}

TEST(PoleReport, RegimesOfTheCatalogue) {
  const auto generic = classify_poles(derive_params(two_component(Rational(2, 3), Rational(2, 3))));
  EXPECT_EQ(generic.regime, Regime::Generic);
  EXPECT_TRUE(generic.integer_pairs.empty());
  EXPECT_EQ(generic.integer_classes.size(), 4u);

  const auto shifted = classify_poles(derive_params(two_component(Rational(2, 3), Rational(1))));
  EXPECT_EQ(shifted.regime, Regime::IntegerDiff);
  ASSERT_EQ(shifted.integer_pairs.size(), 2u);
  EXPECT_EQ(shifted.integer_pairs[0], std::make_pair(1, 3));
  EXPECT_EQ(shifted.integer_pairs[1], std::make_pair(2, 4));
  EXPECT_EQ(shifted.max_order, 2);

  const DerivedParams dp = derive_params(two_component(Rational(1, 2), Rational(1)));
  const auto coincident = classify_poles(dp);
  EXPECT_EQ(coincident.regime, Regime::IntegerDiff);
  EXPECT_EQ(coincident.integer_pairs.front(), std::make_pair(1, 2));
  EXPECT_TRUE(coincident.symbolic);
  // classes sorted by decreasing b*
  for (const auto& cls : coincident.integer_classes)
    for (std::size_t k = 1; k < cls.size(); ++k) EXPECT_GE(dp.b_star[cls[k - 1]], dp.b_star[cls[k]]);
}

TEST(PoleReport, NumericFallbackUsesTolerance) {
  const DerivedParams dp = derive_params_real(2.0 / 3.0, 1.0, 0.5, 1.0);
  const PoleReport pr = classify_poles(dp);
  EXPECT_FALSE(pr.symbolic);
  EXPECT_EQ(pr.regime, Regime::IntegerDiff);
  EXPECT_EQ(pr.integer_pairs.size(), 2u);
}

TEST(Tables, ShapeAndOrder) {
  const ParameterTables t = emit_tables();
  ASSERT_EQ(t.table21.size(), 10u);
  ASSERT_EQ(t.table22.size(), 9u);
  EXPECT_EQ(t.table21.front().gamma, Rational(4, 3));
  EXPECT_TRUE(t.table21.front().params.alpha1_zero);
  EXPECT_EQ(t.table22.front().diffs[5].str(), "5/2");
  EXPECT_EQ(t.table22[4].diffs[5].str(), "2*sqrt(6)");
}
