#include <gtest/gtest.h>

#include <cmath>

#include "gravinst/numdiff.hpp"

using namespace gravinst;

TEST(Ridders, ExponentialJet) {
  const Jet j = ridders_jet([](double u) { return std::complex<double>(std::exp(u)); }, 0.7);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(j.d[k].real(), std::exp(0.7), 1e-9 * std::exp(0.7)) << k;
}

TEST(Ridders, OscillatoryComplexJet) {
  // f = e^{i 3u}: f^(k) = (3i)^k f
  const std::complex<double> I(0, 1);
  const Jet j = ridders_jet([&](double u) { return std::exp(3.0 * I * u); }, -0.4);
  std::complex<double> want = std::exp(-1.2 * I);
  for (int k = 0; k < 5; ++k, want *= 3.0 * I) EXPECT_LT(std::abs(j.d[k] - want), 1e-8 * std::abs(want)) << k;
}

TEST(Ridders, ErrorEstimatesAreHonest) {
  const Jet j = ridders_jet([](double u) { return std::complex<double>(std::sin(u)); }, 1.1);
  const double want[5] = {std::sin(1.1), std::cos(1.1), -std::sin(1.1), -std::cos(1.1), std::sin(1.1)};
  for (int k = 1; k < 5; ++k) EXPECT_LE(std::abs(j.d[k].real() - want[k]), 10 * j.err[k] + 1e-15) << k;
}
