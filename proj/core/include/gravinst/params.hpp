#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gravinst/rational.hpp"

namespace gravinst {

/// Physical inputs of the multicomponent medium. Component lists are
/// parallel: gammas[i], omegas[i] and ks[i] describe component i.
struct ModelParams {
  Rational eta;                  // expansion-law index, H = eta / t
  std::vector<Rational> gammas;  // polytropic indices
  std::vector<Rational> omegas;  // density fractions, sum to 1
  std::vector<double> ks;        // wave constants k_i >= 0

  std::size_t components() const { return gammas.size(); }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// eta in {1/2, 2/3} and every gamma in [2/3, 2].
  bool catalogued() const;
};

enum class Regime { Alpha1Zero, Generic, IntegerDiff };

std::string to_string(Regime regime);

/// Exact symbolic companions of DerivedParams, available whenever eta, gamma
/// and Omega_1 are rational.
struct ExactParams {
  Rational eta;
  Rational gamma;
  Rational omega1;
  Rational alpha_i;
  Rational alpha;
  std::array<QuadSurd, 4> b_star;
  Rational a_radicand;                 // a* = -1 +- sqrt(a_radicand)
  std::optional<std::array<QuadSurd, 2>> a_star;  // empty when a_radicand < 0
};

/// Indicial data of the reduced fourth-order problem for one component.
struct DerivedParams {
  double eta = 0;
  double gamma = 0;
  double omega1 = 0;
  double k1 = 0;
  double alpha_i = 0;  // 2(2 - eta - gamma)
  double alpha = 0;    // -(2 eta - 1)/2
  bool alpha1_zero = false;

  /// Undefined (NaN) when alpha1_zero.
  std::array<double, 4> b_star{};
  /// Complex only when the a* radicand is negative (complex_a == true).
  std::array<std::complex<double>, 2> a_star{};
  bool complex_a = false;

  std::optional<ExactParams> exact;

  /// x = k1^2 t^alpha_i / alpha_i^2; requires !alpha1_zero.
  double x_of_t(double t) const;
  double t_of_x(double x) const;
  /// alpha^2 = (2 eta - 1)^2 / 4
  double beta() const { return alpha * alpha; }
};

/// Derives the indicial parameters of component `component_index`.
DerivedParams derive_params(const ModelParams& mp, std::size_t component_index = 0);

/// Floating-point entry; integer-difference tests on the result fall back to a
/// 1e-9 tolerance.
DerivedParams derive_params_real(double eta, double gamma, double omega1, double k1);

struct PoleReport {
  /// b*_i - b*_j for the pairs in kDiffPairs order.
  std::array<double, 6> pairwise_diffs{};
  std::optional<std::array<QuadSurd, 6>> exact_diffs;
  /// Pairs (i, j), 1-based, whose difference is an integer (including zero).
  std::vector<std::pair<int, int>> integer_pairs;
  int max_order = 1;
  Regime regime = Regime::Generic;
  bool symbolic = false;

  /// Partition of {0,1,2,3} into classes whose b* differ by integers; each
  /// class sorted by decreasing b*.
  std::vector<std::vector<int>> integer_classes;
};

inline constexpr std::array<std::pair<int, int>, 6> kDiffPairs{{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};

/// Numeric integer test used when exact values are unavailable.
inline constexpr double kIntegerTolerance = 1e-9;

/// Requires dp.alpha1_zero == false for pole data; an ALPHA1_ZERO report has
/// no differences.
PoleReport classify_poles(const DerivedParams& dp);

struct Table21Row {
  Rational eta;
  Rational gamma;
  DerivedParams params;  // computed at Omega_1 = 1/2, k1 = 1
};

struct Table22Row {
  Rational eta;
  Rational gamma;
  std::array<QuadSurd, 4> b_star;
  std::array<QuadSurd, 6> diffs;
};

struct ParameterTables {
  std::vector<Table21Row> table21;  // 10 rows
  std::vector<Table22Row> table22;  // 9 rows (alpha_i != 0)
};

/// The ten catalogued (eta, gamma) pairs, in publication order.
const std::vector<std::pair<Rational, Rational>>& catalogue_rows();

ParameterTables emit_tables();

}  // namespace gravinst
