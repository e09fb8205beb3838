#include "gravinst/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gravinst {
namespace {

const Rational kTwoThirds(2, 3);

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

void ModelParams::validate() const {
  const std::size_t m = gammas.size();
  if (m == 0) throw std::invalid_argument("gammas: at least one component required");
  if (omegas.size() != m) throw std::invalid_argument("omegas: expected " + std::to_string(m) + " entries");
  if (ks.size() != m) throw std::invalid_argument("ks: expected " + std::to_string(m) + " entries");
  double total = 0;
  for (const auto& w : omegas) total += w.to_double();
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("omegas: fractions must sum to 1");
  for (double k : ks)
    if (!(k >= 0) || !std::isfinite(k)) throw std::invalid_argument("ks: wave constants must be finite and >= 0");
}

bool ModelParams::catalogued() const {
  if (!(eta == Rational(1, 2) || eta == Rational(2, 3))) return false;
  return std::all_of(gammas.begin(), gammas.end(),
                     [](const Rational& g) { return g >= Rational(2, 3) && g <= Rational(2); });
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Alpha1Zero: return "ALPHA1_ZERO";
    case Regime::Generic: return "GENERIC";
    case Regime::IntegerDiff: return "INTEGER_DIFF";
  }
  return "UNKNOWN";
}

double DerivedParams::x_of_t(double t) const {
  if (alpha1_zero) throw std::domain_error("x(t) undefined when alpha_1 = 0");
  return k1 * k1 * std::pow(t, alpha_i) / (alpha_i * alpha_i);
}

double DerivedParams::t_of_x(double x) const {
  if (alpha1_zero) throw std::domain_error("t(x) undefined when alpha_1 = 0");
  if (k1 == 0) throw std::domain_error("t(x) undefined when k_1 = 0");
  return std::pow(x * alpha_i * alpha_i / (k1 * k1), 1.0 / alpha_i);
}

DerivedParams derive_params(const ModelParams& mp, std::size_t component_index) {
  mp.validate();
  if (component_index >= mp.components())
    throw std::out_of_range("component_index " + std::to_string(component_index) + " out of range");

  ExactParams ex;
  ex.eta = mp.eta;
  ex.gamma = mp.gammas[component_index];
  ex.omega1 = mp.omegas[component_index];
  ex.alpha_i = Rational(2) * (Rational(2) - ex.eta - ex.gamma);
  ex.alpha = -(Rational(2) * ex.eta - Rational(1)) / Rational(2);
  const Rational beta = ex.alpha * ex.alpha;

  DerivedParams dp;
  dp.eta = ex.eta.to_double();
  dp.gamma = ex.gamma.to_double();
  dp.omega1 = ex.omega1.to_double();
  dp.k1 = mp.ks[component_index];
  dp.alpha_i = ex.alpha_i.to_double();
  dp.alpha = ex.alpha.to_double();
  dp.alpha1_zero = ex.alpha_i.is_zero();

  if (dp.alpha1_zero) {
    dp.b_star.fill(nan());
    dp.a_star.fill({nan(), nan()});
    dp.exact = ex;
    return dp;
  }

  const Rational inv_a2 = Rational(1) / (ex.alpha_i * ex.alpha_i);
  const QuadSurd b1 = QuadSurd::sqrt_of(beta * inv_a2);
  const QuadSurd b3 = QuadSurd::sqrt_of((beta + kTwoThirds) * inv_a2);
  ex.b_star = {b1, -b1, b3, -b3};
  ex.a_radicand = (beta + kTwoThirds - kTwoThirds * ex.omega1) * inv_a2;
  if (ex.a_radicand >= Rational(0)) {
    const QuadSurd root = QuadSurd::sqrt_of(ex.a_radicand);
    ex.a_star = std::array<QuadSurd, 2>{QuadSurd(Rational(-1)) + root, QuadSurd(Rational(-1)) - root};
  }

  for (int j = 0; j < 4; ++j) dp.b_star[j] = ex.b_star[j].to_double();
  const double rad = ex.a_radicand.to_double();
  if (ex.a_star) {
    dp.a_star = {(*ex.a_star)[0].to_double(), (*ex.a_star)[1].to_double()};
  } else {
    dp.complex_a = true;
    const double im = std::sqrt(-rad);
    dp.a_star = {std::complex<double>(-1, im), std::complex<double>(-1, -im)};
  }
  dp.exact = ex;
  return dp;
}

DerivedParams derive_params_real(double eta, double gamma, double omega1, double k1) {
  DerivedParams dp;
  dp.eta = eta;
  dp.gamma = gamma;
  dp.omega1 = omega1;
  dp.k1 = k1;
  dp.alpha_i = 2 * (2 - eta - gamma);
  dp.alpha = -(2 * eta - 1) / 2;
  dp.alpha1_zero = std::abs(dp.alpha_i) < kIntegerTolerance;
  if (dp.alpha1_zero) {
    dp.alpha_i = 0;
    dp.b_star.fill(nan());
    dp.a_star.fill({nan(), nan()});
    return dp;
  }
  const double beta = dp.beta();
  const double a2 = dp.alpha_i * dp.alpha_i;
  const double b1 = std::sqrt(beta / a2);
  const double b3 = std::sqrt((beta + 2.0 / 3.0) / a2);
  dp.b_star = {b1, -b1, b3, -b3};
  const double rad = (beta + 2.0 / 3.0 - 2.0 / 3.0 * omega1) / a2;
  if (rad >= 0) {
    dp.a_star = {-1 + std::sqrt(rad), -1 - std::sqrt(rad)};
  } else {
    dp.complex_a = true;
    dp.a_star = {std::complex<double>(-1, std::sqrt(-rad)), std::complex<double>(-1, -std::sqrt(-rad))};
  }
  return dp;
}

PoleReport classify_poles(const DerivedParams& dp) {
  PoleReport pr;
  if (dp.alpha1_zero) {
    pr.regime = Regime::Alpha1Zero;
    pr.pairwise_diffs.fill(nan());
    pr.max_order = 0;
    return pr;
  }

  std::array<bool, 6> is_int{};
  if (dp.exact) {
    std::array<QuadSurd, 6> diffs;
    for (std::size_t p = 0; p < kDiffPairs.size(); ++p) {
      auto [i, j] = kDiffPairs[p];
      diffs[p] = dp.exact->b_star[i - 1] - dp.exact->b_star[j - 1];
      pr.pairwise_diffs[p] = diffs[p].to_double();
      is_int[p] = diffs[p].is_integer();
    }
    pr.exact_diffs = diffs;
    pr.symbolic = true;
  } else {
    for (std::size_t p = 0; p < kDiffPairs.size(); ++p) {
      auto [i, j] = kDiffPairs[p];
      const double d = dp.b_star[i - 1] - dp.b_star[j - 1];
      pr.pairwise_diffs[p] = d;
      is_int[p] = std::abs(d - std::round(d)) < kIntegerTolerance;
    }
  }

  std::array<int, 4> parent{0, 1, 2, 3};
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t p = 0; p < kDiffPairs.size(); ++p) {
    if (!is_int[p]) continue;
    auto [i, j] = kDiffPairs[p];
    pr.integer_pairs.emplace_back(i, j);
    parent[find(i - 1)] = find(j - 1);
  }
  pr.regime = pr.integer_pairs.empty() ? Regime::Generic : Regime::IntegerDiff;

  for (int v = 0; v < 4; ++v) {
    const int root = find(v);
    auto it = std::find_if(pr.integer_classes.begin(), pr.integer_classes.end(),
                           [&](const std::vector<int>& cls) { return find(cls.front()) == root; });
    if (it == pr.integer_classes.end())
      pr.integer_classes.push_back({v});
    else
      it->push_back(v);
  }
  for (auto& cls : pr.integer_classes) {
    std::stable_sort(cls.begin(), cls.end(), [&](int a, int b) { return dp.b_star[a] > dp.b_star[b]; });
    pr.max_order = std::max(pr.max_order, static_cast<int>(cls.size()));
  }
  return pr;
}

const std::vector<std::pair<Rational, Rational>>& catalogue_rows() {
  static const std::vector<std::pair<Rational, Rational>> rows = {
      {Rational(2, 3), Rational(4, 3)}, {Rational(2, 3), Rational(1)},    {Rational(2, 3), Rational(2, 3)},
      {Rational(2, 3), Rational(5, 3)}, {Rational(2, 3), Rational(2)},    {Rational(1, 2), Rational(4, 3)},
      {Rational(1, 2), Rational(1)},    {Rational(1, 2), Rational(2, 3)}, {Rational(1, 2), Rational(5, 3)},
      {Rational(1, 2), Rational(2)},
  };
  return rows;
}

ParameterTables emit_tables() {
  ParameterTables tables;
  for (const auto& [eta, gamma] : catalogue_rows()) {
    ModelParams mp{eta, {gamma}, {Rational(1)}, {1.0}};
    // Omega_1 = 1/2 with a second, pressureless component.
    mp.gammas.push_back(Rational(1));
    mp.omegas = {Rational(1, 2), Rational(1, 2)};
    mp.ks = {1.0, 0.0};
    DerivedParams dp = derive_params(mp, 0);
    tables.table21.push_back({eta, gamma, dp});
    if (dp.alpha1_zero) continue;
    Table22Row row{eta, gamma, dp.exact->b_star, {}};
    PoleReport pr = classify_poles(dp);
    row.diffs = *pr.exact_diffs;
    tables.table22.push_back(row);
  }
  return tables;
}

}  // namespace gravinst
