#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gravinst/mb_engine.hpp"
#include "gravinst/params.hpp"

namespace gravinst {

enum class BasisKind { PowerLaw, FiniteT, NearInf };

std::string to_string(BasisKind kind);

/// Default x-windows of the residue bases. Both are evaluated by convergent
/// ascending series; the windows bound the cancellation loss.
struct Validity {
  double finite_t_max = 5.0;
  double near_inf_min = 1.0;
  double near_inf_max = 20.0;
  /// Finite-t to near-infinity handover used by piecewise evaluation.
  double x_switch = 2.0;
};

struct BasisValue {
  cplx value;
  double err = 0;
};

/// One solution Phi of the reduced fourth-order equation.
class BasisSolution {
 public:
  /// t^d (ln t)^log_power
  static BasisSolution power_law(cplx d, int log_power);
  /// Residue series of `ib` in x = x_scale * t^alpha1, valid for x in [x_lo, x_hi].
  static BasisSolution residue(BasisKind kind, MBIntegrand ib, double x_scale, double alpha1, double x_lo, double x_hi);

  BasisKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  cplx exponent() const { return exponent_; }
  int log_power() const { return log_power_; }
  bool log_terms() const { return log_terms_; }
  const MBIntegrand& integrand() const { return integrand_; }

  double x_of_t(double t) const;
  double t_of_x(double x) const;
  /// Recommended t-range, [0, inf) for power laws.
  std::pair<double, double> t_range() const;
  std::pair<double, double> x_range() const { return {x_lo_, x_hi_}; }
  bool valid_at(double t) const;

  /// Phi(t); throws std::domain_error outside validity.
  BasisValue eval(double t) const;
  /// Same without the validity check (residue series converge for every x).
  BasisValue eval_unchecked(double t) const;
  /// Residue kinds only: evaluation directly in x.
  BasisValue eval_x(double x) const;

 private:
  BasisKind kind_ = BasisKind::PowerLaw;
  std::string name_;
  cplx exponent_{};
  int log_power_ = 0;
  bool log_terms_ = false;
  MBIntegrand integrand_;
  double x_scale_ = 1, alpha1_ = 0, x_lo_ = 0, x_hi_ = 0;
};

struct SolutionSet {
  std::array<BasisSolution, 4> basis;
  DerivedParams dp;
  Regime regime = Regime::Generic;

  BasisKind kind() const { return basis[0].kind(); }
  bool valid_at(double t) const;
};

using Coeffs = std::array<cplx, 4>;

/// Roots of x^4 - B x^2 + C for the alpha_1 = 0 reduction, ordered
/// (+r1, -r1, +r2, -r2) with r1^2 >= r2^2 when real.
std::array<cplx, 4> quartic_roots(double eta, double omega1, double k1);

/// B and C of x^4 - B x^2 + C.
std::pair<double, double> quartic_coefficients(double eta, double omega1, double k1);

/// |x^4 - B x^2 + C| at r.
double quartic_residual(double eta, double omega1, double k1, cplx r);

/// Power-law basis; a repeated root contributes t^d ln t.
SolutionSet basis_power_law(double eta, double omega1, double k1);

/// Ascending-series basis: one G^{r+1,n}_{2,4} per member of each class of
/// b* differing by integers (r = position in the class), m + n odd.
SolutionSet basis_finite_t(const DerivedParams& dp, const PoleReport& pr, const Validity& v = {});

/// F1 = G^{4,1}_{2,4}(x), F2 = F1 with a*_1, a*_2 interchanged,
/// F3, F4 = G^{4,0}_{2,4}(x e^{+-i pi}).
SolutionSet basis_near_inf(const DerivedParams& dp, const PoleReport& pr, const Validity& v = {});

struct DeltaValue {
  double delta = 0;
  double err = 0;
  /// Imaginary part of the combination; nonzero only when it exceeds 1e-10 |delta|.
  double imag = 0;
};

/// delta = t^alpha sum_j c_j Phi_j(t).
DeltaValue delta_of_t(const SolutionSet& ss, const Coeffs& coeffs, double t);

/// Phi and its first three t-derivatives.
using PhiJet = std::array<cplx, 4>;

struct FitResult {
  Coeffs coeffs{};
  double condition = 0;
  bool ill_conditioned = false;
};

inline constexpr double kIllConditioned = 1e12;

/// Jet of each basis member at t0: rows k = 0..3 are d^k/dt^k, columns basis members.
Eigen::Matrix4cd basis_jet(const SolutionSet& ss, double t0);

FitResult fit_coefficients(const SolutionSet& ss, double t0, const PhiJet& values);

/// Phi jet from a delta jet (delta and three t-derivatives) at t.
PhiJet phi_jet_from_delta(double alpha, double t, const std::array<double, 4>& delta_jet);

struct CrossFit {
  /// finite_t member j == sum_k transfer(k, j) * near_inf member k on the overlap.
  Eigen::Matrix4cd transfer;
  double max_rel_residual = 0;
  std::vector<double> x_points;
};

/// Least-squares expansion of the finite-t basis in the near-infinity basis on
/// log-spaced x in [x_lo, x_hi].
CrossFit cross_fit(const SolutionSet& finite_t, const SolutionSet& near_inf, double x_lo = 1.0, double x_hi = 5.0,
                   int points = 24);

/// Smallest over largest singular value of the N x 4 collocation matrix.
double collocation_rank_ratio(const SolutionSet& ss, const std::vector<double>& t_points, int* rank = nullptr);

/// Piecewise analytic solution: finite-t basis for x <= x_switch, near-infinity
/// basis beyond, coefficients carried across by the cross fit.
class GrowthSolution {
 public:
  GrowthSolution(const DerivedParams& dp, const Validity& v = {});

  const SolutionSet& finite_t() const { return finite_; }
  const SolutionSet& near_inf() const { return near_; }
  const CrossFit& crossing() const { return cross_; }
  const Validity& validity() const { return v_; }

  /// Coefficients in the basis that is used at t.
  void set_coefficients(const Coeffs& c, BasisKind in_basis);
  /// Fits coefficients to a Phi jet at t0 in whichever basis holds there.
  FitResult fit(double t0, const PhiJet& values);

  BasisKind basis_at(double t) const;
  DeltaValue delta(double t) const;
  double t_switch() const;

 private:
  DerivedParams dp_;
  Validity v_;
  SolutionSet finite_, near_;
  CrossFit cross_;
  Coeffs c_finite_{}, c_near_{};
};

}  // namespace gravinst
