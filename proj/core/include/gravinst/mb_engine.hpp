#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "gravinst/params.hpp"
#include "gravinst/specfun.hpp"

namespace gravinst {

using cplx = std::complex<double>;

/// Gamma(slope * s + offset); slope is +1 or -1.
struct GammaFactor {
  int slope = 1;
  cplx offset;
};

enum class Direction { Left, Right };

std::string to_string(Direction d);

/// (s - root)^power. A negative power introduces a pole at `root`, which is
/// attributed to the chain side `side`.
struct RationalFactor {
  cplx root;
  int power = -1;
  Direction side = Direction::Left;
};

/// scale * prod Gamma(num) / prod Gamma(den) * prod (s - r)^p * (x e^{i rotation})^{-s}
struct MBIntegrand {
  std::vector<GammaFactor> numerator;
  std::vector<GammaFactor> denominator;
  std::vector<RationalFactor> rational;
  cplx scale{1.0, 0.0};
  double rotation = 0;  // 0, +pi or -pi
  std::string label;

  cplx eval(cplx s, double x) const;
  /// log of eval(s, x) (branch unspecified); avoids overflow far from the real axis.
  cplx log_eval(cplx s, double x) const;

  /// (# left-pole factors) - (# right-pole factors) counting denominators with
  /// opposite sign. Positive: left residue sums converge for every x.
  int left_degree() const;
};

/// Meijer G^{m,n}_{p,q}(x e^{i rotation} | a; b) as a Mellin-Barnes integrand:
/// numerator Gamma(b_j + s), j <= m and Gamma(1 - a_j - s), j <= n;
/// denominator Gamma(1 - b_j - s), j > m and Gamma(a_j + s), j > n.
MBIntegrand meijer_integrand(int m, int n, const std::vector<cplx>& a, const std::vector<cplx>& b,
                             double rotation = 0);

enum class IntegrandKind {
  G_2_4_1_2,  // finite-t basis, ascending series
  G_2_4_2_1,  // finite-t partner producing ln x terms in an integer class
  G_2_4_3_2,
  G_2_4_4_1,  // near-infinity basis
  G_2_4_4_0,  // near-infinity, rotated argument
};

std::string to_string(IntegrandKind kind);

/// Builds G^{m,n}_{2,4}(x | 1 + a*_1, 1 + a*_2; b*_{order[0]}, ..., b*_{order[3]}).
/// `b_order` holds 0-based indices into dp.b_star. swap_a interchanges a*_1, a*_2.
MBIntegrand build_integrand(IntegrandKind kind, const DerivedParams& dp, std::array<int, 4> b_order = {0, 1, 2, 3},
                            double rotation = 0, bool swap_a = false);

/// Rewrites every pair Gamma(s + d1) / Gamma(d2 - s) with -(d1 + d2) = K a
/// nonnegative integer as (-1)^{K+1} Gamma(s + d1 + K + 1) / Gamma(d2 + K + 1 - s),
/// which removes the pole/zero coincidence at s = -d1.
MBIntegrand remove_cancellations(const MBIntegrand& ib);

/// Net pole order at s (0 when regular or cancelled). Throws std::domain_error
/// when left and right chains collide at s.
int pole_order_at(const MBIntegrand& ib, cplx s);

struct PoleInfo {
  cplx location;
  int order = 0;
  int chain = 0;  // index of the merged chain (congruence class mod 1)
};

/// Poles of one side with positive net order, at most `max_chain` levels per
/// merged chain, ordered chain by chain starting from each chain's head.
std::vector<PoleInfo> enumerate_poles(const MBIntegrand& ib, Direction direction, int max_chain);

struct ResidueSum : SeriesResult<cplx> {
  /// value == sum_q log_parts[q] * L^q with L = ln x + i rotation.
  std::vector<cplx> log_parts;
  int max_order = 0;
  int poles_used = 0;
  /// Head pole and partial sum of each merged chain.
  std::vector<std::pair<cplx, cplx>> chain_sums;
};

/// Sum of residues on one side: the left sum equals the contour integral; the
/// right sum is its negative-oriented counterpart. Right sums of integrands
/// with left_degree() > 0 are asymptotic and are truncated at their smallest
/// term; they are accepted for x >= kRightSumMinX only.
ResidueSum residue_sum(const MBIntegrand& ib, Direction direction, double x, const SeriesOptions& opts = {});

inline constexpr double kRightSumMinX = 1.0;

struct QuadratureOptions {
  double tol = 1e-10;
  /// Integration stops once the integrand falls below truncation * peak.
  double truncation = 1e-18;
  int max_depth = 12;
};

/// Direct numerical evaluation of (1 / 2 pi i) int_L integrand ds. Poles on
/// the wrong side of the chosen line are picked up by numerical circle
/// integrals. NaN contour_shift selects one automatically.
SeriesResult<cplx> contour_quadrature(const MBIntegrand& ib, double x, double contour_shift,
                                      const QuadratureOptions& opts = {});

/// Midpoint of the widest gap between the real parts of nearby poles.
double default_contour_shift(const MBIntegrand& ib);

}  // namespace gravinst
