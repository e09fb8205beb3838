#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "gravinst/numdiff.hpp"
#include "gravinst/params.hpp"
#include "gravinst/solutions.hpp"

namespace gravinst {

struct IntegratorStats {
  std::size_t steps = 0;
  double rtol = 0;
  /// max |delta(rtol) - delta(rtol / 32)| / max |delta| over the output grid.
  double achieved = 0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> delta;  // [component][sample]
  std::vector<std::vector<double>> deriv;  // d delta / dt
  IntegratorStats stats;
};

struct InitialData {
  double t0 = 1;
  std::vector<double> delta;
  std::vector<double> ddelta;  // d delta / dt at t0
};

/// Integrates the coupled second-order system in u = ln t with an embedded
/// Runge-Kutta-Fehlberg 7(8) pair, reporting on t_grid (t_grid[0] == init.t0).
Trajectory integrate_system(const ModelParams& mp, const InitialData& init, const std::vector<double>& t_grid,
                            double rtol = 1e-10);

/// Same on n log-spaced points from t0 to t_end.
Trajectory integrate_system(const ModelParams& mp, const InitialData& init, double t_end, double rtol = 1e-10,
                            int n = 200);

/// delta_0 and its first three t-derivatives at t from the state of all components.
std::array<double, 4> delta_jet(const ModelParams& mp, double t, const std::vector<double>& delta,
                                const std::vector<double>& ddelta);

struct ResidualPoint {
  double t = 0;
  double rel = 0;    // |sum of terms| / max term
  double scale = 0;  // max term magnitude
};

struct ResidualProfile {
  std::vector<ResidualPoint> points;
  double max_rel = 0;
};

/// Applies the fundamental fourth-order operator (single-component special
/// case: other components carry k = 0) to phi by Ridders differences in ln t.
ResidualProfile operator_residual(const std::function<std::complex<double>(double)>& phi, const DerivedParams& dp,
                                  double omega1, const std::vector<double>& t_grid, const RiddersOptions& fd = {});

struct Comparison {
  double max_rel_deviation = 0;
  double fit_condition = 0;
  double t_switch = 0;  // NaN when no switchover inside [t0, t_end]
  IntegratorStats ode;
  std::vector<double> t;
  std::vector<double> delta_numeric;
  std::vector<double> delta_analytic;
};

/// Numeric trajectory against the analytic solution fitted to its initial jet.
/// Component 0 is compared; the others must have k = 0.
Comparison compare_analytic(const ModelParams& mp, const InitialData& init, double t_end, double rtol = 1e-11,
                            int n = 200, const Validity& v = {});

/// Log-spaced grid with `per_decade` points per decade.
std::vector<double> log_grid(double t_lo, double t_hi, int per_decade);

}  // namespace gravinst
