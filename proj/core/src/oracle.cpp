#include "gravinst/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <boost/numeric/odeint.hpp>

namespace gravinst {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

struct System {
  double eta;
  std::vector<double> k2, alpha, omega;

  void operator()(const State& y, State& dy, double u) const {
    const std::size_t m = omega.size();
    double src = 0;
    for (std::size_t j = 0; j < m; ++j) src += omega[j] * y[j];
    src *= 2.0 / 3.0;
    for (std::size_t i = 0; i < m; ++i) {
      dy[i] = y[m + i];
      dy[m + i] = (1 - 2 * eta) * y[m + i] - k2[i] * std::exp(alpha[i] * u) * y[i] + src;
    }
  }
};

System make_system(const ModelParams& mp) {
  System s;
  s.eta = mp.eta.to_double();
  for (std::size_t i = 0; i < mp.components(); ++i) {
    s.k2.push_back(mp.ks[i] * mp.ks[i]);
    s.alpha.push_back(2 * (2 - s.eta - mp.gammas[i].to_double()));
    s.omega.push_back(mp.omegas[i].to_double());
  }
  return s;
}

std::vector<std::vector<double>> run(const System& sys, const InitialData& init, const std::vector<double>& t_grid,
                                     double rtol, std::size_t& steps) {
  const std::size_t m = sys.omega.size();
  State y(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = init.delta[i];
    y[m + i] = init.t0 * init.ddelta[i];
  }
  std::vector<double> u;
  u.reserve(t_grid.size());
  for (double t : t_grid) u.push_back(std::log(t));
  std::vector<std::vector<double>> out;
  auto stepper = odeint::make_controlled(rtol * 1e-3, rtol, odeint::runge_kutta_fehlberg78<State>());
  const double dt0 = u.size() > 1 ? std::max(1e-6, (u.back() - u.front()) / 1000) : 1e-3;
  steps = odeint::integrate_times(stepper, sys, y, u.begin(), u.end(), dt0,
                                  [&](const State& s, double) { out.push_back(s); });
  return out;
}

}  // namespace

std::vector<double> log_grid(double t_lo, double t_hi, int per_decade) {
  if (!(t_lo > 0) || !(t_hi > t_lo) || per_decade < 1) throw std::invalid_argument("log_grid: need 0 < t_lo < t_hi");
  const double decades = std::log10(t_hi / t_lo);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * per_decade)) + 1);
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n - 1));
  g.back() = t_hi;
  return g;
}

Trajectory integrate_system(const ModelParams& mp, const InitialData& init, const std::vector<double>& t_grid, double rtol) {
  mp.validate();
  if (!(init.t0 > 0)) throw std::domain_error("integrate_system: t0 must be positive (t = 0 is singular)");
  if (rtol < 1e-13) throw std::invalid_argument("integrate_system: rtol must be >= 1e-13");
  const std::size_t m = mp.components();
  if (init.delta.size() != m || init.ddelta.size() != m)
    throw std::invalid_argument("integrate_system: initial data must have one entry per component");
  if (t_grid.empty() || t_grid.front() != init.t0) throw std::invalid_argument("integrate_system: t_grid must start at t0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("integrate_system: t_grid must be strictly increasing");

  const System sys = make_system(mp);
  Trajectory tr;
  tr.t = t_grid;
  tr.stats.rtol = rtol;
  std::size_t steps = 0, steps_fine = 0;
  std::vector<std::vector<double>> coarse, fine;
  try {
    coarse = run(sys, init, t_grid, rtol, steps);
    fine = run(sys, init, t_grid, std::max(rtol / 32, 1e-15), steps_fine);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("integrate_system: step size control failed: ") + e.what());
  }
  tr.stats.steps = steps;
  tr.delta.assign(m, std::vector<double>(t_grid.size()));
  tr.deriv.assign(m, std::vector<double>(t_grid.size()));
  double scale = 0, diff = 0;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      tr.delta[i][k] = coarse[k][i];
      tr.deriv[i][k] = coarse[k][m + i] / t_grid[k];
      if (!std::isfinite(coarse[k][i])) {
        std::ostringstream os;
        os << "integrate_system: non-finite solution at t = " << t_grid[k];
        throw std::runtime_error(os.str());
      }
      scale = std::max(scale, std::abs(coarse[k][i]));
      diff = std::max(diff, std::abs(coarse[k][i] - fine[k][i]));
    }
  }
  tr.stats.achieved = scale > 0 ? diff / scale : 0;
  return tr;
}

Trajectory integrate_system(const ModelParams& mp, const InitialData& init, double t_end, double rtol, int n) {
  if (!(t_end > init.t0)) throw std::invalid_argument("integrate_system: t_end must exceed t0");
  std::vector<double> g(static_cast<std::size_t>(std::max(2, n)));
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = init.t0 * std::pow(t_end / init.t0, static_cast<double>(i) / static_cast<double>(g.size() - 1));
  g.front() = init.t0;
  return integrate_system(mp, init, g, rtol);
}

std::array<double, 4> delta_jet(const ModelParams& mp, double t, const std::vector<double>& delta,
                                const std::vector<double>& ddelta) {
  const System sys = make_system(mp);
  double src = 0, dsrc = 0;
  for (std::size_t j = 0; j < sys.omega.size(); ++j) {
    src += sys.omega[j] * delta[j];
    dsrc += sys.omega[j] * ddelta[j];
  }
  src *= 2.0 / 3.0;
  dsrc *= 2.0 / 3.0;
  const double k2 = sys.k2[0], a = sys.alpha[0], eta = sys.eta;
  const double d0 = delta[0], d1 = ddelta[0];
  const double ta = std::pow(t, a);
  const double d2 = (src - 2 * eta * t * d1 - k2 * ta * d0) / (t * t);
  const double d3 = (dsrc - (2 + 2 * eta) * t * d2 - 2 * eta * d1 - k2 * a * ta / t * d0 - k2 * ta * d1) / (t * t);
  return {d0, d1, d2, d3};
}

ResidualProfile operator_residual(const std::function<std::complex<double>(double)>& phi, const DerivedParams& dp,
                                  double omega1, const std::vector<double>& t_grid, const RiddersOptions& fd) {
  using cplx = std::complex<double>;
  const double beta = dp.beta();
  const double b = -beta;  // other components, k = 0
  const double k2 = dp.k1 * dp.k1;
  const double a1 = dp.alpha1_zero ? 0.0 : dp.alpha_i;
  auto b1 = [&](double t) { return k2 * std::pow(t, a1) - beta; };

  ResidualProfile prof;
  for (double t : t_grid) {
    std::unordered_map<double, cplx> cache;
    auto val = [&](double u) {
      auto it = cache.find(u);
      if (it != cache.end()) return it->second;
      const cplx v = phi(std::exp(u));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "operator_residual: non-finite phi at t = " << std::exp(u);
        throw std::domain_error(os.str());
      }
      cache.emplace(u, v);
      return v;
    };
    // Steps are taken in ln x so the stencil width does not depend on alpha_1.
    const double c = a1 != 0 ? a1 : 1.0;
    const double v0 = c * std::log(t);
    auto in_v = [&](const std::function<cplx(double)>& f) {
      Jet j = ridders_jet([&](double v) { return f(v / c); }, v0, fd);
      double ck = 1;
      for (int k = 1; k < 5; ++k) {
        ck *= c;
        j.d[k] *= ck;
        j.err[k] *= std::abs(ck);
      }
      return j;
    };
    const Jet jp = in_v(val);
    const Jet jb = in_v([&](double u) { return b1(std::exp(u)) * val(u); });
    const cplx p = jp.d[0], d2 = jp.d[2], d4 = jp.d[4];
    const double b1t = b1(t);
    const cplx t1 = d4;
    const cplx t2 = jb.d[2];
    const cplx t3 = (2.0 / 3.0) * (d2 + b1t * p);
    const cplx t4 = (2.0 / 3.0) * b1t * omega1 * p + b * (d2 + b1t * p) - (2.0 / 3.0) * b * omega1 * p;
    // |phi| keeps the scale meaningful when every term vanishes (e.g. phi = ln t)
    const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), std::abs(p)});
    ResidualPoint rp;
    rp.t = t;
    rp.scale = scale;
    rp.rel = scale > 0 ? std::abs(t1 + t2 - t3 + t4) / scale : 0;
    prof.max_rel = std::max(prof.max_rel, rp.rel);
    prof.points.push_back(rp);
  }
  return prof;
}

Comparison compare_analytic(const ModelParams& mp, const InitialData& init, double t_end, double rtol, int n,
                            const Validity& v) {
  mp.validate();
  for (std::size_t j = 1; j < mp.components(); ++j)
    if (mp.ks[j] != 0)
      throw std::domain_error("compare_analytic: the analytic solution needs k = 0 for every component but the first");
  const DerivedParams dp = derive_params(mp, 0);
  const Trajectory tr = integrate_system(mp, init, t_end, rtol, n);
  const auto dj = delta_jet(mp, init.t0, init.delta, init.ddelta);
  const PhiJet pj = phi_jet_from_delta(dp.alpha, init.t0, dj);

  Comparison out;
  out.ode = tr.stats;
  out.t = tr.t;
  out.delta_numeric = tr.delta[0];
  out.t_switch = std::numeric_limits<double>::quiet_NaN();
  std::function<double(double)> analytic;
  std::optional<GrowthSolution> growth;
  SolutionSet powers;
  Coeffs c{};
  if (dp.alpha1_zero) {
    powers = basis_power_law(dp.eta, dp.omega1, dp.k1);
    const FitResult fr = fit_coefficients(powers, init.t0, pj);
    out.fit_condition = fr.condition;
    c = fr.coeffs;
    analytic = [&](double t) { return delta_of_t(powers, c, t).delta; };
  } else {
    growth.emplace(dp, v);
    const FitResult fr = growth->fit(init.t0, pj);
    out.fit_condition = fr.condition;
    const double ts = growth->t_switch();
    if (ts > std::min(init.t0, t_end) && ts < std::max(init.t0, t_end)) out.t_switch = ts;
    analytic = [&](double t) { return growth->delta(t).delta; };
  }
  double scale = 0, dev = 0;
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const double a = analytic(tr.t[k]);
    out.delta_analytic.push_back(a);
    scale = std::max(scale, std::abs(tr.delta[0][k]));
    dev = std::max(dev, std::abs(a - tr.delta[0][k]));
  }
  out.max_rel_deviation = scale > 0 ? dev / scale : dev;
  return out;
}

}  // namespace gravinst
