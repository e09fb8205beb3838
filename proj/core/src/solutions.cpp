#include "gravinst/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gravinst/numdiff.hpp"

namespace gravinst {
namespace {

constexpr double kPi = std::numbers::pi;

SeriesOptions basis_series_options() {
  SeriesOptions o;
  o.tol = 1e-11;
  return o;
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Delta-derivatives (t d/dt)^k Phi_j at t0, k = 0..3, as a matrix [k][j].
Eigen::Matrix4cd delta_jet_matrix(const SolutionSet& ss, double t0) {
  Eigen::Matrix4cd m;
  for (int j = 0; j < 4; ++j) {
    const BasisSolution& b = ss.basis[static_cast<std::size_t>(j)];
    const Jet jet = ridders_jet([&](double u) { return b.eval_unchecked(std::exp(u)).value; }, std::log(t0));
    for (int k = 0; k < 4; ++k) m(k, j) = jet.d[static_cast<std::size_t>(k)];
  }
  return m;
}

// Delta jet from a t-derivative jet.
Eigen::Vector4cd to_delta_jet(double t, const PhiJet& v) {
  Eigen::Vector4cd d;
  d(0) = v[0];
  d(1) = t * v[1];
  d(2) = t * t * v[2] + t * v[1];
  d(3) = t * t * t * v[3] + 3.0 * t * t * v[2] + t * v[1];
  return d;
}

}  // namespace

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::PowerLaw: return "power_law";
    case BasisKind::FiniteT: return "finite_t";
    case BasisKind::NearInf: return "near_inf";
  }
  return "?";
}

BasisSolution BasisSolution::power_law(cplx d, int log_power) {
  BasisSolution b;
  b.kind_ = BasisKind::PowerLaw;
  b.exponent_ = d;
  b.log_power_ = log_power;
  b.log_terms_ = log_power > 0;
  std::ostringstream os;
  os << "t^" << (d.imag() == 0 ? fmt_num(d.real()) : "(" + fmt_num(d.real()) + "+" + fmt_num(d.imag()) + "i)");
  if (log_power == 1) os << " ln t";
  if (log_power > 1) os << " ln^" << log_power << " t";
  b.name_ = os.str();
  return b;
}

BasisSolution BasisSolution::residue(BasisKind kind, MBIntegrand ib, double x_scale, double alpha1, double x_lo,
                                     double x_hi) {
  BasisSolution b;
  b.kind_ = kind;
  b.name_ = ib.label;
  int order = 0;
  for (const auto& p : enumerate_poles(ib, Direction::Left, 8)) order = std::max(order, p.order);
  b.log_terms_ = order >= 2;
  b.integrand_ = std::move(ib);
  b.x_scale_ = x_scale;
  b.alpha1_ = alpha1;
  b.x_lo_ = x_lo;
  b.x_hi_ = x_hi;
  return b;
}

double BasisSolution::x_of_t(double t) const {
  if (kind_ == BasisKind::PowerLaw) throw std::domain_error("power-law basis has no x variable");
  return x_scale_ * std::pow(t, alpha1_);
}

double BasisSolution::t_of_x(double x) const {
  if (kind_ == BasisKind::PowerLaw) throw std::domain_error("power-law basis has no x variable");
  return std::pow(x / x_scale_, 1.0 / alpha1_);
}

std::pair<double, double> BasisSolution::t_range() const {
  if (kind_ == BasisKind::PowerLaw) return {0.0, HUGE_VAL};
  const double ta = x_lo_ > 0 ? t_of_x(x_lo_) : (alpha1_ > 0 ? 0.0 : HUGE_VAL);
  const double tb = t_of_x(x_hi_);
  return {std::min(ta, tb), std::max(ta, tb)};
}

bool BasisSolution::valid_at(double t) const {
  if (!(t > 0)) return false;
  if (kind_ == BasisKind::PowerLaw) return true;
  const double x = x_of_t(t);
  const double slack = 1e-12;
  return x >= x_lo_ * (1 - slack) && x <= x_hi_ * (1 + slack);
}

BasisValue BasisSolution::eval_x(double x) const {
  if (kind_ == BasisKind::PowerLaw) throw std::domain_error("eval_x: power-law basis has no x variable");
  const ResidueSum r = residue_sum(integrand_, Direction::Left, x, basis_series_options());
  return {r.value, r.abs_error_estimate};
}

BasisValue BasisSolution::eval_unchecked(double t) const {
  if (!(t > 0)) throw std::domain_error("basis evaluation needs t > 0");
  if (kind_ == BasisKind::PowerLaw) {
    const double lt = std::log(t);
    cplx v = std::exp(exponent_ * lt);
    for (int p = 0; p < log_power_; ++p) v *= lt;
    return {v, 0.0};
  }
  return eval_x(x_of_t(t));
}

BasisValue BasisSolution::eval(double t) const {
  if (!valid_at(t)) {
    std::ostringstream os;
    os << name_ << ": t = " << t << " (x = " << x_of_t(t) << ") outside validity x in [" << x_lo_ << ", " << x_hi_
       << "]; use the " << (kind_ == BasisKind::FiniteT ? "near-infinity" : "finite-t") << " basis";
    throw std::domain_error(os.str());
  }
  return eval_unchecked(t);
}

bool SolutionSet::valid_at(double t) const {
  return std::all_of(basis.begin(), basis.end(), [&](const BasisSolution& b) { return b.valid_at(t); });
}

std::pair<double, double> quartic_coefficients(double eta, double omega1, double k1) {
  const double beta = (2 * eta - 1) * (2 * eta - 1) / 4;
  const double k2 = k1 * k1;
  const double B = 2 * beta + 2.0 / 3.0 - k2;
  const double C = beta * beta + 2.0 / 3.0 * beta + (2.0 / 3.0 * omega1 - beta - 2.0 / 3.0) * k2;
  return {B, C};
}

std::array<cplx, 4> quartic_roots(double eta, double omega1, double k1) {
  const auto [B, C] = quartic_coefficients(eta, omega1, k1);
  const cplx disc = std::sqrt(cplx(B * B / 4 - C, 0));
  const cplx r1 = std::sqrt(cplx(B / 2) + disc);
  const cplx r2 = std::sqrt(cplx(B / 2) - disc);
  return {r1, -r1, r2, -r2};
}

double quartic_residual(double eta, double omega1, double k1, cplx r) {
  const auto [B, C] = quartic_coefficients(eta, omega1, k1);
  const cplx r2 = r * r;
  return std::abs(r2 * r2 - B * r2 + C);
}

SolutionSet basis_power_law(double eta, double omega1, double k1) {
  SolutionSet ss;
  ss.dp = derive_params_real(eta, 2 - eta, omega1, k1);
  ss.regime = Regime::Alpha1Zero;
  const auto d = quartic_roots(eta, omega1, k1);
  for (std::size_t j = 0; j < 4; ++j) {
    int repeats = 0;
    for (std::size_t i = 0; i < j; ++i)
      if (std::abs(d[i] - d[j]) <= 1e-9) ++repeats;
    ss.basis[j] = BasisSolution::power_law(d[j], repeats);
  }
  return ss;
}

namespace {

void require_meijer(const DerivedParams& dp, const char* who) {
  if (dp.alpha1_zero)
    throw std::domain_error(std::string(who) + ": alpha_1 = 0 (ALPHA1_ZERO); the solutions are the power laws of quartic_roots");
  if (dp.complex_a)
    throw std::domain_error(std::string(who) + ": complex a* indices; no catalogued basis for this Omega_1");
  if (dp.k1 <= 0) throw std::domain_error(std::string(who) + ": k_1 must be positive for the x variable");
}

double x_scale_of(const DerivedParams& dp) { return dp.k1 * dp.k1 / (dp.alpha_i * dp.alpha_i); }

}  // namespace

SolutionSet basis_finite_t(const DerivedParams& dp, const PoleReport& pr, const Validity& v) {
  require_meijer(dp, "basis_finite_t");
  SolutionSet ss;
  ss.dp = dp;
  ss.regime = pr.regime;
  std::size_t slot = 0;
  for (const auto& cls : pr.integer_classes) {
    for (std::size_t r = 0; r < cls.size(); ++r) {
      const int m = static_cast<int>(r) + 1;
      IntegrandKind kind = IntegrandKind::G_2_4_1_2;
      switch (m) {
        case 1: kind = IntegrandKind::G_2_4_1_2; break;
        case 2: kind = IntegrandKind::G_2_4_2_1; break;
        case 3: kind = IntegrandKind::G_2_4_3_2; break;
        default: kind = IntegrandKind::G_2_4_4_1; break;
      }
      std::array<int, 4> order{};
      std::vector<bool> used(4, false);
      std::size_t pos = 0;
      for (std::size_t i = 0; i <= r; ++i) {
        order[pos++] = cls[i];
        used[static_cast<std::size_t>(cls[i])] = true;
      }
      for (int i = 0; i < 4; ++i)
        if (!used[static_cast<std::size_t>(i)]) order[pos++] = i;
      ss.basis[slot++] = BasisSolution::residue(BasisKind::FiniteT, build_integrand(kind, dp, order), x_scale_of(dp),
                                                dp.alpha_i, 0.0, v.finite_t_max);
    }
  }
  if (slot != 4) throw std::logic_error("basis_finite_t: integer classes do not cover the four b*");
  return ss;
}

SolutionSet basis_near_inf(const DerivedParams& dp, const PoleReport& pr, const Validity& v) {
  require_meijer(dp, "basis_near_inf");
  SolutionSet ss;
  ss.dp = dp;
  ss.regime = pr.regime;
  const double xs = x_scale_of(dp);
  auto make = [&](IntegrandKind kind, double rot, bool swap) {
    return BasisSolution::residue(BasisKind::NearInf, build_integrand(kind, dp, {0, 1, 2, 3}, rot, swap), xs, dp.alpha_i,
                                  v.near_inf_min, v.near_inf_max);
  };
  ss.basis[0] = make(IntegrandKind::G_2_4_4_1, 0, false);
  ss.basis[1] = make(IntegrandKind::G_2_4_4_1, 0, true);
  ss.basis[2] = make(IntegrandKind::G_2_4_4_0, kPi, false);
  ss.basis[3] = make(IntegrandKind::G_2_4_4_0, -kPi, false);
  return ss;
}

DeltaValue delta_of_t(const SolutionSet& ss, const Coeffs& coeffs, double t) {
  if (!(t > 0)) throw std::domain_error("delta_of_t: t must be positive");
  cplx sum = 0;
  double err = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    if (coeffs[j] == cplx(0)) continue;
    const BasisValue bv = ss.basis[j].eval(t);
    sum += coeffs[j] * bv.value;
    err += std::abs(coeffs[j]) * bv.err;
  }
  const double ta = std::pow(t, ss.dp.alpha);
  DeltaValue out;
  out.delta = ta * sum.real();
  out.err = ta * err;
  const double im = ta * sum.imag();
  if (std::abs(im) > 1e-10 * std::abs(out.delta)) out.imag = im;
  return out;
}

Eigen::Matrix4cd basis_jet(const SolutionSet& ss, double t0) {
  const Eigen::Matrix4cd d = delta_jet_matrix(ss, t0);
  Eigen::Matrix4cd out;
  for (int j = 0; j < 4; ++j) {
    out(0, j) = d(0, j);
    out(1, j) = d(1, j) / t0;
    out(2, j) = (d(2, j) - d(1, j)) / (t0 * t0);
    out(3, j) = (d(3, j) - 3.0 * d(2, j) + 2.0 * d(1, j)) / (t0 * t0 * t0);
  }
  return out;
}

FitResult fit_coefficients(const SolutionSet& ss, double t0, const PhiJet& values) {
  if (!(t0 > 0)) throw std::domain_error("fit_coefficients: t0 must be positive");
  const Eigen::Matrix4cd m = delta_jet_matrix(ss, t0);
  const Eigen::Vector4cd rhs = to_delta_jet(t0, values);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
  const auto& sv = svd.singularValues();
  FitResult out;
  out.condition = sv(3) > 0 ? sv(0) / sv(3) : HUGE_VAL;
  out.ill_conditioned = out.condition > kIllConditioned;
  const Eigen::Vector4cd c = m.fullPivLu().solve(rhs);
  for (int j = 0; j < 4; ++j) out.coeffs[static_cast<std::size_t>(j)] = c(j);
  return out;
}

PhiJet phi_jet_from_delta(double alpha, double t, const std::array<double, 4>& dj) {
  // Phi = t^{-alpha} delta, Leibniz rule
  const double a = -alpha;
  const std::array<double, 4> p = {std::pow(t, a), a * std::pow(t, a - 1), a * (a - 1) * std::pow(t, a - 2),
                                   a * (a - 1) * (a - 2) * std::pow(t, a - 3)};
  PhiJet out;
  out[0] = p[0] * dj[0];
  out[1] = p[1] * dj[0] + p[0] * dj[1];
  out[2] = p[2] * dj[0] + 2 * p[1] * dj[1] + p[0] * dj[2];
  out[3] = p[3] * dj[0] + 3 * p[2] * dj[1] + 3 * p[1] * dj[2] + p[0] * dj[3];
  return out;
}

CrossFit cross_fit(const SolutionSet& finite_t, const SolutionSet& near_inf, double x_lo, double x_hi, int points) {
  if (points < 4) throw std::invalid_argument("cross_fit: need at least 4 points");
  const int n = points;
  Eigen::MatrixXcd a(n, 4), b(n, 4);
  CrossFit out;
  for (int i = 0; i < n; ++i) {
    const double x = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (n - 1));
    out.x_points.push_back(x);
    for (int k = 0; k < 4; ++k) {
      a(i, k) = near_inf.basis[static_cast<std::size_t>(k)].eval_x(x).value;
      b(i, k) = finite_t.basis[static_cast<std::size_t>(k)].eval_x(x).value;
    }
  }
  out.transfer = a.colPivHouseholderQr().solve(b);
  const Eigen::MatrixXcd r = a * out.transfer - b;
  for (int j = 0; j < 4; ++j) {
    const double scale = b.col(j).cwiseAbs().maxCoeff();
    out.max_rel_residual = std::max(out.max_rel_residual, r.col(j).cwiseAbs().maxCoeff() / scale);
  }
  return out;
}

double collocation_rank_ratio(const SolutionSet& ss, const std::vector<double>& t_points, int* rank) {
  const int n = static_cast<int>(t_points.size());
  Eigen::MatrixXcd m(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = ss.basis[static_cast<std::size_t>(j)].eval(t_points[static_cast<std::size_t>(i)]).value;
  for (int j = 0; j < 4; ++j) m.col(j).normalize();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double ratio = sv(sv.size() - 1) / sv(0);
  if (rank) {
    *rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-8 * sv(0)) ++*rank;
  }
  return ratio;
}

GrowthSolution::GrowthSolution(const DerivedParams& dp, const Validity& v) : dp_(dp), v_(v) {
  const PoleReport pr = classify_poles(dp);
  finite_ = basis_finite_t(dp, pr, v);
  near_ = basis_near_inf(dp, pr, v);
  cross_ = cross_fit(finite_, near_, v.near_inf_min, v.finite_t_max);
}

void GrowthSolution::set_coefficients(const Coeffs& c, BasisKind in_basis) {
  Eigen::Vector4cd cv;
  for (int j = 0; j < 4; ++j) cv(j) = c[static_cast<std::size_t>(j)];
  Eigen::Vector4cd other;
  if (in_basis == BasisKind::FiniteT) {
    other = cross_.transfer * cv;
    c_finite_ = c;
    for (int j = 0; j < 4; ++j) c_near_[static_cast<std::size_t>(j)] = other(j);
  } else if (in_basis == BasisKind::NearInf) {
    other = cross_.transfer.fullPivLu().solve(cv);
    c_near_ = c;
    for (int j = 0; j < 4; ++j) c_finite_[static_cast<std::size_t>(j)] = other(j);
  } else {
    throw std::invalid_argument("GrowthSolution: coefficients must refer to a residue basis");
  }
}

FitResult GrowthSolution::fit(double t0, const PhiJet& values) {
  const BasisKind k = basis_at(t0);
  const FitResult r = fit_coefficients(k == BasisKind::FiniteT ? finite_ : near_, t0, values);
  set_coefficients(r.coeffs, k);
  return r;
}

BasisKind GrowthSolution::basis_at(double t) const {
  const double x = dp_.x_of_t(t);
  if (x <= v_.x_switch) return BasisKind::FiniteT;
  if (x <= v_.near_inf_max) return BasisKind::NearInf;
  std::ostringstream os;
  os << "t = " << t << " (x = " << x << ") lies beyond both basis windows (x <= " << v_.near_inf_max << ")";
  throw std::domain_error(os.str());
}

DeltaValue GrowthSolution::delta(double t) const {
  return basis_at(t) == BasisKind::FiniteT ? delta_of_t(finite_, c_finite_, t) : delta_of_t(near_, c_near_, t);
}

double GrowthSolution::t_switch() const { return dp_.t_of_x(v_.x_switch); }

}  // namespace gravinst
