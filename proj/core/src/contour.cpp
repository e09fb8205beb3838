#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gravinst/mb_engine.hpp"

namespace gravinst {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> pole_locations(const MBIntegrand& ib, Direction dir, int levels) {
  std::vector<cplx> out;
  for (const auto& p : enumerate_poles(ib, dir, levels)) out.push_back(p.location);
  return out;
}

double head_extreme(const std::vector<cplx>& poles, Direction dir) {
  double v = dir == Direction::Left ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  for (cplx p : poles) v = dir == Direction::Left ? std::max(v, p.real()) : std::min(v, p.real());
  return v;
}

// (1 / 2 pi i) of the counterclockwise circle integral around p.
cplx circle_integral(const MBIntegrand& ib, double x, cplx p, double rho, int n) {
  cplx acc = 0;
  for (int k = 0; k < n; ++k) {
    const cplx w = std::polar(rho, 2 * kPi * (k + 0.5) / n);
    acc += ib.eval(p + w, x) * w;
  }
  return acc / static_cast<double>(n);
}

}  // namespace

double default_contour_shift(const MBIntegrand& ib) {
  const auto left = pole_locations(ib, Direction::Left, 6);
  const auto right = pole_locations(ib, Direction::Right, 6);
  if (left.empty() && right.empty()) return 0;
  if (right.empty()) return head_extreme(left, Direction::Left) + 0.5;
  if (left.empty()) return head_extreme(right, Direction::Right) - 0.5;
  const double lmax = head_extreme(left, Direction::Left);
  const double rmin = head_extreme(right, Direction::Right);
  if (lmax < rmin) return 0.5 * (lmax + rmin);
  // No separating line: choose the widest gap between the two chain heads.
  std::vector<double> re;
  for (cplx p : left) re.push_back(p.real());
  for (cplx p : right) re.push_back(p.real());
  std::sort(re.begin(), re.end());
  double best = 0.5 * (lmax + rmin);
  double width = -1;
  for (std::size_t i = 0; i + 1 < re.size(); ++i) {
    if (re[i] < rmin || re[i + 1] > lmax) continue;
    if (re[i + 1] - re[i] > width) {
      width = re[i + 1] - re[i];
      best = 0.5 * (re[i] + re[i + 1]);
    }
  }
  return best;
}

SeriesResult<cplx> contour_quadrature(const MBIntegrand& ib, double x, double contour_shift, const QuadratureOptions& opts) {
  if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("contour_quadrature: x must be positive and finite");
  const double sigma0 = std::isnan(contour_shift) ? default_contour_shift(ib) : contour_shift;

  // Poles near or beyond the line on the wrong side.
  const auto near_left = pole_locations(ib, Direction::Left, 8);
  const auto near_right = pole_locations(ib, Direction::Right, 8);
  const int left_levels = near_left.empty() ? 1 : 8 + static_cast<int>(std::max(0.0, std::ceil(head_extreme(near_left, Direction::Left) - sigma0)));
  const int right_levels = near_right.empty() ? 1 : 8 + static_cast<int>(std::max(0.0, std::ceil(sigma0 - head_extreme(near_right, Direction::Right))));
  const auto left = pole_locations(ib, Direction::Left, left_levels);
  const auto right = pole_locations(ib, Direction::Right, right_levels);
  for (const auto& group : {left, right})
    for (cplx p : group)
      if (std::abs(p.imag()) < 1e-12 && std::abs(p.real() - sigma0) < 1e-9) {
        std::ostringstream os;
        os << "contour_quadrature: contour Re(s) = " << sigma0 << " passes through the pole at s = " << p.real();
        throw std::domain_error(os.str());
      }

  // Path shape from the vertical decay rate of the gamma product.
  const double rate = (static_cast<double>(ib.numerator.size()) - static_cast<double>(ib.denominator.size())) * kPi / 2 -
                      std::abs(ib.rotation);
  double w = 0;
  if (rate <= 0.1) {
    const int deg = ib.left_degree();
    if (deg > 0)
      w = -1;
    else if (deg < 0)
      w = 1;
    else if (x < 1)
      w = -1;
    else if (x > 1)
      w = 1;
    else
      throw std::domain_error("contour_quadrature: integrand " + ib.label + " does not decay along any contour at x = 1");
  }

  auto path = [&](double tau) { return cplx(sigma0 + w * std::abs(tau), tau); };
  auto integrand = [&](double tau) {
    const cplx ds(w * (tau < 0 ? -1.0 : 1.0), 1.0);
    return ib.eval(path(tau), x) * ds;
  };

  SeriesResult<cplx> out;
  double err_total = 0;
  cplx total = 0;
  int evals = 0;
  double peak = std::abs(integrand(0.0));
  bool truncated = true;
  for (double side : {1.0, -1.0}) {
    double a = 0;
    double width = 0.5;
    bool done = false;
    while (a < 5000) {
      const double b = a + width;
      double err = 0, l1 = 0;
      const cplx piece = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          [&](double u) { return integrand(side * u); }, a, b, static_cast<unsigned>(opts.max_depth), 1e-13, &err, &l1);
      evals += 15;
      total += piece;
      err_total += err;
      const double end_mag = std::abs(integrand(side * b));
      peak = std::max(peak, l1 / width);
      a = b;
      width = std::min(2.0, width * 1.5);
      if (end_mag < opts.truncation * peak && std::abs(piece) < opts.truncation * peak) {
        done = true;
        break;
      }
    }
    truncated = truncated && done;
  }
  cplx value = total / cplx(0, 2 * kPi);
  double err = err_total / (2 * kPi);

  // Circle corrections for poles on the wrong side of the path.
  std::vector<cplx> all = left;
  all.insert(all.end(), right.begin(), right.end());
  auto radius = [&](cplx p) {
    double d = 0.5;
    for (cplx q : all)
      if (q != p) d = std::min(d, std::abs(q - p));
    return 0.4 * d;
  };
  auto wrong_side = [&](cplx p, bool is_left) {
    const double line = sigma0 + w * std::abs(p.imag());
    return is_left ? p.real() > line : p.real() < line;
  };
  for (cplx p : left)
    if (wrong_side(p, true)) {
      const double rho = radius(p);
      const cplx c64 = circle_integral(ib, x, p, rho, 64);
      value += c64;
      err += std::abs(c64 - circle_integral(ib, x, p, rho, 48));
      evals += 112;
    }
  for (cplx p : right)
    if (wrong_side(p, false)) {
      const double rho = radius(p);
      const cplx c64 = circle_integral(ib, x, p, rho, 64);
      value -= c64;
      err += std::abs(c64 - circle_integral(ib, x, p, rho, 48));
      evals += 112;
    }

  out.value = value;
  out.abs_error_estimate = err;
  out.terms_used = evals;
  out.converged = truncated && err <= opts.tol * std::max(1.0, std::abs(value));
  return out;
}

}  // namespace gravinst
