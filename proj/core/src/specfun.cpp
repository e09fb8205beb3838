#include "gravinst/specfun.hpp"

#include <array>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>

namespace gravinst::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

// B_2k for k = 1..10
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6,      -1.0 / 30,        1.0 / 42,         -1.0 / 30,          5.0 / 66,
    -691.0 / 2730, 7.0 / 6,         -3617.0 / 510,    43867.0 / 798,      -174611.0 / 330,
};

std::string describe(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string describe(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

[[noreturn]] void pole_error(const char* fn, const std::string& where) {
  throw std::domain_error(std::string(fn) + ": pole at " + where);
}

// Gamma(y) for y in [0.5, 2.5] and any complex z with Re z >= 0.5.
template <class T>
T lanczos_sum(T zm1) {
  T a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (zm1 + static_cast<double>(i));
  return a;
}

cplx lanczos_lgamma(cplx z) {
  const cplx zm1 = z - 1.0;
  const cplx t = zm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2 * kPi) + (zm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(zm1));
}

// log(sin(pi z)), stable for large |Im z|.
cplx log_sinpi(cplx z) {
  const double y = z.imag();
  if (std::abs(y) < 5) return std::log(sinpi(z));
  const double xr = z.real() - 2 * std::round(z.real() / 2);
  const cplx w(kPi * xr, kPi * y);
  const cplx i(0, 1);
  if (y > 0) return std::log(cplx(0, 0.5)) - i * w + std::log(1.0 - std::exp(2.0 * i * w));
  return -std::log(cplx(0, 2)) + i * w + std::log(1.0 - std::exp(-2.0 * i * w));
}

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

template <class T>
T polygamma_impl(int n, T z) {
  // Shift Re z up to the asymptotic region, recording the recurrence sum.
  const double threshold = 15.0 + n;
  T shift_sum = 0;
  while (std::real(z) < threshold) {
    shift_sum += std::pow(z, -(n + 1));
    z += 1.0;
  }
  T asym;
  const T inv = 1.0 / z;
  const T inv2 = inv * inv;
  if (n == 0) {
    asym = std::log(z) - 0.5 * inv;
    T p = inv2;
    for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
      asym -= kBernoulli[k - 1] / (2.0 * k) * p;
      p *= inv2;
    }
  } else {
    const T zn = std::pow(inv, n);
    asym = factorial(n - 1) * zn + factorial(n) * 0.5 * zn * inv;
    T p = zn * inv2;
    for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
      const int twok = 2 * static_cast<int>(k);
      // (2k + n - 1)! / (2k)!
      double ratio = 1;
      for (int j = twok + 1; j <= twok + n - 1; ++j) ratio *= j;
      asym += kBernoulli[k - 1] * ratio * p;
      p *= inv2;
    }
    if (n % 2 == 0) asym = -asym;  // (-1)^(n+1)
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return asym - sign * factorial(n) * shift_sum;
}

template <class T>
SeriesResult<double> pfq_series(std::span<const double> a, std::span<const double> b, double x,
                                const SeriesOptions& opts) {
  for (double bk : b)
    if (is_nonpositive_integer(bk)) throw std::domain_error("hypergeometric: denominator parameter " + describe(bk) + " is a non-positive integer");
  SeriesResult<double> out;
  T term = 1;
  T sum = 1;
  T abs_sum = 1;
  int small = 0;
  int nu = 0;
  bool stopped = false;
  while (nu < opts.max_terms) {
    T ratio = static_cast<T>(x) / static_cast<T>(nu + 1);
    for (double ak : a) ratio *= static_cast<T>(ak) + nu;
    for (double bk : b) ratio /= static_cast<T>(bk) + nu;
    term *= ratio;
    ++nu;
    sum += term;
    abs_sum += std::abs(term);
    if (std::abs(term) <= opts.stop_eps * std::abs(sum)) {
      if (++small == 3) {
        stopped = true;
        break;
      }
    } else {
      small = 0;
    }
  }
  out.value = static_cast<double>(sum);
  out.terms_used = nu + 1;
  out.abs_error_estimate = static_cast<double>(2 * DBL_EPSILON * abs_sum + std::abs(term));
  out.converged = stopped && out.abs_error_estimate <= opts.tol * std::max(1.0, std::abs(out.value));
  return out;
}

}  // namespace

double sinpi(double x) {
  const double r = x - 2 * std::round(x / 2);  // exact, r in [-1, 1]
  if (r == 0 || r == 1 || r == -1) return 0;
  if (r == 0.5) return 1;
  if (r == -0.5) return -1;
  return std::sin(kPi * r);
}

double cospi(double x) {
  const double r = std::abs(x - 2 * std::round(x / 2));
  if (r == 0.5) return 0;
  if (r == 0) return 1;
  if (r == 1) return -1;
  return std::cos(kPi * r);
}

cplx sinpi(cplx z) {
  const double y = kPi * z.imag();
  return {sinpi(z.real()) * std::cosh(y), cospi(z.real()) * std::sinh(y)};
}

bool is_nonpositive_integer(double z, double tol) {
  if (z > tol) return false;
  return std::abs(z - std::round(z)) <= tol;
}

bool is_nonpositive_integer(cplx z, double tol) {
  return std::abs(z.imag()) <= tol && is_nonpositive_integer(z.real(), tol);
}

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) pole_error("gamma", describe(x));
  return std::tgamma(x);
}

cplx gamma(cplx z) {
  if (z.imag() == 0) return gamma(z.real());
  return std::exp(lgamma(z));
}

cplx lgamma(cplx z) {
  if (is_nonpositive_integer(z)) pole_error("lgamma", describe(z));
  if (z.real() < 0.5) return std::log(kPi) - log_sinpi(z) - lgamma(1.0 - z);
  return lanczos_lgamma(z);
}

double lgamma_abs(double x) {
  if (is_nonpositive_integer(x)) pole_error("lgamma", describe(x));
  if (x < 0.5) return std::log(kPi) - std::log(std::abs(sinpi(x))) - lgamma_abs(1 - x);
  if (x < 60) return std::log(std::abs(gamma(x)));
  return lanczos_lgamma(cplx(x, 0)).real();
}

double digamma(double x) { return polygamma(0, x); }
cplx digamma(cplx z) { return polygamma(0, z); }

double polygamma(int n, double x) {
  if (n < 0) throw std::invalid_argument("polygamma: order must be >= 0");
  if (is_nonpositive_integer(x)) pole_error("polygamma", describe(x));
  return polygamma_impl<double>(n, x);
}

cplx polygamma(int n, cplx z) {
  if (n < 0) throw std::invalid_argument("polygamma: order must be >= 0");
  if (is_nonpositive_integer(z)) pole_error("polygamma", describe(z));
  if (z.imag() == 0) return polygamma_impl<double>(n, z.real());
  return polygamma_impl<cplx>(n, z);
}

long double polygamma_l(int n, long double x) {
  if (n < 0) throw std::invalid_argument("polygamma: order must be >= 0");
  if (is_nonpositive_integer(static_cast<double>(x)) && x == std::round(x)) pole_error("polygamma", describe(static_cast<double>(x)));
  return polygamma_impl<long double>(n, x);
}

double pochhammer(double a, int n) {
  if (n < 0) throw std::invalid_argument("pochhammer: n must be >= 0");
  double p = 1;
  for (int k = 0; k < n; ++k) p *= a + k;
  return p;
}

SeriesResult<double> hyp2f3(double a1, double a2, double b1, double b2, double b3, double x,
                            const SeriesOptions& opts) {
  const std::array<double, 2> a{a1, a2};
  const std::array<double, 3> b{b1, b2, b3};
  return pfq_series<long double>(a, b, x, opts);
}

SeriesResult<double> hyp1f2(double a, double b1, double b2, double x, const SeriesOptions& opts) {
  const std::array<double, 1> av{a};
  const std::array<double, 2> b{b1, b2};
  return pfq_series<long double>(av, b, x, opts);
}

}  // namespace gravinst::specfun
