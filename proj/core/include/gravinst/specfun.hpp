#pragma once

#include <complex>

namespace gravinst {

/// Outcome of a truncated series evaluation.
template <class T>
struct SeriesResult {
  T value{};
  double abs_error_estimate = 0;
  int terms_used = 0;
  bool converged = false;
};

struct SeriesOptions {
  /// Relative tolerance the result is judged against for `converged`.
  double tol = 1e-13;
  /// Stop once |term| <= stop_eps * |partial sum| for 3 consecutive terms.
  double stop_eps = 1e-16;
  int max_terms = 10000;
};

namespace specfun {

using cplx = std::complex<double>;

/// sin(pi x) and cos(pi x) with exact argument reduction.
double sinpi(double x);
double cospi(double x);
cplx sinpi(cplx z);

/// True when z is 0, -1, -2, ... to within `tol`.
bool is_nonpositive_integer(double z, double tol = 0.0);
bool is_nonpositive_integer(cplx z, double tol = 0.0);

/// Gamma function. Throws std::domain_error at the poles 0, -1, -2, ...
double gamma(double x);
cplx gamma(cplx z);

/// Principal-branch log-gamma for complex z (imaginary part only defined
/// modulo 2 pi; exp(lgamma(z)) == gamma(z)).
cplx lgamma(cplx z);

/// log|Gamma(x)| for real x.
double lgamma_abs(double x);

/// psi = Gamma'/Gamma
double digamma(double x);
cplx digamma(cplx z);

/// n-th derivative of psi, n >= 0 (n == 0 is digamma).
double polygamma(int n, double x);
cplx polygamma(int n, cplx z);
/// Extended-precision real variant used by the residue engine.
long double polygamma_l(int n, long double x);

/// Rising factorial (a)_n = a (a+1) ... (a+n-1).
double pochhammer(double a, int n);

/// 2F3(a1, a2; b1, b2, b3; x) by direct summation. Throws std::domain_error
/// when some b_k is a non-positive integer.
SeriesResult<double> hyp2f3(double a1, double a2, double b1, double b2, double b3, double x,
                            const SeriesOptions& opts = {});

/// 1F2(a; b1, b2; x) by direct summation.
SeriesResult<double> hyp1f2(double a, double b1, double b2, double x, const SeriesOptions& opts = {});

}  // namespace specfun
}  // namespace gravinst
