#include "gravinst/numdiff.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace gravinst {

Jet ridders_jet(const std::function<std::complex<double>(double)>& f, double u, const RiddersOptions& opts) {
  using cplx = std::complex<double>;
  const int n = opts.levels;
  const double con2 = opts.shrink * opts.shrink;

  Jet jet;
  const cplx f0 = f(u);
  jet.d[0] = f0;
  // tableau[k][i][j] for derivative order k = 1..4
  std::vector<std::vector<std::vector<cplx>>> tab(5, std::vector<std::vector<cplx>>(n, std::vector<cplx>(n)));
  for (int k = 1; k <= 4; ++k) jet.err[k] = std::numeric_limits<double>::infinity();

  double h = opts.h0;
  for (int i = 0; i < n; ++i, h /= opts.shrink) {
    const cplx fm2 = f(u - 2 * h), fm1 = f(u - h), fp1 = f(u + h), fp2 = f(u + 2 * h);
    tab[1][i][0] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12 * h);
    tab[2][i][0] = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12 * h * h);
    tab[3][i][0] = (-fm2 + 2.0 * fm1 - 2.0 * fp1 + fp2) / (2 * h * h * h);
    tab[4][i][0] = (fm2 - 4.0 * fm1 + 6.0 * f0 - 4.0 * fp1 + fp2) / (h * h * h * h);
    for (int k = 1; k <= 4; ++k) {
      auto& a = tab[k];
      double fac = con2;
      for (int j = 1; j <= i; ++j) {
        a[i][j] = (a[i][j - 1] * fac - a[i - 1][j - 1]) / (fac - 1);
        fac *= con2;
        double e = std::max(std::abs(a[i][j] - a[i][j - 1]), std::abs(a[i][j] - a[i - 1][j - 1]));
        if (j < i) e = std::max(e, std::abs(a[i][j] - a[i - 1][j]));
        if (e <= jet.err[k]) {
          jet.err[k] = e;
          jet.d[k] = a[i][j];
        }
      }
      if (i == 0) jet.d[k] = a[0][0];
    }
  }
  return jet;
}

}  // namespace gravinst
