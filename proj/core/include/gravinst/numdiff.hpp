#pragma once

#include <array>
#include <complex>
#include <functional>

namespace gravinst {

/// Value and derivatives 1..4 of a scalar function at one point.
struct Jet {
  std::array<std::complex<double>, 5> d{};
  std::array<double, 5> err{};
};

struct RiddersOptions {
  double h0 = 0.2;      // initial step
  double shrink = 1.4;  // step ratio between tableau rows
  int levels = 6;
};

/// Derivatives of f at u from Ridders-extrapolated 5-point central stencils.
/// All four derivatives share the same function evaluations.
Jet ridders_jet(const std::function<std::complex<double>(double)>& f, double u, const RiddersOptions& opts = {});

}  // namespace gravinst
