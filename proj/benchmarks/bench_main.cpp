#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>

#include "gravinst/mb_engine.hpp"
#include "gravinst/oracle.hpp"
#include "gravinst/solutions.hpp"
#include "gravinst/specfun.hpp"

using namespace gravinst;

namespace {

DerivedParams row(Rational eta, Rational gamma) {
  return derive_params(ModelParams{eta, {gamma, Rational(1)}, {Rational(1, 2), Rational(1, 2)}, {1.0, 0.0}});
}

void BM_ComplexGamma(benchmark::State& st) {
  cplx z(0.3, 1.7);
  for (auto _ : st) benchmark::DoNotOptimize(specfun::gamma(z));
}
BENCHMARK(BM_ComplexGamma);

void BM_Hyp2F3(benchmark::State& st) {
  const double x = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(specfun::hyp2f3(0.5, 1.25, 1.5, 2.0, 0.75, x));
}
BENCHMARK(BM_Hyp2F3)->Arg(1)->Arg(10)->Arg(50);

void BM_ResidueSumGeneric(benchmark::State& st) {
  const MBIntegrand ib = build_integrand(IntegrandKind::G_2_4_1_2, row(Rational(2, 3), Rational(2, 3)));
  for (auto _ : st) benchmark::DoNotOptimize(residue_sum(ib, Direction::Left, 2.0));
}
BENCHMARK(BM_ResidueSumGeneric);

void BM_ResidueSumTriplePole(benchmark::State& st) {
  const DerivedParams dp = row(Rational(1, 2), Rational(1));
  const MBIntegrand ib = build_integrand(IntegrandKind::G_2_4_4_1, dp);
  for (auto _ : st) benchmark::DoNotOptimize(residue_sum(ib, Direction::Left, 3.0));
}
BENCHMARK(BM_ResidueSumTriplePole);

void BM_ContourQuadrature(benchmark::State& st) {
  const MBIntegrand ib = build_integrand(IntegrandKind::G_2_4_1_2, row(Rational(2, 3), Rational(1)));
  for (auto _ : st)
    benchmark::DoNotOptimize(contour_quadrature(ib, 1.0, std::numeric_limits<double>::quiet_NaN()));
}
BENCHMARK(BM_ContourQuadrature)->Unit(benchmark::kMillisecond);

void BM_GrowthSolutionEval(benchmark::State& st) {
  GrowthSolution g(row(Rational(2, 3), Rational(1)));
  g.set_coefficients({cplx(1), cplx(0.5), cplx(-0.25), cplx(0.1)}, BasisKind::FiniteT);
  const double t = g.t_switch() * 0.8;
  for (auto _ : st) benchmark::DoNotOptimize(g.delta(t));
}
BENCHMARK(BM_GrowthSolutionEval);

void BM_IntegrateSystem(benchmark::State& st) {
  const ModelParams mp{Rational(2, 3), {Rational(1), Rational(1)}, {Rational(1, 2), Rational(1, 2)}, {0.5, 0.0}};
  const InitialData init{1.0, {1.0, 0.5}, {0.3, -0.2}};
  for (auto _ : st) benchmark::DoNotOptimize(integrate_system(mp, init, 100.0, 1e-10, 50));
}
BENCHMARK(BM_IntegrateSystem)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
