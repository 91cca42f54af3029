#include <benchmark/benchmark.h>

#include "qnl/fft.hpp"
#include "qnl/harness.hpp"
#include "qnl/limit.hpp"
#include "qnl/nsp.hpp"
#include "qnl/operators.hpp"

using namespace qnl;

namespace {

SpectralGrid grid(int n) { return SpectralGrid::isotropic(2, n); }

void BM_fft_roundtrip(benchmark::State& state) {
  SpectralGrid g = grid(static_cast<int>(state.range(0)));
  ScalarField f = random_solenoidal(g, 0.1, 1).comp(0);
  for (auto _ : state) {
    transform(f);
    transform(f);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(BM_fft_roundtrip)->Arg(64)->Arg(128)->Arg(256);

void BM_leray_projection(benchmark::State& state) {
  SpectralGrid g = grid(static_cast<int>(state.range(0)));
  VectorField v = random_solenoidal(g, 0.1, 2);
  for (auto _ : state) {
    VectorField p = leray_P(v);
    benchmark::DoNotOptimize(p.comp(0).data());
  }
}
BENCHMARK(BM_leray_projection)->Arg(64)->Arg(128);

void BM_nsp_step(benchmark::State& state) {
  SpectralGrid g = grid(static_cast<int>(state.range(0)));
  FluidParams p;
  p.lambda = 0.1;
  PlasmaState s = scenario_state("ill_prepared", g, p, 0.1, 3);
  const double dt = 0.25 * dt_max(s);
  for (auto _ : state) {
    s = step(s, dt);
    benchmark::DoNotOptimize(s.rho.data());
  }
}
BENCHMARK(BM_nsp_step)->Arg(64)->Arg(128);

void BM_corrector_step(benchmark::State& state) {
  SpectralGrid g = grid(static_cast<int>(state.range(0)));
  VectorField v = random_solenoidal(g, 0.3, 4);
  VectorField E = leray_Q(random_solenoidal(g, 0.1, 5) + grad(v.comp(0)));
  for (auto _ : state) {
    E = corrector_step(E, v, v, 1e-3);
    benchmark::DoNotOptimize(E.comp(0).data());
  }
}
BENCHMARK(BM_corrector_step)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
