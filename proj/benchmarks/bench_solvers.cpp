#include <benchmark/benchmark.h>

#include "qes/matrices.hpp"
#include "qes/niven.hpp"
#include "qes/oracle.hpp"
#include "qes/spectra.hpp"

namespace {

void BM_BuildP(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qes::build_P(m, -1.0, 1.0));
  }
}
BENCHMARK(BM_BuildP)->Arg(8)->Arg(32);

void BM_SolveN1(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qes::solve_n1(m, -1.0, 1.0));
  }
}
BENCHMARK(BM_SolveN1)->Arg(4)->Arg(16)->Arg(32);

void BM_SolveNgt1(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qes::solve_ngt1(3, 0, m, -1.0));
  }
}
BENCHMARK(BM_SolveNgt1)->Arg(1)->Arg(2)->Arg(3);

void BM_NivenSolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qes::solve_niven(-1.0, 1.0, 1, 0, m));
  }
}
BENCHMARK(BM_NivenSolve)->Arg(1)->Arg(2);

void BM_FdSpectrum(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  const qes::OscillatorSpec spec = qes::potential_from_params({-1.0, 2.0}, 3, 0, 1);
  const qes::RadialGrid grid{8.0, points};
  for (auto _ : state) {
    benchmark::DoNotOptimize(qes::fd_spectrum(spec, 0, grid, 5));
  }
}
BENCHMARK(BM_FdSpectrum)->Arg(1000)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
