#include <benchmark/benchmark.h>

#include "mixcub/cubature.hpp"
#include "mixcub/fiblattice.hpp"
#include "mixcub/fourier.hpp"
#include "mixcub/integrands.hpp"
#include "mixcub/smolyak.hpp"
#include "mixcub/splines.hpp"

using namespace mixcub;

static void BM_Lattice(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fiblattice::fibonacci_lattice(n));
  state.SetItemsProcessed(state.iterations() * fiblattice::fibonacci(n).size());
}
BENCHMARK(BM_Lattice)->Arg(15)->Arg(20)->Arg(25);

static void BM_Zaremba(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fiblattice::zaremba_min_product(n));
}
BENCHMARK(BM_Zaremba)->Arg(20)->Arg(30)->Arg(35);

static void BM_DualEnumerate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fiblattice::dual_enumerate(n, 4096));
}
BENCHMARK(BM_DualEnumerate)->Arg(10)->Arg(20);

static void BM_KorobovDualError(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = integrands::korobov_spectrum(2);
  for (auto _ : state) benchmark::DoNotOptimize(fourier::fib_error_exact(spec, n));
}
BENCHMARK(BM_KorobovDualError)->Arg(15)->Arg(25);

static void BM_ApplyFibonacci(benchmark::State& state) {
  const auto rule = cubature::fibonacci_qmc(static_cast<int>(state.range(0)));
  const auto f = integrands::expsum();
  for (auto _ : state) benchmark::DoNotOptimize(cubature::apply_rule(rule, f));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rule.size()));
}
BENCHMARK(BM_ApplyFibonacci)->Arg(15)->Arg(20);

static void BM_NonperiodicRule(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cubature::fibonacci_nonperiodic(n));
}
BENCHMARK(BM_NonperiodicRule)->Arg(12)->Arg(18);

static void BM_SmolyakCubature(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(smolyak::smolyak_cubature(m));
}
BENCHMARK(BM_SmolyakCubature)->Arg(8)->Arg(12);

static void BM_FaberDecompose(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  const auto f = integrands::expsum();
  for (auto _ : state) benchmark::DoNotOptimize(splines::faber_decompose(f, J));
}
BENCHMARK(BM_FaberDecompose)->Arg(6)->Arg(9);

BENCHMARK_MAIN();
