#include <benchmark/benchmark.h>

#include <random>

#include "oracle.hpp"
#include "pwlcycles/cycle_solver.hpp"
#include "pwlcycles/plrnn.hpp"
#include "pwlcycles/region_atlas.hpp"
#include "pwlcycles/simulator.hpp"

namespace {

pwl::CanonicalSystem block_system(int m, double d = -4.0) {
  std::mt19937_64 rng(static_cast<unsigned>(m));
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  auto sys = pwl::make_scalar_system({0.4, d, 0.8}, m);
  for (int i = 0; i < m; ++i) {
    sys.b(i) = u(rng);
    sys.e(i) = u(rng);
    sys.h_Y(i) = u(rng);
    for (int j = 0; j < m; ++j) sys.A(i, j) = u(rng) / m;
  }
  return sys;
}

void BM_SolveCycle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(1));
  // Deep enough inside the existence region for the cycle to be admissible.
  const auto sys = block_system(static_cast<int>(state.range(0)),
                                -1.5 * pwl::existence_bound(0.4, n));
  for (auto _ : state) benchmark::DoNotOptimize(pwl::solve_cycle(sys, n));
}
BENCHMARK(BM_SolveCycle)->Args({3, 3})->Args({16, 3})->Args({64, 3})->Args({16, 9});

void BM_SymbolicCycle(benchmark::State& state) {
  const auto sys = block_system(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pwl::solve_symbolic_cycle(sys, "RLL"));
}
BENCHMARK(BM_SymbolicCycle)->Arg(3)->Arg(64);

void BM_Scan(benchmark::State& state) {
  pwl::GridSpec g;
  g.a_min = 0.0;
  g.a_max = 3.0;
  g.d_min = -40.0;
  g.d_max = 0.0;
  g.a_steps = static_cast<int>(state.range(0));
  g.d_steps = static_cast<int>(state.range(0));
  g.n_list = {2, 3, 4, 5, 6, 7, 8, 9};
  for (auto _ : state) benchmark::DoNotOptimize(pwl::scan(g));
  state.SetItemsProcessed(state.iterations() * g.a_steps * g.d_steps * 8);
}
BENCHMARK(BM_Scan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
  const auto sys = block_system(3);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pwl::trajectory(sys, pwl::default_seed(sys), steps, 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Trajectory)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_BandCount(benchmark::State& state) {
  const auto sys = pwl::make_scalar_system({0.4, -6.4, 0.8});
  const auto orbit = pwl::trajectory(sys, pwl::default_seed(sys),
                                     1000 + static_cast<std::size_t>(state.range(0)), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(pwl::band_count(orbit));
}
BENCHMARK(BM_BandCount)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Localize(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const int m = static_cast<int>(state.range(0));
  auto p = pwl::testing::random_plrnn(rng, m);
  p.W.row(0).setZero();
  const auto left = pwl::RegionIndex::from_ordinal(m, 0);
  const auto right = pwl::RegionIndex::from_ordinal(m, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pwl::localize(p, left, right));
}
BENCHMARK(BM_Localize)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
