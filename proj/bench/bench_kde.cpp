// Serial reference vs OpenMP reflected-KDE kernel.
//
//   ./build/bench/bench_kde --benchmark_filter=KDE
//
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "usecurate/density.hpp"
#include "usecurate/kernels.hpp"
#include "usecurate/synthetic.hpp"

namespace {

struct Fixture {
  std::vector<double> samples;
  usecurate::DensityGrid grid;
  std::vector<double> density;
  std::vector<double> deriv;
  double h = 0.0;
};

Fixture make_fixture(std::size_t n, std::size_t points) {
  usecurate::MixtureSpec spec;
  spec.n = n;
  auto pool = usecurate::sample_pool(spec);
  Fixture f;
  f.samples = pool.scores.scores;
  f.grid = usecurate::DensityGrid::make(spec.k, points);
  f.density.resize(points);
  f.deriv.resize(points);
  f.h = usecurate::silverman_bandwidth(pool.scores);
  return f;
}

void BM_KDE_Serial(benchmark::State& state) {
  auto f = make_fixture(static_cast<std::size_t>(state.range(0)),
                        static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    usecurate::kernels::reflected_kde_serial(f.samples, f.h, f.grid.hi, f.grid.u_values,
                                             f.density, f.deriv);
    benchmark::DoNotOptimize(f.density.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * 3);
}

void BM_KDE_Parallel(benchmark::State& state) {
  auto f = make_fixture(static_cast<std::size_t>(state.range(0)),
                        static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    usecurate::kernels::reflected_kde_parallel(f.samples, f.h, f.grid.hi, f.grid.u_values,
                                               f.density, f.deriv);
    benchmark::DoNotOptimize(f.density.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * 3);
}

void BM_SamplePool(benchmark::State& state) {
  usecurate::MixtureSpec spec;
  spec.n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto pool = usecurate::sample_pool(spec);
    benchmark::DoNotOptimize(pool.scores.scores.data());
  }
}

}  // namespace

BENCHMARK(BM_KDE_Serial)->Args({1000, 1024})->Args({10000, 1024})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KDE_Parallel)->Args({1000, 1024})->Args({10000, 1024})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplePool)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
