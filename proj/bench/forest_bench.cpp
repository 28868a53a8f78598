// OpenMP kernels vs the serial reference implementations. The interesting
// comparisons: bagged fitting (parallel over trees), weight extraction
// (leaf-interval tables + parallel rows vs per-query routing), and the
// expanding-window pass (parallel over periods).

#include <benchmark/benchmark.h>

#include "albama/forest.hpp"
#include "albama/reference.hpp"
#include "albama/simulation.hpp"

namespace {

using namespace albama;

TimeSeries bench_series(int length) {
  ScenarioSpec spec;
  spec.scenario = Scenario::combined;
  spec.length = length;
  return generate(spec);
}

ForestParams bench_params(int trees) {
  ForestParams params;
  params.n_trees = trees;
  return params;  // min_leaf 40, bootstrap, seed 42
}

void BM_fit_two_sided_omp(benchmark::State& state) {
  const TimeSeries y = bench_series(300);
  const ForestParams params = bench_params(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_two_sided(y, params));
  }
}
BENCHMARK(BM_fit_two_sided_omp)->Arg(100)->Arg(500);

void BM_fit_two_sided_serial(benchmark::State& state) {
  const TimeSeries y = bench_series(300);
  const ForestParams params = bench_params(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::fit_two_sided(y, params));
  }
}
BENCHMARK(BM_fit_two_sided_serial)->Arg(100)->Arg(500);

void BM_extract_weights_omp(benchmark::State& state) {
  const TimeSeries y = bench_series(300);
  const ForestModel model = fit_two_sided(y, bench_params(500));
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_weights(model));
  }
}
BENCHMARK(BM_extract_weights_omp);

void BM_extract_weights_serial(benchmark::State& state) {
  const TimeSeries y = bench_series(300);
  const ForestModel model = fit_two_sided(y, bench_params(500));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::extract_weights(model));
  }
}
BENCHMARK(BM_extract_weights_serial);

void BM_one_sided_omp(benchmark::State& state) {
  const TimeSeries y = bench_series(150);
  const ForestParams params = bench_params(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_one_sided(y, params, 24));
  }
}
BENCHMARK(BM_one_sided_omp);

void BM_one_sided_serial(benchmark::State& state) {
  const TimeSeries y = bench_series(150);
  const ForestParams params = bench_params(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::fit_one_sided(y, params, 24));
  }
}
BENCHMARK(BM_one_sided_serial);

}  // namespace

BENCHMARK_MAIN();
