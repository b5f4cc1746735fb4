#include <benchmark/benchmark.h>

#include "aitsde/config.hpp"
#include "aitsde/harness.hpp"

using namespace aitsde;

namespace {

ExperimentConfig bench_config() {
  ExperimentConfig cfg = default_experiment(non_critical_params());
  cfg.n_paths = 32;
  cfg.reference.tau = 0x1p-12;
  return cfg;
}

void BM_ConvergenceSerial(benchmark::State& state) {
  const ExperimentConfig cfg = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_convergence(cfg, {Execution::Serial}));
}

void BM_ConvergenceParallel(benchmark::State& state) {
  const ExperimentConfig cfg = bench_config();
  const RunOptions opts{Execution::Parallel, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(run_convergence(cfg, opts));
}

}  // namespace

BENCHMARK(BM_ConvergenceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvergenceParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
