#include "dcsplit/experiment.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace dcsplit;

const DenoiseInstance& instance() {
  static const DenoiseInstance inst = make_synthetic_instance(ExperimentConfig{});
  return inst;
}

// Ten outer iterations per benchmark iteration, energies off.
void run_method(benchmark::State& st, SolverKind kind) {
  ExperimentConfig cfg;
  cfg.solver = kind;
  cfg.iters = 10;
  RunControls controls;
  controls.energies = false;
  for (auto _ : st) {
    const DenoiseResult res = run_denoise(instance(), cfg, controls);
    benchmark::DoNotOptimize(res.isnr);
  }
  st.counters["outer_iters"] = benchmark::Counter(10.0 * static_cast<double>(st.iterations()),
                                                  benchmark::Counter::kIsRate);
}

void BM_AdaptiveDpfs(benchmark::State& st) { run_method(st, SolverKind::kAdaptive); }
void BM_AdaptiveDpfsLineSearch(benchmark::State& st) { run_method(st, SolverKind::kLineSearch); }
void BM_Fbdc(benchmark::State& st) { run_method(st, SolverKind::kFbdc); }

BENCHMARK(BM_AdaptiveDpfs)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdaptiveDpfsLineSearch)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fbdc)->Unit(benchmark::kMillisecond);

void BM_Counterexample(benchmark::State& st) {
  for (auto _ : st) {
    auto out = run_counterexample(st.range(0), Vec::Zero(2));
    benchmark::DoNotOptimize(out.second.kkt_gap);
  }
}
BENCHMARK(BM_Counterexample)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
