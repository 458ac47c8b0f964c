#include "dcsplit/functions.hpp"
#include "dcsplit/gabor.hpp"
#include "dcsplit/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace dcsplit;

void BM_GaborForward(benchmark::State& st) {
  GaborConfig cfg;
  cfg.signal_len = st.range(0);
  const auto T = make_gabor(cfg);
  const Vec x = CounterRng(1).normal_vector(cfg.signal_len);
  for (auto _ : st) benchmark::DoNotOptimize(T->apply(x));
  st.SetItemsProcessed(st.iterations() * cfg.signal_len);
}
BENCHMARK(BM_GaborForward)->Arg(16384)->Arg(88064)->Unit(benchmark::kMillisecond);

void BM_GaborAdjoint(benchmark::State& st) {
  GaborConfig cfg;
  cfg.signal_len = st.range(0);
  const auto T = make_gabor(cfg);
  const Vec y = CounterRng(2).normal_vector(T->n_out());
  for (auto _ : st) benchmark::DoNotOptimize(T->adjoint_apply(y));
  st.SetItemsProcessed(st.iterations() * cfg.signal_len);
}
BENCHMARK(BM_GaborAdjoint)->Arg(16384)->Arg(88064)->Unit(benchmark::kMillisecond);

void BM_PowerIteration(benchmark::State& st) {
  GaborConfig cfg;
  cfg.signal_len = 16384;
  const auto T = make_gabor(cfg);
  for (auto _ : st) benchmark::DoNotOptimize(op_norm_sq_estimate(*T));
}
BENCHMARK(BM_PowerIteration)->Unit(benchmark::kMillisecond);

void BM_ConjProxElastic(benchmark::State& st) {
  const ElasticL1 g(0.1);
  const Vec w = CounterRng(3).normal_vector(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(conj_prox(g, w, 10.0));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_ConjProxElastic)->Arg(1 << 16)->Arg(1 << 20);

void BM_ConjProxSmoothedL2(benchmark::State& st) {
  const SmoothedL2 f(0.6, 0.1);
  const Vec w = CounterRng(4).normal_vector(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(conj_prox(f, w, 1.0));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_ConjProxSmoothedL2)->Arg(1 << 16)->Arg(1 << 20);

}  // namespace
