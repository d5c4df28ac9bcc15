#include <benchmark/benchmark.h>

#include "otafl/bounds.hpp"

namespace {

void BM_SingleRoundError(benchmark::State& state) {
  const otafl::BoundParams p;
  for (auto _ : state) benchmark::DoNotOptimize(otafl::single_round_error(p).e_t);
}
BENCHMARK(BM_SingleRoundError);

void BM_McLemma1(benchmark::State& state) {
  const otafl::BoundParams p;
  for (auto _ : state)
    benchmark::DoNotOptimize(otafl::mc_validate_lemma1(p, static_cast<std::size_t>(state.range(0)), 1).mc_estimate);
}
BENCHMARK(BM_McLemma1)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_McLemma2(benchmark::State& state) {
  const otafl::BoundParams p;
  for (auto _ : state)
    benchmark::DoNotOptimize(otafl::mc_validate_lemma2(p, static_cast<std::size_t>(state.range(0)), 1).mc_estimate);
}
BENCHMARK(BM_McLemma2)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
