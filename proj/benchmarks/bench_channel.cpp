#include <benchmark/benchmark.h>

#include <vector>

#include "otafl/aggregation.hpp"

namespace {

void BM_EffectiveChannel(benchmark::State& state) {
  otafl::ChannelConfig cfg;
  cfg.antennas = static_cast<int>(state.range(0));
  otafl::Rng rng = otafl::make_rng(2);
  const auto st = otafl::init_round(cfg, rng);
  for (auto _ : state) {
    auto h = otafl::effective_frequency_channel(st, cfg, 64);
    benchmark::DoNotOptimize(&h);
  }
}
BENCHMARK(BM_EffectiveChannel)->Arg(2)->Arg(5)->Arg(10);

void BM_OtaRound(benchmark::State& state) {
  otafl::OfdmConfig ofdm;
  otafl::ChannelConfig cfg;
  cfg.antennas = static_cast<int>(state.range(0));
  otafl::Rng rng = otafl::make_rng(3);
  std::vector<otafl::ModelVector> models;
  for (int k = 0; k < cfg.devices; ++k) {
    otafl::ModelVector m(ofdm.model_dim);
    for (auto& x : m) x = otafl::normal(rng, 0.0, 1.0);
    models.push_back(m);
  }
  const otafl::OtaOptions opts{0.1, true};
  for (auto _ : state) {
    auto est = otafl::ota_round(models, ofdm, cfg, opts, rng);
    benchmark::DoNotOptimize(est.epsilon_sq);
  }
}
BENCHMARK(BM_OtaRound)->Arg(2)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
