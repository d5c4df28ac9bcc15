#include <benchmark/benchmark.h>

#include "otafl/ofdm.hpp"
#include "otafl/rng.hpp"

namespace {

void BM_OfdmRoundTrip(benchmark::State& state) {
  otafl::OfdmConfig cfg{static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) / 4, 128};
  otafl::Rng rng = otafl::make_rng(1);
  otafl::ModelVector theta(cfg.model_dim);
  for (auto& x : theta) x = otafl::normal(rng, 0.0, 1.0);
  for (auto _ : state) {
    const auto frame = otafl::modulate(otafl::pack_parameters(theta, cfg), cfg);
    auto out = otafl::unpack_estimate(otafl::demodulate(otafl::strip_cp(frame, cfg), cfg), 1, cfg);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_OfdmRoundTrip)->Arg(16)->Arg(64)->Arg(256);

}  // namespace
