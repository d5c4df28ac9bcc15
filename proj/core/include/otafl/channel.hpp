#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "otafl/ofdm.hpp"
#include "otafl/rng.hpp"
#include "otafl/types.hpp"

namespace otafl {

/// How taps behave inside one OFDM symbol.
enum class TapVariation {
  BlockStatic,      // constant within a symbol, AR(1) step between symbols
  IntraSymbolDrift  // linear ramp from the previous symbol's taps to the current ones
};

/// Initial tap distribution.
enum class TapModel {
  Rayleigh,  // CN(0, tap_std^2)
  Unit       // every tap equals 1; identity checks
};

struct ChannelConfig {
  int devices = 10;
  int antennas = 5;
  int paths = 1;
  double tap_std = 0.2;
  double alpha = 0.0;
  std::optional<double> innovation_std;  // unset: equals tap_std (variance-stationary AR(1))
  double delay_mean = 0.1;
  double delay_std = 0.01;
  double symbol_jitter_std = 0.0;
  TapVariation variation = TapVariation::BlockStatic;
  TapModel tap_model = TapModel::Rayleigh;
  std::uint64_t seed = 1;

  double innovation() const { return innovation_std.value_or(tap_std); }
  void validate() const;
};

/// Per (device, antenna, path) taps and delays at one OFDM symbol.
/// Delays are in samples and may be fractional.
struct ChannelState {
  int devices = 0;
  int antennas = 0;
  int paths = 0;
  std::vector<Complex> taps;
  std::vector<Complex> previous_taps;  // taps of symbol d-1, used by the drift mode
  std::vector<double> misalign;
  std::vector<double> symbol_delay;
  int symbol_index = 0;

  std::size_t index(int k, int n, int l) const {
    return (static_cast<std::size_t>(k) * antennas + n) * paths + l;
  }
  double total_delay(int k, int n, int l) const {
    return misalign[index(k, n, l)] + symbol_delay[index(k, n, l)];
  }
  /// Tap on sample i of the current symbol.
  Complex tap_at_sample(int k, int n, int l, int sample, int subcarriers, TapVariation variation) const;
};

/// Frequency-domain channel for one symbol, entry H(k, n, u, v) couples
/// transmit slot v of device k into receive slot u of antenna n.
class EffectiveChannel {
 public:
  EffectiveChannel(int devices, int antennas, int subcarriers);

  int devices() const { return devices_; }
  int antennas() const { return antennas_; }
  int subcarriers() const { return subcarriers_; }

  Complex& operator()(int k, int n, int u, int v) { return values_[offset(k, n, u, v)]; }
  Complex operator()(int k, int n, int u, int v) const { return values_[offset(k, n, u, v)]; }

 private:
  std::size_t offset(int k, int n, int u, int v) const {
    return ((static_cast<std::size_t>(k) * antennas_ + n) * subcarriers_ + u) * subcarriers_ + v;
  }

  int devices_;
  int antennas_;
  int subcarriers_;
  std::vector<Complex> values_;
};

/// Received samples for one symbol after CP removal, N x F_sc, plus the
/// noise realization that was added (kept for the error decomposition).
struct ReceivedSymbol {
  ComplexMatrix samples;
  ComplexMatrix noise;
};

ChannelState init_round(const ChannelConfig& cfg, Rng& rng);

/// One AR(1) step: h <- sqrt(1 - alpha^2) h + alpha c, plus fresh symbol delays.
ChannelState evolve(const ChannelState& state, const ChannelConfig& cfg, Rng& rng);

EffectiveChannel effective_frequency_channel(const ChannelState& state, const ChannelConfig& cfg,
                                             int subcarriers);

/// Passes row `symbol` of every device's frame through the multipath
/// channel and adds CN(0, noise_std^2) per time sample at each antenna.
ReceivedSymbol apply_time_domain(std::span<const TimeDomainFrame> frames, int symbol,
                                 const ChannelState& state, const ChannelConfig& cfg,
                                 const OfdmConfig& ofdm, double noise_std, Rng& rng);

}  // namespace otafl
