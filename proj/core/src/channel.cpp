#include "otafl/channel.hpp"

#include <cmath>
#include <string>

#include "dft.hpp"

namespace otafl {

namespace {

Complex phase(double cycles) { return std::polar(1.0, -2.0 * kPi * cycles); }

}  // namespace

void ChannelConfig::validate() const {
  if (devices <= 0 || antennas <= 0 || paths <= 0)
    throw ConfigError("channel: device, antenna and path counts must be positive");
  if (!(tap_std > 0.0)) throw ConfigError("channel: tap_std must be positive");
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("channel: alpha must lie in [0, 1]");
  if (innovation() < 0.0 || delay_std < 0.0 || symbol_jitter_std < 0.0)
    throw ConfigError("channel: standard deviations must be non-negative");
}

Complex ChannelState::tap_at_sample(int k, int n, int l, int sample, int subcarriers,
                                    TapVariation variation) const {
  const std::size_t idx = index(k, n, l);
  if (variation == TapVariation::BlockStatic) return taps[idx];
  const double frac = static_cast<double>(sample + 1) / subcarriers;
  return previous_taps[idx] + (taps[idx] - previous_taps[idx]) * frac;
}

EffectiveChannel::EffectiveChannel(int devices, int antennas, int subcarriers)
    : devices_(devices),
      antennas_(antennas),
      subcarriers_(subcarriers),
      values_(static_cast<std::size_t>(devices) * antennas * subcarriers * subcarriers) {}

ChannelState init_round(const ChannelConfig& cfg, Rng& rng) {
  cfg.validate();
  ChannelState state;
  state.devices = cfg.devices;
  state.antennas = cfg.antennas;
  state.paths = cfg.paths;
  const std::size_t count = static_cast<std::size_t>(cfg.devices) * cfg.antennas * cfg.paths;
  state.taps.resize(count);
  state.misalign.resize(count);
  state.symbol_delay.resize(count);
  for (auto& h : state.taps) {
    h = cfg.tap_model == TapModel::Unit ? Complex{1.0, 0.0} : complex_normal(rng, cfg.tap_std);
  }
  for (auto& tau : state.misalign) tau = normal(rng, cfg.delay_mean, cfg.delay_std);
  for (auto& tau : state.symbol_delay) tau = normal(rng, 0.0, cfg.symbol_jitter_std);
  state.previous_taps = state.taps;
  return state;
}

ChannelState evolve(const ChannelState& state, const ChannelConfig& cfg, Rng& rng) {
  ChannelState next = state;
  next.previous_taps = state.taps;
  const double keep = std::sqrt(1.0 - cfg.alpha * cfg.alpha);
  const double sigma_c = cfg.innovation();
  for (auto& h : next.taps) {
    const Complex c = complex_normal(rng, sigma_c);
    if (cfg.alpha != 0.0) h = keep * h + cfg.alpha * c;
  }
  for (auto& tau : next.symbol_delay) tau = normal(rng, 0.0, cfg.symbol_jitter_std);
  ++next.symbol_index;
  return next;
}

EffectiveChannel effective_frequency_channel(const ChannelState& state, const ChannelConfig& cfg,
                                             int subcarriers) {
  const int f = subcarriers;
  EffectiveChannel h(state.devices, state.antennas, f);
  std::vector<Complex> samples(f);

  for (int k = 0; k < state.devices; ++k) {
    for (int n = 0; n < state.antennas; ++n) {
      for (int l = 0; l < state.paths; ++l) {
        // Sample-domain part: G[m] = sum_i h_i exp(-j 2 pi i m / F).
        std::vector<Complex> g;
        if (cfg.variation == TapVariation::BlockStatic) {
          g.assign(f, Complex{});
          g[0] = static_cast<double>(f) * state.taps[state.index(k, n, l)];
        } else {
          for (int i = 0; i < f; ++i) samples[i] = state.tap_at_sample(k, n, l, i, f, cfg.variation);
          g = detail::dft(samples);
        }
        const double tau = state.total_delay(k, n, l);
        for (int v = 0; v < f; ++v) {
          const int bv = subcarrier_bin(v, f);
          const Complex delay = phase(bv * tau / f) / static_cast<double>(f);
          for (int u = 0; u < f; ++u) {
            const int bu = subcarrier_bin(u, f);
            const Complex gm = g[((bu - bv) % f + f) % f];
            if (gm != Complex{}) h(k, n, u, v) += gm * delay;
          }
        }
      }
    }
  }
  return h;
}

ReceivedSymbol apply_time_domain(std::span<const TimeDomainFrame> frames, int symbol,
                                 const ChannelState& state, const ChannelConfig& cfg,
                                 const OfdmConfig& ofdm, double noise_std, Rng& rng) {
  const int f = ofdm.subcarriers;
  const int cp = ofdm.cp_length;
  if (static_cast<int>(frames.size()) != state.devices)
    throw std::invalid_argument("apply_time_domain: one frame per device required");

  ReceivedSymbol out{ComplexMatrix::Zero(state.antennas, f), ComplexMatrix::Zero(state.antennas, f)};
  std::vector<Complex> body(f);
  std::vector<Complex> extended(cp + f);

  for (int k = 0; k < state.devices; ++k) {
    const ComplexMatrix& frame = frames[k].data;
    if (frame.cols() != cp + f || symbol >= frame.rows())
      throw std::invalid_argument("apply_time_domain: frame shape mismatch");
    for (int n = 0; n < state.antennas; ++n) {
      for (int l = 0; l < state.paths; ++l) {
        const double tau = state.total_delay(k, n, l);
        const double shift_d = std::round(tau);
        if (shift_d < 0.0 || shift_d >= cp)
          throw DelayExceedsCp("rounded delay " + std::to_string(shift_d) + " of device " +
                               std::to_string(k) + " is outside the cyclic prefix [0, " +
                               std::to_string(cp) + ")");
        const int shift = static_cast<int>(shift_d);
        const double frac = tau - shift_d;

        for (int i = 0; i < f; ++i) body[i] = frame(symbol, cp + i);
        if (frac != 0.0) {
          std::vector<Complex> spectrum = detail::dft(body);
          for (int b = 0; b < f; ++b) spectrum[b] *= phase(frac * b / f);
          body = detail::idft(spectrum);
        }
        for (int i = 0; i < cp; ++i) extended[i] = body[f - cp + i];
        for (int i = 0; i < f; ++i) extended[cp + i] = body[i];

        for (int i = 0; i < f; ++i) {
          const Complex h = state.tap_at_sample(k, n, l, i, f, cfg.variation);
          out.samples(n, i) += h * extended[cp + i - shift];
        }
      }
    }
  }
  for (int n = 0; n < state.antennas; ++n) {
    for (int i = 0; i < f; ++i) out.noise(n, i) = complex_normal(rng, noise_std);
  }
  out.samples += out.noise;
  return out;
}

}  // namespace otafl
