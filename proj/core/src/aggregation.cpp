#include "otafl/aggregation.hpp"

#include <cmath>
#include <stdexcept>

namespace otafl {

namespace {

double mean_power(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs2().sum() / static_cast<double>(m.size());
}

void append_rows(ComplexMatrix& dst, const ComplexMatrix& src) {
  if (dst.size() == 0) {
    dst = src;
    return;
  }
  if (dst.cols() != src.cols()) throw std::invalid_argument("ErrorBreakdown: column mismatch");
  ComplexMatrix stacked(dst.rows() + src.rows(), dst.cols());
  stacked << dst, src;
  dst = std::move(stacked);
}

// sum_k H(k, n, u, u)
Complex sum_channel(const EffectiveChannel& h, int n, int u) {
  Complex acc{};
  for (int k = 0; k < h.devices(); ++k) acc += h(k, n, u, u);
  return acc;
}

}  // namespace

double ErrorBreakdown::power_b() const { return mean_power(same_sc_interference); }
double ErrorBreakdown::power_c() const { return mean_power(ici); }
double ErrorBreakdown::power_d() const { return mean_power(noise); }

void ErrorBreakdown::append(const ErrorBreakdown& other) {
  append_rows(desired, other.desired);
  append_rows(same_sc_interference, other.same_sc_interference);
  append_rows(ici, other.ici);
  append_rows(noise, other.noise);
}

ComplexVector mrc_combine(const ComplexMatrix& received, const EffectiveChannel& h) {
  const int f = h.subcarriers();
  if (received.rows() != h.antennas() || received.cols() != f)
    throw std::invalid_argument("mrc_combine: received spectra must be N x F_sc");
  ComplexVector out = ComplexVector::Zero(f);
  for (int u = 0; u < f; ++u) {
    Complex acc{};
    for (int n = 0; n < h.antennas(); ++n) acc += std::conj(sum_channel(h, n, u)) * received(n, u);
    out[u] = acc / static_cast<double>(h.antennas());
  }
  return out;
}

ErrorBreakdown decompose(const EffectiveChannel& h, const ComplexMatrix& thetas,
                         const ComplexMatrix& noise) {
  const int f = h.subcarriers();
  const int k_count = h.devices();
  const int n_count = h.antennas();
  if (thetas.rows() != k_count || thetas.cols() != f)
    throw std::invalid_argument("decompose: thetas must be K x F_sc");
  if (noise.rows() != n_count || noise.cols() != f)
    throw std::invalid_argument("decompose: noise must be N x F_sc");

  ErrorBreakdown out{ComplexMatrix::Zero(1, f), ComplexMatrix::Zero(1, f), ComplexMatrix::Zero(1, f),
                     ComplexMatrix::Zero(1, f)};
  const double inv_n = 1.0 / n_count;

  for (int u = 0; u < f; ++u) {
    Complex a{}, b{}, c{}, d{};
    for (int n = 0; n < n_count; ++n) {
      const Complex combiner = std::conj(sum_channel(h, n, u));
      for (int k = 0; k < k_count; ++k) {
        const Complex hk = h(k, n, u, u);
        a += std::norm(hk) * thetas(k, u);
        for (int kp = 0; kp < k_count; ++kp) {
          if (kp != k) b += std::conj(hk) * h(kp, n, u, u) * thetas(kp, u);
        }
      }
      Complex leak{};
      for (int v = 0; v < f; ++v) {
        if (v == u) continue;
        for (int kp = 0; kp < k_count; ++kp) leak += h(kp, n, u, v) * thetas(kp, v);
      }
      c += combiner * leak;
      d += combiner * noise(n, u);
    }
    out.desired(0, u) = a * inv_n;
    out.same_sc_interference(0, u) = b * inv_n;
    out.ici(0, u) = c * inv_n;
    out.noise(0, u) = d * inv_n;
  }
  return out;
}

Eigen::VectorXd combining_gain(const EffectiveChannel& h) {
  const int f = h.subcarriers();
  Eigen::VectorXd gain = Eigen::VectorXd::Zero(f);
  const double scale = 1.0 / (static_cast<double>(h.antennas()) * h.devices());
  for (int u = 0; u < f; ++u) {
    double acc = 0.0;
    for (int n = 0; n < h.antennas(); ++n) acc += std::norm(sum_channel(h, n, u));
    gain[u] = acc * scale;
  }
  return gain;
}

RoundEstimate ota_round(std::span<const ModelVector> models, const OfdmConfig& ofdm,
                        const ChannelConfig& channel, const OtaOptions& options, Rng& rng) {
  const ChannelState initial = init_round(channel, rng);
  return ota_round(models, ofdm, channel, initial, options, rng);
}

RoundEstimate ota_round(std::span<const ModelVector> models, const OfdmConfig& ofdm,
                        const ChannelConfig& channel, const ChannelState& initial,
                        const OtaOptions& options, Rng& rng) {
  ofdm.validate();
  const int k_count = static_cast<int>(models.size());
  if (k_count == 0 || k_count != initial.devices)
    throw std::invalid_argument("ota_round: one model per channel device required");

  const int f = ofdm.subcarriers;
  std::vector<FrequencySymbols> packed;
  std::vector<TimeDomainFrame> frames;
  packed.reserve(k_count);
  frames.reserve(k_count);
  ModelVector mean = ModelVector::Zero(ofdm.model_dim);
  for (const auto& m : models) {
    packed.push_back(pack_parameters(m, ofdm));
    frames.push_back(modulate(packed.back(), ofdm));
    mean += m;
  }
  mean /= static_cast<double>(k_count);

  // The DFT adds F_sc time-sample powers, so per-sample noise is sigma_z / sqrt(F_sc).
  const double sample_noise_std = options.noise_std / std::sqrt(static_cast<double>(f));

  FrequencySymbols combined{ComplexMatrix::Zero(ofdm.symbols(), f)};
  RoundEstimate est;
  ChannelState state = initial;
  ComplexMatrix thetas(k_count, f);
  for (int d = 0; d < ofdm.symbols(); ++d) {
    if (d > 0) state = evolve(state, channel, rng);
    const EffectiveChannel h = effective_frequency_channel(state, channel, f);
    const ReceivedSymbol rx = apply_time_domain(frames, d, state, channel, ofdm, sample_noise_std, rng);
    const ComplexMatrix spectra = demodulate(rx.samples, ofdm).data;
    ComplexVector yhat = mrc_combine(spectra, h);

    for (int k = 0; k < k_count; ++k) thetas.row(k) = packed[k].data.row(d);
    est.breakdown.append(decompose(h, thetas, demodulate(rx.noise, ofdm).data));

    if (options.normalize_gain) {
      const Eigen::VectorXd gain = combining_gain(h);
      for (int u = 0; u < f; ++u) {
        if (gain[u] > 0.0) yhat[u] /= gain[u];
      }
    }
    combined.data.row(d) = yhat.transpose();
  }

  est.theta_hat = unpack_estimate(combined, k_count, ofdm);
  est.epsilon_sq = (est.theta_hat - mean).squaredNorm();
  return est;
}

}  // namespace otafl
