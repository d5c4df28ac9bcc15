#pragma once

#include <optional>
#include <span>

#include "otafl/channel.hpp"
#include "otafl/ofdm.hpp"
#include "otafl/rng.hpp"
#include "otafl/types.hpp"

namespace otafl {

/// The four additive parts of the MRC output, one row per OFDM symbol and
/// one column per subcarrier slot:
///   desired       (1/N) sum_n sum_k |H_k,uu|^2 theta_k,u
///   same_sc       (1/N) sum_n sum_k sum_{k'!=k} H_k,uu^* H_k',uu theta_k',u
///   ici           (1/N) sum_n (sum_k H_k,uu)^* sum_{v!=u} sum_k' H_k',uv theta_k',v
///   noise         (1/N) sum_n (sum_k H_k,uu)^* Z_n,u
struct ErrorBreakdown {
  ComplexMatrix desired;
  ComplexMatrix same_sc_interference;
  ComplexMatrix ici;
  ComplexMatrix noise;

  ComplexMatrix total() const { return desired + same_sc_interference + ici + noise; }
  double power_b() const;
  double power_c() const;
  double power_d() const;

  /// Stacks the rows of another breakdown below this one.
  void append(const ErrorBreakdown& other);
};

struct RoundEstimate {
  ModelVector theta_hat;
  ErrorBreakdown breakdown;
  double epsilon_sq = 0.0;  // ||theta_hat - mean_k theta_k||^2
};

/// Eq.-17 MRC over antennas: Yhat_u = (1/N) sum_n (sum_k H_k,n,u,u)^* Y_n,u.
/// `received` is N x F_sc (one spectrum per antenna).
ComplexVector mrc_combine(const ComplexMatrix& received, const EffectiveChannel& h);

/// Direct-summation split of the MRC output for one symbol.
/// thetas: K x F_sc transmitted slot values; noise: N x F_sc noise spectra.
ErrorBreakdown decompose(const EffectiveChannel& h, const ComplexMatrix& thetas,
                         const ComplexMatrix& noise);

/// Per-slot combining gain (1/(N K)) sum_n |sum_k H_k,n,u,u|^2. Dividing
/// Yhat_u by K times this gain makes an ideal channel an exact average.
Eigen::VectorXd combining_gain(const EffectiveChannel& h);

struct OtaOptions {
  double noise_std = 0.0;  // per-subcarrier (post-DFT) noise std sigma_z
  bool normalize_gain = true;
};

/// One global round through the full physical chain: pack, IDFT+CP,
/// per-symbol channel (AR(1) between symbols), DFT, MRC, optional gain
/// normalization, unpack.
RoundEstimate ota_round(std::span<const ModelVector> models, const OfdmConfig& ofdm,
                        const ChannelConfig& channel, const OtaOptions& options, Rng& rng);

/// Same as above but starts from a caller-provided channel state.
RoundEstimate ota_round(std::span<const ModelVector> models, const OfdmConfig& ofdm,
                        const ChannelConfig& channel, const ChannelState& initial,
                        const OtaOptions& options, Rng& rng);

}  // namespace otafl
