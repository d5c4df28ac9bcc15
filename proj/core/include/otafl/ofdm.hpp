#pragma once

#include "otafl/types.hpp"

namespace otafl {

/// OFDM framing of a length-M model vector.
///
/// Storage slot s of a symbol carries DFT bin (s + 1) mod F_sc, i.e. the
/// 1-based subcarrier numbering of the transmit IDFT. Time samples are
/// 0-based; the offset cancels between modulate() and demodulate().
struct OfdmConfig {
  int subcarriers = 64;
  int cp_length = 16;
  int model_dim = 128;

  /// Symbols per frame, ceil(M / (2 F_sc)).
  int symbols() const;
  /// Zero entries appended so the frame is rectangular.
  int pad_length() const;
  void validate() const;
};

/// D x F_sc frequency-domain symbols, entry (d, s) = theta^d_s.
struct FrequencySymbols {
  ComplexMatrix data;
};

/// D x (F_cp + F_sc) transmit samples, cyclic prefix first.
struct TimeDomainFrame {
  ComplexMatrix data;
};

/// DFT bin carried by storage slot `slot`.
inline int subcarrier_bin(int slot, int subcarriers) { return (slot + 1) % subcarriers; }

FrequencySymbols pack_parameters(const ModelVector& model, const OfdmConfig& cfg);

/// F_sc-point IDFT with 1/F_sc scaling, then CP prepended.
TimeDomainFrame modulate(const FrequencySymbols& fs, const OfdmConfig& cfg);

/// Drops the cyclic prefix: rows x F_sc symbol bodies.
ComplexMatrix strip_cp(const TimeDomainFrame& frame, const OfdmConfig& cfg);

/// Unscaled F_sc-point DFT of each row. Rows may be symbols or antennas.
FrequencySymbols demodulate(const ComplexMatrix& received, const OfdmConfig& cfg);

/// theta_hat = (Re, Im) / K per slot, padding dropped.
ModelVector unpack_estimate(const FrequencySymbols& combined, int devices, const OfdmConfig& cfg);

}  // namespace otafl
