#pragma once

#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "otafl/types.hpp"

namespace otafl::detail {

inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

// X[b] = sum_i x[i] exp(-j 2 pi b i / n)
inline std::vector<Complex> dft(std::span<const Complex> x) {
  std::vector<Complex> in(x.begin(), x.end());
  std::vector<Complex> out;
  fft_engine().fwd(out, in);
  return out;
}

// x[i] = (1/n) sum_b X[b] exp(+j 2 pi b i / n)
inline std::vector<Complex> idft(std::span<const Complex> spectrum) {
  std::vector<Complex> in(spectrum.begin(), spectrum.end());
  std::vector<Complex> out;
  fft_engine().inv(out, in);
  return out;
}

}  // namespace otafl::detail
