#include "otafl/ofdm.hpp"

#include <string>

#include "dft.hpp"

namespace otafl {

int OfdmConfig::symbols() const {
  const int per_symbol = 2 * subcarriers;
  return (model_dim + per_symbol - 1) / per_symbol;
}

int OfdmConfig::pad_length() const { return 2 * symbols() * subcarriers - model_dim; }

void OfdmConfig::validate() const {
  if (subcarriers <= 0) throw ConfigError("ofdm: subcarrier count must be positive");
  if (cp_length < 0 || cp_length > subcarriers)
    throw ConfigError("ofdm: cyclic prefix length must lie in [0, F_sc]");
  if (model_dim <= 0) throw ConfigError("ofdm: model dimension must be positive");
}

FrequencySymbols pack_parameters(const ModelVector& model, const OfdmConfig& cfg) {
  cfg.validate();
  if (model.size() != cfg.model_dim)
    throw std::invalid_argument("pack_parameters: model has length " + std::to_string(model.size()) +
                                ", expected " + std::to_string(cfg.model_dim));
  const int f = cfg.subcarriers;
  const int m = cfg.model_dim;
  auto value = [&](int index) { return index < m ? model[index] : 0.0; };

  FrequencySymbols fs{ComplexMatrix::Zero(cfg.symbols(), f)};
  for (int d = 0; d < cfg.symbols(); ++d) {
    for (int s = 0; s < f; ++s) {
      fs.data(d, s) = {value(2 * d * f + s), value((2 * d + 1) * f + s)};
    }
  }
  return fs;
}

TimeDomainFrame modulate(const FrequencySymbols& fs, const OfdmConfig& cfg) {
  cfg.validate();
  const int f = cfg.subcarriers;
  const int cp = cfg.cp_length;
  if (fs.data.cols() != f) throw std::invalid_argument("modulate: symbol width != F_sc");

  TimeDomainFrame frame{ComplexMatrix::Zero(fs.data.rows(), cp + f)};
  std::vector<Complex> spectrum(f);
  for (Eigen::Index d = 0; d < fs.data.rows(); ++d) {
    for (int s = 0; s < f; ++s) spectrum[subcarrier_bin(s, f)] = fs.data(d, s);
    const std::vector<Complex> body = detail::idft(spectrum);
    for (int i = 0; i < f; ++i) frame.data(d, cp + i) = body[i];
    for (int i = 0; i < cp; ++i) frame.data(d, i) = body[f - cp + i];
  }
  return frame;
}

ComplexMatrix strip_cp(const TimeDomainFrame& frame, const OfdmConfig& cfg) {
  if (frame.data.cols() != cfg.cp_length + cfg.subcarriers)
    throw std::invalid_argument("strip_cp: frame width != F_cp + F_sc");
  return frame.data.rightCols(cfg.subcarriers);
}

FrequencySymbols demodulate(const ComplexMatrix& received, const OfdmConfig& cfg) {
  const int f = cfg.subcarriers;
  if (received.cols() != f) throw std::invalid_argument("demodulate: row width != F_sc");

  FrequencySymbols fs{ComplexMatrix::Zero(received.rows(), f)};
  std::vector<Complex> row(f);
  for (Eigen::Index r = 0; r < received.rows(); ++r) {
    for (int i = 0; i < f; ++i) row[i] = received(r, i);
    const std::vector<Complex> spectrum = detail::dft(row);
    for (int s = 0; s < f; ++s) fs.data(r, s) = spectrum[subcarrier_bin(s, f)];
  }
  return fs;
}

ModelVector unpack_estimate(const FrequencySymbols& combined, int devices, const OfdmConfig& cfg) {
  if (devices <= 0) throw std::invalid_argument("unpack_estimate: device count must be positive");
  const int f = cfg.subcarriers;
  if (combined.data.rows() != cfg.symbols() || combined.data.cols() != f)
    throw std::invalid_argument("unpack_estimate: combined symbols do not match the frame shape");

  ModelVector theta(cfg.model_dim);
  const double k = devices;
  for (int d = 0; d < cfg.symbols(); ++d) {
    for (int s = 0; s < f; ++s) {
      const int re_index = 2 * d * f + s;
      const int im_index = (2 * d + 1) * f + s;
      if (re_index < cfg.model_dim) theta[re_index] = combined.data(d, s).real() / k;
      if (im_index < cfg.model_dim) theta[im_index] = combined.data(d, s).imag() / k;
    }
  }
  return theta;
}

}  // namespace otafl
