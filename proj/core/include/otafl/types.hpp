#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace otafl {

using Complex = std::complex<double>;

/// Real FL payload, one entry per model parameter.
using ModelVector = Eigen::VectorXd;

using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a rounded path delay cannot be absorbed by the cyclic prefix.
class DelayExceedsCp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace otafl
