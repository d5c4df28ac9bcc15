#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace otafl {

/// Inputs of the closed-form aggregation-error bounds. Delays are in samples.
struct BoundParams {
  int devices = 10;       // K
  int antennas = 5;       // N
  int paths = 1;          // L
  double tap_std = 0.2;   // sigma_h
  double noise_std = 0.1; // sigma_z
  double mu_tau = 0.1;    // mean pairwise delay difference
  double sigma_tau = 0.01;
  int subcarriers = 64;
  int q = 2;              // ICI half-window
  double gamma = 2.0;     // ICI decay exponent
  double beta = 0.01;     // learning rate
  double eta = 5.0;       // gradient-distortion constant
  int rounds = 50;        // T
  int ici_mu_exponent = 2;  // power of Gamma on the mean-delay term inside the ICI factor
  std::optional<double> lipschitz;

  void validate() const;
};

/// All bound outputs are upper bounds; e_t = lemma1 + lemma2 + noise.
struct BoundReport {
  double lemma1 = 0.0;
  double lemma2 = 0.0;
  double noise = 0.0;
  double e_t = 0.0;
  double accumulated = 0.0;  // (T + 1 + beta eta) e_t
  std::string notes;
};

/// E[(1 + (2 pi Gamma tau / F)^2)^-1] surrogate for tau ~ N(mu, sigma^2):
/// 1/sqrt(1 + 4 pi^2 Gamma^2 sigma^2 / F^2) * 1/(1 + (2 pi Gamma^e mu / F)^2),
/// with e = mu_exponent (2 as printed for the ICI bound; irrelevant at Gamma = 1).
double gaussian_sinc_sq_factor(double mu, double sigma, int subcarriers, int gamma_index,
                               int mu_exponent = 2);

/// Same-subcarrier interference bound: (K-1)/N L^2 sigma_h^4 f(mu, sigma, 1).
double lemma1_bound(const BoundParams& p);

/// Distance weight Gamma^-gamma / sum_{i=1..q} 2 i^-gamma.
double ici_weight(int gamma_index, int q, double gamma);

/// ICI bound: (K sigma_h^4 / N) sum_{Gamma=1..q} 2 w(Gamma) f(mu, sigma, Gamma).
double lemma2_bound(const BoundParams& p);

/// Noise term K sigma_h^2 sigma_z^2 / N.
double noise_bound(const BoundParams& p);

BoundReport single_round_error(const BoundParams& p);

/// (T + 1 + beta eta) e_t.
double accumulated_bound(double e_t, int rounds, double beta, double eta);

/// (t + 1 + beta eta) e_t for t = 0..rounds.
std::vector<double> partial_bound_curve(double e_t, int rounds, double beta, double eta);

struct McValidation {
  double mc_estimate = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // mc / bound; NaN when both are zero
  bool exact = false;  // both zero
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  bool passes(double slack = 1.05) const { return exact || ratio <= slack; }
};

/// Monte-Carlo estimate of E|kappa|^2 with frequency-domain channels
/// CN(0, L sigma_h^2) and pairwise delay differences N(mu_tau, sigma_tau^2).
McValidation mc_validate_lemma1(const BoundParams& p, std::size_t trials, std::uint64_t seed, int jobs = 1);

/// Monte-Carlo estimate of the weighted ICI power sum_v w(|v-u|) E|zeta_uv|^2.
McValidation mc_validate_lemma2(const BoundParams& p, std::size_t trials, std::uint64_t seed, int jobs = 1);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Column names of the bound CSV row.
std::vector<std::string> bound_report_columns();
std::vector<std::string> bound_report_row(const BoundParams& p, const BoundReport& r);

}  // namespace otafl
