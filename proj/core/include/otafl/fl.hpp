#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "otafl/aggregation.hpp"
#include "otafl/bounds.hpp"
#include "otafl/channel.hpp"
#include "otafl/ofdm.hpp"
#include "otafl/rng.hpp"
#include "otafl/types.hpp"

namespace otafl {

/// Synthetic least-squares data: rows of X ~ N(0, I_d), y = X w_true + noise.
struct RegressionTask {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  Eigen::VectorXd w_true;
  double label_noise_std = 0.0;

  Eigen::Index samples() const { return X.rows(); }
};

RegressionTask gen_task(Rng& rng, int samples, int dim, double label_noise_std);

/// Contiguous shards, sizes differing by at most one row.
std::vector<RegressionTask> split_task(const RegressionTask& task, int devices);

/// (1/n) sum_i (y_i - x_i^T w)^2
double mse_loss(const ModelVector& w, const RegressionTask& task);

/// (2/n) X^T (X w - y)
ModelVector local_gradient(const ModelVector& w, const RegressionTask& shard);

/// w - beta * grad(w)
ModelVector local_update(const ModelVector& global, double beta, const RegressionTask& shard);

/// Gaussian distortion with per-component variance e_t / dim, so E||eps||^2 = e_t.
ModelVector draw_injected_error(Rng& rng, int dim, double e_t);

enum class DistortionMode { None, Injected, Physical };

struct FlConfig {
  int devices = 10;
  int rounds = 50;
  double beta = 0.01;
  int model_dim = 128;
  int samples = 1000;
  double label_noise_std = 0.1;
  DistortionMode mode = DistortionMode::Injected;
  double eta = 5.0;
  std::optional<double> injected_error;  // overrides the analytic e_t in injected mode
  OfdmConfig ofdm;
  ChannelConfig channel;
  OtaOptions ota;
  std::uint64_t seed = 1;

  void validate() const;
};

struct RoundRecord {
  int round = 0;
  double loss_ideal = 0.0;
  double loss_dist = 0.0;
  double eps_sq = 0.0;        // ||eps(t)||^2 of this round's aggregation
  double accumulated = 0.0;   // A(t) = ||theta_dist(t) - theta_ideal(t)||^2
  double partial_bound = 0.0; // (t + 1 + beta eta) e_t
};

struct RunResult {
  std::vector<RoundRecord> rounds;  // t = 0..T
  double e_t = 0.0;
  double final_bound = 0.0;   // (T + 1 + beta eta) e_t
  double final_actual = 0.0;  // A(T)
};

/// Runs the ideal and the distorted trajectory side by side from theta(0) = 0
/// on the same data. Row 0 is the shared initial model; rounds 1..T each
/// aggregate one set of local updates.
RunResult run(const FlConfig& cfg, const BoundParams& bounds);

}  // namespace otafl
