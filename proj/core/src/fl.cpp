#include "otafl/fl.hpp"

#include <cmath>
#include <stdexcept>

namespace otafl {

RegressionTask gen_task(Rng& rng, int samples, int dim, double label_noise_std) {
  if (samples <= 0 || dim <= 0) throw std::invalid_argument("gen_task: sizes must be positive");
  if (label_noise_std < 0.0) throw std::invalid_argument("gen_task: label noise std must be >= 0");
  RegressionTask task;
  task.label_noise_std = label_noise_std;
  task.w_true.resize(dim);
  for (int j = 0; j < dim; ++j) task.w_true[j] = normal(rng, 0.0, 1.0);
  task.X.resize(samples, dim);
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < dim; ++j) task.X(i, j) = normal(rng, 0.0, 1.0);
  }
  task.y = task.X * task.w_true;
  for (int i = 0; i < samples; ++i) task.y[i] += normal(rng, 0.0, label_noise_std);
  return task;
}

std::vector<RegressionTask> split_task(const RegressionTask& task, int devices) {
  const auto n = task.samples();
  if (devices <= 0 || devices > n) throw std::invalid_argument("split_task: need 1 <= K <= n");
  std::vector<RegressionTask> shards;
  shards.reserve(devices);
  Eigen::Index begin = 0;
  for (int k = 0; k < devices; ++k) {
    const Eigen::Index rows = n / devices + (k < n % devices ? 1 : 0);
    RegressionTask s;
    s.X = task.X.middleRows(begin, rows);
    s.y = task.y.segment(begin, rows);
    s.w_true = task.w_true;
    s.label_noise_std = task.label_noise_std;
    shards.push_back(std::move(s));
    begin += rows;
  }
  return shards;
}

double mse_loss(const ModelVector& w, const RegressionTask& task) {
  return (task.y - task.X * w).squaredNorm() / static_cast<double>(task.samples());
}

ModelVector local_gradient(const ModelVector& w, const RegressionTask& shard) {
  if (w.size() != shard.X.cols()) throw std::invalid_argument("local_gradient: dimension mismatch");
  return (2.0 / static_cast<double>(shard.samples())) * (shard.X.transpose() * (shard.X * w - shard.y));
}

ModelVector local_update(const ModelVector& global, double beta, const RegressionTask& shard) {
  return global - beta * local_gradient(global, shard);
}

ModelVector draw_injected_error(Rng& rng, int dim, double e_t) {
  if (e_t < 0.0) throw std::invalid_argument("draw_injected_error: e_t must be >= 0");
  const double std = std::sqrt(e_t / dim);
  ModelVector eps(dim);
  for (int j = 0; j < dim; ++j) eps[j] = normal(rng, 0.0, std);
  return eps;
}

void FlConfig::validate() const {
  if (devices < 1) throw ConfigError("fl: K must be at least 1");
  if (rounds < 1) throw ConfigError("fl: T must be at least 1");
  if (!(beta > 0.0)) throw ConfigError("fl: learning rate must be positive");
  if (model_dim < 1) throw ConfigError("fl: model dimension must be positive");
  if (samples < devices) throw ConfigError("fl: need at least one sample per device");
  if (eta < 0.0) throw ConfigError("fl: eta must be non-negative");
  if (injected_error && *injected_error < 0.0) throw ConfigError("fl: injected error must be >= 0");
  if (mode == DistortionMode::Physical) {
    ofdm.validate();
    channel.validate();
    if (ofdm.model_dim != model_dim)
      throw ConfigError("fl: OFDM model dimension differs from the regression dimension");
    if (channel.devices != devices) throw ConfigError("fl: channel device count differs from K");
  }
}

RunResult run(const FlConfig& cfg, const BoundParams& bounds) {
  cfg.validate();
  if (bounds.devices != cfg.devices) throw ConfigError("fl: bound parameters use a different K");

  Rng data_rng = make_rng(cfg.seed, 0);
  Rng distortion_rng = make_rng(cfg.seed, 1);
  const RegressionTask task = gen_task(data_rng, cfg.samples, cfg.model_dim, cfg.label_noise_std);
  const std::vector<RegressionTask> shards = split_task(task, cfg.devices);

  RunResult result;
  result.e_t = cfg.injected_error.value_or(single_round_error(bounds).e_t);
  const std::vector<double> curve = partial_bound_curve(result.e_t, cfg.rounds, cfg.beta, cfg.eta);

  ModelVector ideal = ModelVector::Zero(cfg.model_dim);
  ModelVector distorted = ModelVector::Zero(cfg.model_dim);
  std::vector<ModelVector> locals_ideal(cfg.devices);
  std::vector<ModelVector> locals_dist(cfg.devices);

  auto record = [&](int t, double eps_sq) {
    RoundRecord rec;
    rec.round = t;
    rec.loss_ideal = mse_loss(ideal, task);
    rec.loss_dist = mse_loss(distorted, task);
    rec.eps_sq = eps_sq;
    rec.accumulated = (distorted - ideal).squaredNorm();
    rec.partial_bound = curve[t];
    result.rounds.push_back(rec);
  };
  record(0, 0.0);

  for (int t = 1; t <= cfg.rounds; ++t) {
    ModelVector mean_ideal = ModelVector::Zero(cfg.model_dim);
    ModelVector mean_dist = ModelVector::Zero(cfg.model_dim);
    for (int k = 0; k < cfg.devices; ++k) {
      locals_ideal[k] = local_update(ideal, cfg.beta, shards[k]);
      locals_dist[k] = local_update(distorted, cfg.beta, shards[k]);
      mean_ideal += locals_ideal[k];
      mean_dist += locals_dist[k];
    }
    mean_ideal /= static_cast<double>(cfg.devices);
    mean_dist /= static_cast<double>(cfg.devices);

    double eps_sq = 0.0;
    ideal = mean_ideal;
    switch (cfg.mode) {
      case DistortionMode::None:
        distorted = mean_dist;
        break;
      case DistortionMode::Injected: {
        const ModelVector eps = draw_injected_error(distortion_rng, cfg.model_dim, result.e_t);
        eps_sq = eps.squaredNorm();
        distorted = mean_dist + eps;
        break;
      }
      case DistortionMode::Physical: {
        const RoundEstimate est = ota_round(locals_dist, cfg.ofdm, cfg.channel, cfg.ota, distortion_rng);
        eps_sq = est.epsilon_sq;
        distorted = est.theta_hat;
        break;
      }
    }
    record(t, eps_sq);
  }
  result.final_bound = curve.back();
  result.final_actual = result.rounds.back().accumulated;
  return result;
}

}  // namespace otafl
