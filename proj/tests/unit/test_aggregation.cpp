#include <doctest.h>

#include <cmath>
#include <vector>

#include "gen.hpp"
#include "oracles.hpp"
#include "otafl/aggregation.hpp"

using namespace otafl;

namespace {

EffectiveChannel random_channel(Rng& rng, int devices, int antennas, int f, bool diagonal = false) {
  EffectiveChannel h(devices, antennas, f);
  for (int k = 0; k < devices; ++k)
    for (int n = 0; n < antennas; ++n)
      for (int u = 0; u < f; ++u)
        for (int v = 0; v < f; ++v)
          if (!diagonal || u == v) h(k, n, u, v) = complex_normal(rng, u == v ? 0.2 : 0.05);
  return h;
}

ComplexMatrix received_from(const EffectiveChannel& h, const ComplexMatrix& thetas, const ComplexMatrix& noise) {
  const int f = h.subcarriers();
  ComplexMatrix y = noise;
  for (int n = 0; n < h.antennas(); ++n)
    for (int u = 0; u < f; ++u)
      for (int k = 0; k < h.devices(); ++k)
        for (int v = 0; v < f; ++v) y(n, u) += h(k, n, u, v) * thetas(k, v);
  return y;
}

std::vector<ModelVector> random_models(Rng& rng, int devices, int dim) {
  std::vector<ModelVector> models;
  for (int k = 0; k < devices; ++k) models.push_back(gen::model(rng, dim));
  return models;
}

ChannelConfig ideal_channel(int devices, int antennas) {
  ChannelConfig cfg;
  cfg.devices = devices;
  cfg.antennas = antennas;
  cfg.tap_model = TapModel::Unit;
  cfg.delay_mean = 0.0;
  cfg.delay_std = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("mrc examples") {
  Rng rng = make_rng(1);
  EffectiveChannel unit(1, 1, 8);
  for (int u = 0; u < 8; ++u) unit(0, 0, u, u) = 1.0;
  const ComplexMatrix y = gen::complex_matrix(rng, 1, 8);
  CHECK(gen::max_abs(mrc_combine(y, unit).transpose() - y) == 0.0);

  EffectiveChannel rot(1, 3, 8);
  for (int n = 0; n < 3; ++n)
    for (int u = 0; u < 8; ++u) rot(0, n, u, u) = Complex(0, 1);
  const ComplexMatrix y3 = gen::complex_matrix(rng, 3, 8);
  const ComplexVector out = mrc_combine(y3, rot);
  for (int u = 0; u < 8; ++u) CHECK(std::abs(out[u] - Complex(0, -1) * y3.col(u).mean()) < 1e-15);

  CHECK_THROWS_AS(mrc_combine(ComplexMatrix::Zero(2, 8), rot), std::invalid_argument);
}

TEST_CASE("property: mrc matches triple-loop evaluation") {
  Rng rng = make_rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = gen::uniform_int(rng, 1, 5), n = gen::uniform_int(rng, 1, 4), f = gen::uniform_int(rng, 1, 12);
    const auto h = random_channel(rng, k, n, f);
    const ComplexMatrix y = gen::complex_matrix(rng, n, f);
    std::vector<oracle::cvec> rows(n, oracle::cvec(f));
    for (int a = 0; a < n; ++a)
      for (int u = 0; u < f; ++u) rows[a][u] = y(a, u);
    const auto ref = oracle::mrc_bruteforce(rows, [&](int kk, int nn, int u) { return h(kk, nn, u, u); }, k);
    const ComplexVector out = mrc_combine(y, h);
    for (int u = 0; u < f; ++u) CHECK(std::abs(out[u] - ref[u]) < 1e-12);
  }
}

TEST_CASE("decompose special cases") {
  Rng rng = make_rng(3);
  SUBCASE("single device has no same-subcarrier interference") {
    const auto h = random_channel(rng, 1, 3, 8);
    const auto b = decompose(h, gen::complex_matrix(rng, 1, 8), gen::complex_matrix(rng, 3, 8));
    CHECK(gen::max_abs(b.same_sc_interference) == 0.0);
    CHECK(b.power_b() == 0.0);
  }
  SUBCASE("diagonal channel has no ICI") {
    const auto h = random_channel(rng, 4, 3, 8, true);
    const auto b = decompose(h, gen::complex_matrix(rng, 4, 8), gen::complex_matrix(rng, 3, 8));
    CHECK(gen::max_abs(b.ici) == 0.0);
  }
  SUBCASE("zero noise") {
    const auto h = random_channel(rng, 4, 3, 8);
    const ComplexMatrix thetas = gen::complex_matrix(rng, 4, 8);
    const ComplexMatrix z = ComplexMatrix::Zero(3, 8);
    const auto b = decompose(h, thetas, z);
    CHECK(gen::max_abs(b.noise) == 0.0);
    const ComplexVector y = mrc_combine(received_from(h, thetas, z), h);
    CHECK(gen::max_abs(b.desired + b.same_sc_interference + b.ici - y.transpose()) < 1e-10);
  }
  CHECK_THROWS_AS(decompose(random_channel(rng, 2, 2, 4), ComplexMatrix::Zero(3, 4), ComplexMatrix::Zero(2, 4)),
                  std::invalid_argument);
}

TEST_CASE("property: decomposition is complete") {
  Rng rng = make_rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = gen::uniform_int(rng, 1, 6), n = gen::uniform_int(rng, 1, 5), f = gen::uniform_int(rng, 2, 16);
    const auto h = random_channel(rng, k, n, f);
    const ComplexMatrix thetas = gen::complex_matrix(rng, k, f);
    const ComplexMatrix z = gen::complex_matrix(rng, n, f, 0.1);
    const auto b = decompose(h, thetas, z);
    const ComplexVector y = mrc_combine(received_from(h, thetas, z), h);
    CHECK(gen::max_abs(b.total() - y.transpose()) < 1e-10);
  }
}

TEST_CASE("breakdown append stacks rows") {
  Rng rng = make_rng(5);
  const auto h = random_channel(rng, 2, 2, 4);
  auto a = decompose(h, gen::complex_matrix(rng, 2, 4), gen::complex_matrix(rng, 2, 4));
  const auto b = decompose(h, gen::complex_matrix(rng, 2, 4), gen::complex_matrix(rng, 2, 4));
  const double pd = (a.noise.cwiseAbs2().sum() + b.noise.cwiseAbs2().sum()) / 8.0;
  a.append(b);
  CHECK(a.noise.rows() == 2);
  CHECK(a.power_d() == doctest::Approx(pd));
}

TEST_CASE("combining gain of an ideal channel equals K") {
  EffectiveChannel h(3, 2, 4);
  for (int k = 0; k < 3; ++k)
    for (int n = 0; n < 2; ++n)
      for (int u = 0; u < 4; ++u) h(k, n, u, u) = 1.0;
  const auto g = combining_gain(h);
  for (int u = 0; u < 4; ++u) CHECK(g[u] == doctest::Approx(3.0));
}

TEST_CASE("ideal channel reproduces the exact mean") {
  Rng rng = make_rng(6);
  for (int k : {1, 2, 5, 10}) {
    OfdmConfig ofdm{64, 16, 130};
    const auto models = random_models(rng, k, 130);
    ModelVector mean = ModelVector::Zero(130);
    for (const auto& m : models) mean += m;
    mean /= k;
    const auto est = ota_round(models, ofdm, ideal_channel(k, 3), OtaOptions{0.0, true}, rng);
    CHECK((est.theta_hat - mean).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(est.epsilon_sq <= 1e-16);
  }
  const auto one = random_models(rng, 1, 64);
  const auto raw = ota_round(one, OfdmConfig{64, 16, 64}, ideal_channel(1, 1), OtaOptions{0.0, false}, rng);
  CHECK(raw.epsilon_sq <= 1e-16);
}

TEST_CASE("zero models give a pure noise response") {
  Rng rng = make_rng(7);
  const std::vector<ModelVector> models(4, ModelVector::Zero(128));
  ChannelConfig cfg;
  cfg.devices = 4;
  const auto est = ota_round(models, OfdmConfig{}, cfg, OtaOptions{0.1, false}, rng);
  CHECK(est.epsilon_sq > 0.0);
  CHECK(est.epsilon_sq == doctest::Approx(est.theta_hat.squaredNorm()));
  CHECK(gen::max_abs(est.breakdown.desired) == 0.0);
  CHECK(gen::max_abs(est.breakdown.total() - est.breakdown.noise) == 0.0);

  const auto quiet = ota_round(models, OfdmConfig{}, cfg, OtaOptions{0.0, false}, rng);
  CHECK(quiet.epsilon_sq == 0.0);
}

TEST_CASE("realized noise term matches K sigma_h^2 sigma_z^2 / N") {
  Rng rng = make_rng(8);
  ChannelConfig cfg;  // K=10, N=5, sigma_h=0.2
  const auto models = random_models(rng, 10, 128);
  double sum = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) sum += ota_round(models, OfdmConfig{}, cfg, OtaOptions{0.1, false}, rng).breakdown.power_d();
  CHECK(sum / trials == doctest::Approx(8.0e-4).epsilon(0.10));
}

TEST_CASE("property: gain normalization is unbiased on random channels") {
  Rng rng = make_rng(9);
  ChannelConfig cfg;
  cfg.devices = 4;
  cfg.antennas = 16;
  cfg.delay_mean = 0.0;
  cfg.delay_std = 0.0;
  OfdmConfig ofdm{64, 16, 128};
  std::vector<ModelVector> models;
  const ModelVector common = ModelVector::Constant(128, 1.0);
  for (int k = 0; k < 4; ++k) models.push_back(common + 0.5 * gen::model(rng, 128));
  ModelVector mean = ModelVector::Zero(128);
  for (const auto& m : models) mean += m;
  mean /= 4.0;

  ModelVector avg = ModelVector::Zero(128);
  const int trials = 500;
  for (int t = 0; t < trials; ++t) avg += ota_round(models, ofdm, cfg, OtaOptions{0.0, true}, rng).theta_hat;
  avg /= trials;
  CHECK((avg - mean).norm() / mean.norm() < 0.02);
}

TEST_CASE("property: epsilon is invariant to a global tap rotation") {
  Rng rng = make_rng(10);
  ChannelConfig cfg;
  cfg.devices = 3;
  cfg.antennas = 2;
  cfg.paths = 2;
  cfg.delay_mean = 1.3;
  cfg.delay_std = 0.4;
  OfdmConfig ofdm{32, 8, 100};
  for (int trial = 0; trial < 20; ++trial) {
    const auto models = random_models(rng, 3, 100);
    const auto st = init_round(cfg, rng);
    ChannelState rotated = st;
    const Complex phase = std::polar(1.0, gen::uniform(rng, 0.0, 2.0 * kPi));
    for (auto& h : rotated.taps) h *= phase;
    rotated.previous_taps = rotated.taps;
    for (bool normalize : {false, true}) {
      Rng a = make_rng(100 + trial), b = make_rng(100 + trial);
      const double e0 = ota_round(models, ofdm, cfg, st, OtaOptions{0.0, normalize}, a).epsilon_sq;
      const double e1 = ota_round(models, ofdm, cfg, rotated, OtaOptions{0.0, normalize}, b).epsilon_sq;
      CHECK(e1 == doctest::Approx(e0).epsilon(1e-9));
    }
  }
}

TEST_CASE("ota_round rejects a device count mismatch") {
  Rng rng = make_rng(11);
  ChannelConfig cfg;
  cfg.devices = 3;
  const auto models = random_models(rng, 2, 128);
  CHECK_THROWS_AS(ota_round(models, OfdmConfig{}, cfg, OtaOptions{}, rng), std::invalid_argument);
}

TEST_CASE("ota_round propagates DelayExceedsCp") {
  Rng rng = make_rng(12);
  ChannelConfig cfg;
  cfg.devices = 2;
  cfg.delay_mean = 40.0;
  const auto models = random_models(rng, 2, 128);
  CHECK_THROWS_AS(ota_round(models, OfdmConfig{}, cfg, OtaOptions{}, rng), DelayExceedsCp);
}
