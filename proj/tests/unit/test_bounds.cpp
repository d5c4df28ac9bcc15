#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "otafl/bounds.hpp"
#include "otafl/types.hpp"

using namespace otafl;

// Reference values evaluated independently in extended precision from the
// closed forms at K=10, N=5, L=1, sigma_h=0.2, sigma_z=0.1, mu=0.1,
// sigma=0.01, F=64, q=2, gamma=2.
namespace frozen {
constexpr double f_gamma1 = 0.999903144565795;
constexpr double f_gamma2 = 0.998458324118772;
constexpr double lemma1 = 0.00287972105634949;
constexpr double lemma2 = 0.00319876537752445;
constexpr double noise = 0.0008;
constexpr double e_t = 0.00687848643387394;
}  // namespace frozen

TEST_CASE("sinc-squared factor") {
  CHECK(gaussian_sinc_sq_factor(0.0, 0.0, 64, 1) == 1.0);
  CHECK(gaussian_sinc_sq_factor(0.0, 0.0, 64, 3) == 1.0);
  CHECK(gaussian_sinc_sq_factor(0.1, 0.01, 64, 1) == doctest::Approx(frozen::f_gamma1).epsilon(1e-13));
  CHECK(gaussian_sinc_sq_factor(0.1, 0.01, 64, 2) == doctest::Approx(frozen::f_gamma2).epsilon(1e-13));
  // exponent choice only matters for Gamma > 1
  CHECK(gaussian_sinc_sq_factor(0.1, 0.01, 64, 1, 1) == gaussian_sinc_sq_factor(0.1, 0.01, 64, 1, 2));
  CHECK(gaussian_sinc_sq_factor(0.1, 0.01, 64, 2, 1) > gaussian_sinc_sq_factor(0.1, 0.01, 64, 2, 2));
  CHECK_THROWS_AS(gaussian_sinc_sq_factor(0.1, -0.01, 64, 1), std::invalid_argument);
}

TEST_CASE("sinc-squared factor against a Lorentzian Monte Carlo") {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> tau(0.1, 0.01);
  double acc = 0.0;
  const int samples = 1000000;
  for (int i = 0; i < samples; ++i) {
    const double x = 2.0 * 3.14159265358979323846 * tau(gen) / 64.0;
    acc += 1.0 / (1.0 + x * x);
  }
  CHECK(acc / samples == doctest::Approx(gaussian_sinc_sq_factor(0.1, 0.01, 64, 1)).epsilon(1e-5));
}

TEST_CASE("property: sinc-squared factor is monotone in mu and sigma") {
  for (int g = 1; g <= 4; ++g) {
    double prev = 2.0;
    for (double mu = 0.0; mu < 5.0; mu += 0.25) {
      const double f = gaussian_sinc_sq_factor(mu, 0.1, 64, g);
      CHECK(f < prev);
      CHECK(gaussian_sinc_sq_factor(-mu, 0.1, 64, g) == f);
      prev = f;
    }
    prev = 2.0;
    for (double s = 0.0; s < 5.0; s += 0.25) {
      const double f = gaussian_sinc_sq_factor(0.3, s, 64, g);
      CHECK(f < prev);
      prev = f;
    }
  }
}

TEST_CASE("lemma 1") {
  BoundParams p;
  CHECK(lemma1_bound(p) == doctest::Approx(frozen::lemma1).epsilon(1e-13));
  p.devices = 1;
  CHECK(lemma1_bound(p) == 0.0);
  p = BoundParams{};
  const double base = lemma1_bound(p);
  p.antennas = 10;
  CHECK(lemma1_bound(p) == doctest::Approx(base / 2).epsilon(1e-15));
  p.antennas = 5;
  p.paths = 3;
  CHECK(lemma1_bound(p) == doctest::Approx(9 * base).epsilon(1e-15));
}

TEST_CASE("ICI weights") {
  CHECK(ici_weight(1, 2, 2.0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(ici_weight(2, 2, 2.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(ici_weight(1, 3, 60.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ici_weight(2, 3, 60.0) < 1e-15);
  CHECK_THROWS_AS(ici_weight(0, 2, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ici_weight(3, 2, 2.0), std::invalid_argument);
}

TEST_CASE("property: ICI weights are normalized") {
  for (int q = 1; q <= 8; ++q) {
    for (double g : {0.5, 1.0, 2.0, 4.0}) {
      double sum = 0.0;
      for (int i = 1; i <= q; ++i) sum += 2.0 * ici_weight(i, q, g);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("lemma 2") {
  BoundParams p;
  CHECK(lemma2_bound(p) == doctest::Approx(frozen::lemma2).epsilon(1e-13));
  CHECK(lemma2_bound(p) == doctest::Approx(0.0032 * (0.8 * frozen::f_gamma1 + 0.2 * frozen::f_gamma2)).epsilon(1e-13));
  p.mu_tau = 0.0;
  p.sigma_tau = 0.0;
  CHECK(lemma2_bound(p) == doctest::Approx(10 * 0.0016 / 5).epsilon(1e-14));
  p = BoundParams{};
  double prev = 1.0;
  for (double mu = 0.0; mu < 10.0; mu += 0.5) {
    p.mu_tau = mu;
    CHECK(lemma2_bound(p) <= prev);
    prev = lemma2_bound(p);
  }
}

TEST_CASE("noise term") {
  BoundParams p;
  CHECK(noise_bound(p) == doctest::Approx(frozen::noise).epsilon(1e-14));
  p.devices = 20;
  CHECK(noise_bound(p) == doctest::Approx(2 * frozen::noise).epsilon(1e-14));
  p.antennas = 10;
  CHECK(noise_bound(p) == doctest::Approx(frozen::noise).epsilon(1e-14));
  p.noise_std = 0.0;
  CHECK(noise_bound(p) == 0.0);
}

TEST_CASE("single round error") {
  BoundParams p;
  const auto r = single_round_error(p);
  CHECK(r.e_t == doctest::Approx(frozen::e_t).epsilon(1e-13));
  CHECK(r.e_t == r.lemma1 + r.lemma2 + r.noise);
  CHECK(r.accumulated == (p.rounds + 1 + p.beta * p.eta) * r.e_t);

  p.devices = 1;
  p.noise_std = 0.0;
  p.sigma_tau = 0.0;
  p.mu_tau = 0.0;
  const auto only_ici = single_round_error(p);
  CHECK(only_ici.e_t == doctest::Approx(0.0016 / 5).epsilon(1e-14));
  CHECK(only_ici.lemma1 == 0.0);
}

TEST_CASE("property: e_t monotonicity") {
  BoundParams p;
  const double base = single_round_error(p).e_t;
  for (int n = 1; n < 20; ++n) {
    BoundParams a = p, b = p;
    a.antennas = n;
    b.antennas = n + 1;
    CHECK(single_round_error(a).e_t > single_round_error(b).e_t);
  }
  for (int k = 1; k < 20; ++k) {
    BoundParams a = p, b = p;
    a.devices = k;
    b.devices = k + 1;
    CHECK(single_round_error(a).e_t <= single_round_error(b).e_t);
  }
  BoundParams q = p;
  q.tap_std = 0.3;
  CHECK(single_round_error(q).e_t > base);
  q = p;
  q.noise_std = 0.2;
  CHECK(single_round_error(q).e_t > base);
  q = p;
  q.sigma_tau = 0.5;
  CHECK(lemma1_bound(q) < lemma1_bound(p));
  CHECK(lemma2_bound(q) < lemma2_bound(p));
}

TEST_CASE("accumulated bound") {
  CHECK(accumulated_bound(1.0, 10, 0.01, 5.0) == doctest::Approx(11.05).epsilon(1e-15));
  CHECK(accumulated_bound(0.3, 0, 0.0, 5.0) == 0.3);
  CHECK(accumulated_bound(0.3, 11, 0.01, 5.0) - accumulated_bound(0.3, 10, 0.01, 5.0) == doctest::Approx(0.3));
  const auto curve = partial_bound_curve(2.0, 4, 0.01, 5.0);
  REQUIRE(curve.size() == 5);
  for (int t = 0; t <= 4; ++t) CHECK(curve[t] == doctest::Approx((t + 1.05) * 2.0));
}

TEST_CASE("parameter validation") {
  BoundParams p;
  p.q = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = BoundParams{};
  p.gamma = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = BoundParams{};
  p.lipschitz = 2.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.lipschitz = 3.0;
  CHECK_NOTHROW(p.validate());
  p = BoundParams{};
  p.ici_mu_exponent = 3;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("Monte-Carlo zero cases are exact") {
  BoundParams p;
  p.devices = 1;
  const auto v = mc_validate_lemma1(p, 10000, 1);
  CHECK(v.exact);
  CHECK(v.mc_estimate == 0.0);
  CHECK(v.bound == 0.0);
  CHECK(std::isnan(v.ratio));
  CHECK(v.passes());

  BoundParams z;
  z.tap_std = 0.0;
  const auto w = mc_validate_lemma2(z, 10000, 1);
  CHECK(w.exact);
  CHECK(w.passes());
}

TEST_CASE("Monte-Carlo estimates stay under the bounds") {
  BoundParams p;
  const auto a = mc_validate_lemma1(p, 20000, 7);
  const auto b = mc_validate_lemma2(p, 20000, 7);
  CHECK(a.ratio <= 1.05);
  CHECK(b.ratio <= 1.05);
  CHECK(a.ratio > 0.5);
  CHECK(b.ratio > 0.5);
  CHECK(a.trials == 20000);
  CHECK(a.seed == 7);
}

TEST_CASE("Monte-Carlo results do not depend on the worker count") {
  BoundParams p;
  const auto a = mc_validate_lemma1(p, 10000, 3, 1);
  const auto b = mc_validate_lemma1(p, 10000, 3, 3);
  CHECK(a.mc_estimate == b.mc_estimate);
  const auto c = mc_validate_lemma2(p, 10000, 3, 1);
  const auto d = mc_validate_lemma2(p, 10000, 3, 4);
  CHECK(c.mc_estimate == d.mc_estimate);
}

TEST_CASE("log-log slope") {
  const std::vector<double> x{2, 5, 10};
  const std::vector<double> y{1.0 / 2, 1.0 / 5, 1.0 / 10};
  CHECK(log_log_slope(x, y) == doctest::Approx(-1.0).epsilon(1e-12));
  const std::vector<double> sq{4, 25, 100};
  CHECK(log_log_slope(x, sq) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_log_slope(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("bound CSV row matches its columns") {
  BoundParams p;
  const auto cols = bound_report_columns();
  const auto row = bound_report_row(p, single_round_error(p));
  CHECK(cols.size() == row.size());
  CHECK(cols.back() == "accumulated");
}
