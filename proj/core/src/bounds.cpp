#include "otafl/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "otafl/csv.hpp"
#include "otafl/parallel.hpp"
#include "otafl/rng.hpp"
#include "otafl/types.hpp"

namespace otafl {

namespace {

constexpr std::size_t kTrialsPerBlock = 4096;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Sums trial(rng) over `trials` draws. Trials are grouped into fixed-size
// blocks with their own stream so the total does not depend on `jobs`.
template <typename Trial>
double mc_mean(std::size_t trials, std::uint64_t seed, int jobs, Trial&& trial) {
  if (trials == 0) throw std::invalid_argument("Monte-Carlo validation needs at least one trial");
  const std::size_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, jobs, [&](std::size_t b) {
    Rng rng = make_rng(seed, b);
    const std::size_t begin = b * kTrialsPerBlock;
    const std::size_t end = std::min(trials, begin + kTrialsPerBlock);
    double acc = 0.0;
    for (std::size_t t = begin; t < end; ++t) acc += trial(rng);
    partial[b] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total / static_cast<double>(trials);
}

McValidation finish(double mc, double bound, std::size_t trials, std::uint64_t seed) {
  McValidation v;
  v.mc_estimate = mc;
  v.bound = bound;
  v.trials = trials;
  v.seed = seed;
  if (bound == 0.0 && mc == 0.0) {
    v.exact = true;
    v.ratio = std::numeric_limits<double>::quiet_NaN();
  } else if (bound == 0.0) {
    v.ratio = std::numeric_limits<double>::infinity();
  } else {
    v.ratio = mc / bound;
  }
  return v;
}

}  // namespace

void BoundParams::validate() const {
  if (devices < 1 || antennas < 1 || paths < 1)
    throw ConfigError("bounds: K, N and L must be at least 1");
  if (subcarriers < 1) throw ConfigError("bounds: F_sc must be positive");
  if (q < 1) throw ConfigError("bounds: ICI half-window q must be at least 1");
  if (!(gamma > 0.0)) throw ConfigError("bounds: ICI decay exponent must be positive");
  if (eta < 0.0) throw ConfigError("bounds: eta must be non-negative");
  if (beta < 0.0) throw ConfigError("bounds: beta must be non-negative");
  if (rounds < 0) throw ConfigError("bounds: T must be non-negative");
  if (tap_std < 0.0 || noise_std < 0.0 || sigma_tau < 0.0)
    throw ConfigError("bounds: standard deviations must be non-negative");
  if (ici_mu_exponent != 1 && ici_mu_exponent != 2)
    throw ConfigError("bounds: ici_mu_exponent must be 1 or 2");
  if (lipschitz && eta > *lipschitz * *lipschitz)
    throw ConfigError("bounds: eta exceeds the squared Lipschitz constant");
}

double gaussian_sinc_sq_factor(double mu, double sigma, int subcarriers, int gamma_index,
                               int mu_exponent) {
  if (sigma < 0.0) throw std::invalid_argument("gaussian_sinc_sq_factor: sigma must be >= 0");
  const double f = subcarriers;
  const double g = gamma_index;
  const double spread = 1.0 / std::sqrt(1.0 + 4.0 * kPi * kPi * g * g * sigma * sigma / (f * f));
  const double shift_arg = 2.0 * kPi * std::pow(g, mu_exponent) * mu / f;
  return spread / (1.0 + shift_arg * shift_arg);
}

double lemma1_bound(const BoundParams& p) {
  p.validate();
  const double s2 = p.tap_std * p.tap_std;
  const double l = p.paths;
  return (p.devices - 1.0) / p.antennas * l * l * s2 * s2 *
         gaussian_sinc_sq_factor(p.mu_tau, p.sigma_tau, p.subcarriers, 1, p.ici_mu_exponent);
}

double ici_weight(int gamma_index, int q, double gamma) {
  if (q < 1 || gamma_index < 1 || gamma_index > q)
    throw std::invalid_argument("ici_weight: Gamma must lie in [1, q]");
  double norm = 0.0;
  for (int i = 1; i <= q; ++i) norm += 2.0 * std::pow(i, -gamma);
  return std::pow(gamma_index, -gamma) / norm;
}

double lemma2_bound(const BoundParams& p) {
  p.validate();
  const double s2 = p.tap_std * p.tap_std;
  double window = 0.0;
  for (int g = 1; g <= p.q; ++g) {
    window += 2.0 * ici_weight(g, p.q, p.gamma) *
              gaussian_sinc_sq_factor(p.mu_tau, p.sigma_tau, p.subcarriers, g, p.ici_mu_exponent);
  }
  return p.devices * s2 * s2 / p.antennas * window;
}

double noise_bound(const BoundParams& p) {
  p.validate();
  return p.devices * p.tap_std * p.tap_std * p.noise_std * p.noise_std / p.antennas;
}

BoundReport single_round_error(const BoundParams& p) {
  BoundReport r;
  r.lemma1 = lemma1_bound(p);
  r.lemma2 = lemma2_bound(p);
  r.noise = noise_bound(p);
  r.e_t = r.lemma1 + r.lemma2 + r.noise;
  r.accumulated = accumulated_bound(r.e_t, p.rounds, p.beta, p.eta);
  if (p.paths != 1) {
    r.notes = "noise term uses sigma_h^2 while the per-subcarrier channel variance is L*sigma_h^2";
  }
  return r;
}

double accumulated_bound(double e_t, int rounds, double beta, double eta) {
  return (rounds + 1.0 + beta * eta) * e_t;
}

std::vector<double> partial_bound_curve(double e_t, int rounds, double beta, double eta) {
  std::vector<double> curve(static_cast<std::size_t>(rounds) + 1);
  for (int t = 0; t <= rounds; ++t) curve[t] = accumulated_bound(e_t, t, beta, eta);
  return curve;
}

McValidation mc_validate_lemma1(const BoundParams& p, std::size_t trials, std::uint64_t seed, int jobs) {
  p.validate();
  const double h_std = std::sqrt(static_cast<double>(p.paths)) * p.tap_std;
  const int k_count = p.devices;
  const int n_count = p.antennas;
  const double f = p.subcarriers;

  // User j = 0 is the reference; kappa sums the other K-1 users.
  const double mc = mc_mean(trials, seed, jobs, [&](Rng& rng) {
    Complex kappa{};
    for (int n = 0; n < n_count; ++n) {
      const Complex hj = complex_normal(rng, h_std);
      for (int k = 1; k < k_count; ++k) {
        const Complex hk = complex_normal(rng, h_std);
        const double tau = normal(rng, p.mu_tau, p.sigma_tau);
        kappa += sinc(2.0 * kPi * tau / f) * std::conj(hk) * hj;
      }
    }
    kappa /= static_cast<double>(n_count);
    return std::norm(kappa);
  });
  return finish(mc, lemma1_bound(p), trials, seed);
}

McValidation mc_validate_lemma2(const BoundParams& p, std::size_t trials, std::uint64_t seed, int jobs) {
  p.validate();
  std::vector<double> weights(p.q);
  for (int g = 1; g <= p.q; ++g) weights[g - 1] = ici_weight(g, p.q, p.gamma);
  const double f = p.subcarriers;

  const double mc = mc_mean(trials, seed, jobs, [&](Rng& rng) {
    double acc = 0.0;
    for (int g = 1; g <= p.q; ++g) {
      for (int side = 0; side < 2; ++side) {
        Complex zeta{};
        for (int n = 0; n < p.antennas; ++n) {
          for (int k = 0; k < p.devices; ++k) {
            const Complex h_uu = complex_normal(rng, p.tap_std);
            const Complex h_uv = complex_normal(rng, p.tap_std);
            const double tau = normal(rng, p.mu_tau, p.sigma_tau);
            zeta += sinc(2.0 * kPi * g * tau / f) * std::conj(h_uu) * h_uv;
          }
        }
        zeta /= static_cast<double>(p.antennas);
        acc += weights[g - 1] * std::norm(zeta);
      }
    }
    return acc;
  });
  return finish(mc, lemma2_bound(p), trials, seed);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("log_log_slope: need at least two matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<std::string> bound_report_columns() {
  return {"K",    "N",     "L",     "sigma_h", "sigma_z", "mu_tau",          "sigma_tau",
          "F_sc", "q",     "gamma", "beta",    "eta",     "T",               "ici_mu_exponent",
          "lemma1", "lemma2", "noise", "e_t",  "accumulated"};
}

std::vector<std::string> bound_report_row(const BoundParams& p, const BoundReport& r) {
  return {std::to_string(p.devices),   std::to_string(p.antennas),   std::to_string(p.paths),
          format_double(p.tap_std),    format_double(p.noise_std),   format_double(p.mu_tau),
          format_double(p.sigma_tau),  std::to_string(p.subcarriers), std::to_string(p.q),
          format_double(p.gamma),      format_double(p.beta),        format_double(p.eta),
          std::to_string(p.rounds),    std::to_string(p.ici_mu_exponent),
          format_double(r.lemma1),     format_double(r.lemma2),      format_double(r.noise),
          format_double(r.e_t),        format_double(r.accumulated)};
}

}  // namespace otafl
