#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "otafl/bounds.hpp"
#include "otafl/channel.hpp"
#include "otafl/fl.hpp"
#include "otafl/ofdm.hpp"

namespace otafl {

using ConfigValue = std::variant<bool, double, std::string, std::vector<double>>;

/// Flat "section.key" -> value map read from a TOML-style file:
///
///   # comment
///   [section]
///   key = 1.5            # numbers, true/false, "strings", [1, 2, 3]
///
/// Nested tables, inline tables and multi-line values are not supported.
class ConfigTree {
 public:
  static ConfigTree parse(std::string_view text, std::string_view source = "<string>");
  static ConfigTree load(const std::filesystem::path& path);

  /// Parses `raw` with the same value grammar as the file and stores it.
  void set(const std::string& key, std::string_view raw);
  const std::map<std::string, ConfigValue>& values() const { return values_; }

 private:
  std::map<std::string, ConfigValue> values_;
};

ConfigValue parse_config_value(std::string_view raw);

/// Every knob of the experiment driver. Sections mirror the config file.
struct ExperimentConfig {
  struct System {
    int devices = 10;
    int antennas = 5;
    int paths = 1;
    int subcarriers = 64;
    int cp_length = 16;
    int model_dim = 128;
    double tap_std = 0.2;
    double noise_std = 0.1;
  } system;

  struct Channel {
    double alpha = 0.0;
    std::optional<double> innovation_std;
    double delay_mean = 0.1;
    double delay_std = 0.01;
    double symbol_jitter_std = 0.0;
    TapVariation variation = TapVariation::BlockStatic;
    TapModel tap_model = TapModel::Rayleigh;
  } channel;

  struct Bounds {
    double mu_tau = 0.1;
    double sigma_tau = 0.01;
    int q = 2;
    double gamma = 2.0;
    int ici_mu_exponent = 2;
    std::optional<double> lipschitz;
  } bounds;

  struct Fl {
    int rounds = 50;
    double beta = 0.01;
    double eta = 5.0;
    int samples = 1000;
    double label_noise_std = 0.1;
    DistortionMode mode = DistortionMode::Injected;
    bool normalize_gain = true;
    std::optional<double> injected_error;
  } fl;

  struct Sweep {
    std::vector<double> eta{1.0, 5.0, 10.0};
    std::vector<int> antennas{2, 5, 10};
  } sweep;

  struct Run {
    int trials = 100;
    std::size_t mc_trials = 100000;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string out = "results";
    bool per_seed_csv = true;
  } run;

  /// Applies every key of `tree`; unknown keys raise ConfigError.
  void apply(const ConfigTree& tree);
  void validate() const;

  /// "section.key" -> value text for every knob, in a fixed order.
  std::vector<std::pair<std::string, std::string>> resolved() const;

  OfdmConfig ofdm_config() const;
  ChannelConfig channel_config(int antennas) const;
  BoundParams bound_params(int antennas, double eta) const;
  FlConfig fl_config(int antennas, double eta, std::uint64_t seed) const;
};

/// Derived seed for replicate `index` of a sweep (same at every sweep point).
std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t index);

}  // namespace otafl
