#include "otafl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "otafl/csv.hpp"
#include "otafl/rng.hpp"

namespace otafl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Removes a trailing "# comment" that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::optional<double> parse_number(std::string_view s) {
  std::string text(s);
  text.erase(std::remove(text.begin(), text.end(), '_'), text.end());
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = text.data() + (text.front() == '+' ? 1 : 0);
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string show_value(const ConfigValue& v) {
  struct Visitor {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(const std::string& s) const { return "\"" + s + "\""; }
    std::string operator()(const std::vector<double>& xs) const {
      std::string out = "[";
      for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_double(xs[i]);
      return out + "]";
    }
  };
  return std::visit(Visitor{}, v);
}

double as_double(const std::string& key, const ConfigValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw ConfigError("config: " + key + " must be a number");
}

long long as_integer(const std::string& key, const ConfigValue& v) {
  const double d = as_double(key, v);
  if (std::floor(d) != d || std::abs(d) > 9.0e15) throw ConfigError("config: " + key + " must be an integer");
  return static_cast<long long>(d);
}

int as_int(const std::string& key, const ConfigValue& v) { return static_cast<int>(as_integer(key, v)); }

bool as_bool(const std::string& key, const ConfigValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError("config: " + key + " must be true or false");
}

std::string as_string(const std::string& key, const ConfigValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError("config: " + key + " must be a string");
}

std::vector<double> as_list(const std::string& key, const ConfigValue& v) {
  if (const auto* xs = std::get_if<std::vector<double>>(&v)) return *xs;
  if (const auto* d = std::get_if<double>(&v)) return {*d};
  throw ConfigError("config: " + key + " must be a list of numbers");
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : "\"none\""; }

std::optional<double> as_optional(const std::string& key, const ConfigValue& v) {
  if (const auto* s = std::get_if<std::string>(&v); s && *s == "none") return std::nullopt;
  return as_double(key, v);
}

const char* mode_name(DistortionMode m) {
  switch (m) {
    case DistortionMode::None: return "none";
    case DistortionMode::Injected: return "injected";
    case DistortionMode::Physical: return "physical";
  }
  return "?";
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&, const ConfigValue&)> set;
  std::function<std::string(const ExperimentConfig&)> show;
};

std::string num(double d) { return format_double(d); }
std::string num(int i) { return std::to_string(i); }

#define OTAFL_INT(path, member)                                                                   \
  Field{path, [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) { c.member = as_int(k, v); }, \
        [](const ExperimentConfig& c) { return num(c.member); }}
#define OTAFL_DOUBLE(path, member)                                                                \
  Field{path, [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) { c.member = as_double(k, v); }, \
        [](const ExperimentConfig& c) { return num(c.member); }}
#define OTAFL_OPTIONAL(path, member)                                                              \
  Field{path, [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) { c.member = as_optional(k, v); }, \
        [](const ExperimentConfig& c) { return optional_text(c.member); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      OTAFL_INT("system.devices", system.devices),
      OTAFL_INT("system.antennas", system.antennas),
      OTAFL_INT("system.paths", system.paths),
      OTAFL_INT("system.subcarriers", system.subcarriers),
      OTAFL_INT("system.cp_length", system.cp_length),
      OTAFL_INT("system.model_dim", system.model_dim),
      OTAFL_DOUBLE("system.tap_std", system.tap_std),
      OTAFL_DOUBLE("system.noise_std", system.noise_std),
      OTAFL_DOUBLE("channel.alpha", channel.alpha),
      OTAFL_OPTIONAL("channel.innovation_std", channel.innovation_std),
      OTAFL_DOUBLE("channel.delay_mean", channel.delay_mean),
      OTAFL_DOUBLE("channel.delay_std", channel.delay_std),
      OTAFL_DOUBLE("channel.symbol_jitter_std", channel.symbol_jitter_std),
      Field{"channel.variation",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) {
              const std::string s = as_string(k, v);
              if (s == "block_static") c.channel.variation = TapVariation::BlockStatic;
              else if (s == "drift") c.channel.variation = TapVariation::IntraSymbolDrift;
              else throw ConfigError("config: " + k + " must be \"block_static\" or \"drift\"");
            },
            [](const ExperimentConfig& c) {
              return std::string(c.channel.variation == TapVariation::BlockStatic ? "\"block_static\"" : "\"drift\"");
            }},
      Field{"channel.tap_model",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) {
              const std::string s = as_string(k, v);
              if (s == "rayleigh") c.channel.tap_model = TapModel::Rayleigh;
              else if (s == "unit") c.channel.tap_model = TapModel::Unit;
              else throw ConfigError("config: " + k + " must be \"rayleigh\" or \"unit\"");
            },
            [](const ExperimentConfig& c) {
              return std::string(c.channel.tap_model == TapModel::Rayleigh ? "\"rayleigh\"" : "\"unit\"");
            }},
      OTAFL_DOUBLE("bounds.mu_tau", bounds.mu_tau),
      OTAFL_DOUBLE("bounds.sigma_tau", bounds.sigma_tau),
      OTAFL_INT("bounds.q", bounds.q),
      OTAFL_DOUBLE("bounds.gamma", bounds.gamma),
      OTAFL_INT("bounds.ici_mu_exponent", bounds.ici_mu_exponent),
      OTAFL_OPTIONAL("bounds.lipschitz", bounds.lipschitz),
      OTAFL_INT("fl.rounds", fl.rounds),
      OTAFL_DOUBLE("fl.beta", fl.beta),
      OTAFL_DOUBLE("fl.eta", fl.eta),
      OTAFL_INT("fl.samples", fl.samples),
      OTAFL_DOUBLE("fl.label_noise_std", fl.label_noise_std),
      Field{"fl.mode",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) {
              const std::string s = as_string(k, v);
              if (s == "none") c.fl.mode = DistortionMode::None;
              else if (s == "injected") c.fl.mode = DistortionMode::Injected;
              else if (s == "physical") c.fl.mode = DistortionMode::Physical;
              else throw ConfigError("config: " + k + " must be \"none\", \"injected\" or \"physical\"");
            },
            [](const ExperimentConfig& c) { return "\"" + std::string(mode_name(c.fl.mode)) + "\""; }},
      Field{"fl.normalize_gain",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) { c.fl.normalize_gain = as_bool(k, v); },
            [](const ExperimentConfig& c) { return std::string(c.fl.normalize_gain ? "true" : "false"); }},
      OTAFL_OPTIONAL("fl.injected_error", fl.injected_error),
      Field{"sweep.eta",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) { c.sweep.eta = as_list(k, v); },
            [](const ExperimentConfig& c) { return show_value(c.sweep.eta); }},
      Field{"sweep.antennas",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) {
              c.sweep.antennas.clear();
              for (double x : as_list(k, v)) c.sweep.antennas.push_back(as_int(k, ConfigValue{std::in_place_type<double>, x}));
            },
            [](const ExperimentConfig& c) {
              return show_value(std::vector<double>(c.sweep.antennas.begin(), c.sweep.antennas.end()));
            }},
      OTAFL_INT("run.trials", run.trials),
      Field{"run.mc_trials",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) {
              const long long n = as_integer(k, v);
              if (n < 1) throw ConfigError("config: " + k + " must be positive");
              c.run.mc_trials = static_cast<std::size_t>(n);
            },
            [](const ExperimentConfig& c) { return std::to_string(c.run.mc_trials); }},
      Field{"run.seed",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) {
              const long long n = as_integer(k, v);
              if (n < 0) throw ConfigError("config: " + k + " must be non-negative");
              c.run.seed = static_cast<std::uint64_t>(n);
            },
            [](const ExperimentConfig& c) { return std::to_string(c.run.seed); }},
      OTAFL_INT("run.jobs", run.jobs),
      Field{"run.out",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) { c.run.out = as_string(k, v); },
            [](const ExperimentConfig& c) { return "\"" + c.run.out + "\""; }},
      Field{"run.per_seed_csv",
            [](ExperimentConfig& c, const std::string& k, const ConfigValue& v) { c.run.per_seed_csv = as_bool(k, v); },
            [](const ExperimentConfig& c) { return std::string(c.run.per_seed_csv ? "true" : "false"); }},
  };
  return table;
}

#undef OTAFL_INT
#undef OTAFL_DOUBLE
#undef OTAFL_OPTIONAL

}  // namespace

ConfigValue parse_config_value(std::string_view raw) {
  const std::string_view s = trim(raw);
  if (s.empty()) throw ConfigError("config: empty value");
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') throw ConfigError("config: unterminated string " + std::string(s));
    return std::string(s.substr(1, s.size() - 2));
  }
  if (s.front() == '[') {
    if (s.back() != ']') throw ConfigError("config: unterminated list " + std::string(s));
    std::vector<double> items;
    std::string_view body = s.substr(1, s.size() - 2);
    while (!trim(body).empty()) {
      const auto comma = body.find(',');
      const std::string_view item = trim(body.substr(0, comma));
      if (!item.empty()) {
        const auto value = parse_number(item);
        if (!value) throw ConfigError("config: list item is not a number: " + std::string(item));
        items.push_back(*value);
      }
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return items;
  }
  if (const auto value = parse_number(s)) return *value;
  // Bare words are accepted as strings so command-line overrides need no quoting.
  return std::string(s);
}

ConfigTree ConfigTree::parse(std::string_view text, std::string_view source) {
  ConfigTree tree;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line_buf;
  int line_no = 0;
  while (std::getline(in, line_buf)) {
    ++line_no;
    const std::string_view line = trim(strip_comment(line_buf));
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty() || section.find('.') != std::string::npos)
        throw ConfigError(where + ": unsupported section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    try {
      tree.values_[full] = parse_config_value(line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return tree;
}

ConfigTree ConfigTree::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void ConfigTree::set(const std::string& key, std::string_view raw) { values_[key] = parse_config_value(raw); }

void ExperimentConfig::apply(const ConfigTree& tree) {
  for (const auto& [key, value] : tree.values()) {
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.key; });
    if (it == table.end()) throw ConfigError("config: unknown key " + key);
    it->set(*this, key, value);
  }
}

void ExperimentConfig::validate() const {
  if (sweep.eta.empty()) throw ConfigError("config: sweep.eta must not be empty");
  if (sweep.antennas.empty()) throw ConfigError("config: sweep.antennas must not be empty");
  for (int n : sweep.antennas) {
    if (n < 1) throw ConfigError("config: sweep.antennas entries must be positive");
  }
  for (double e : sweep.eta) {
    if (e < 0.0) throw ConfigError("config: sweep.eta entries must be non-negative");
  }
  if (run.trials < 1) throw ConfigError("config: run.trials must be positive");
  if (run.jobs < 1) throw ConfigError("config: run.jobs must be positive");
  ofdm_config().validate();
  channel_config(system.antennas).validate();
  bound_params(system.antennas, fl.eta).validate();
  fl_config(system.antennas, fl.eta, run.seed).validate();
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.show(*this));
  return out;
}

OfdmConfig ExperimentConfig::ofdm_config() const {
  return OfdmConfig{system.subcarriers, system.cp_length, system.model_dim};
}

ChannelConfig ExperimentConfig::channel_config(int antennas) const {
  ChannelConfig c;
  c.devices = system.devices;
  c.antennas = antennas;
  c.paths = system.paths;
  c.tap_std = system.tap_std;
  c.alpha = channel.alpha;
  c.innovation_std = channel.innovation_std;
  c.delay_mean = channel.delay_mean;
  c.delay_std = channel.delay_std;
  c.symbol_jitter_std = channel.symbol_jitter_std;
  c.variation = channel.variation;
  c.tap_model = channel.tap_model;
  c.seed = run.seed;
  return c;
}

BoundParams ExperimentConfig::bound_params(int antennas, double eta) const {
  BoundParams p;
  p.devices = system.devices;
  p.antennas = antennas;
  p.paths = system.paths;
  p.tap_std = system.tap_std;
  p.noise_std = system.noise_std;
  p.mu_tau = bounds.mu_tau;
  p.sigma_tau = bounds.sigma_tau;
  p.subcarriers = system.subcarriers;
  p.q = bounds.q;
  p.gamma = bounds.gamma;
  p.beta = fl.beta;
  p.eta = eta;
  p.rounds = fl.rounds;
  p.ici_mu_exponent = bounds.ici_mu_exponent;
  p.lipschitz = bounds.lipschitz;
  return p;
}

FlConfig ExperimentConfig::fl_config(int antennas, double eta, std::uint64_t seed) const {
  FlConfig c;
  c.devices = system.devices;
  c.rounds = fl.rounds;
  c.beta = fl.beta;
  c.model_dim = system.model_dim;
  c.samples = fl.samples;
  c.label_noise_std = fl.label_noise_std;
  c.mode = fl.mode;
  c.eta = eta;
  c.injected_error = fl.injected_error;
  c.ofdm = ofdm_config();
  c.channel = channel_config(antennas);
  c.channel.seed = seed;
  c.ota.noise_std = system.noise_std;
  c.ota.normalize_gain = fl.normalize_gain;
  c.seed = seed;
  return c;
}

std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t index) {
  return detail::splitmix64(detail::splitmix64(base) + index);
}

}  // namespace otafl
