// otafl: bound tables, Monte-Carlo validation and FL error sweeps.
//
//   otafl <bounds|validate|fl|all> [--config FILE] [--jobs N] [--seed S] [--out DIR]
//         [--section.key=value ...]
//
// Exit codes: 0 all checks passed, 1 a check failed (JSON summary on stderr),
// 2 bad configuration or usage.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "otafl/config.hpp"
#include "otafl/experiments.hpp"
#include "otafl/version.hpp"

namespace {

bool is_override(const std::string& arg) {
  if (arg.rfind("--", 0) != 0) return false;
  const auto eq = arg.find('=');
  const auto dot = arg.find('.');
  return eq != std::string::npos && dot != std::string::npos && dot < eq;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> overrides;
  std::vector<char*> cli_args;
  for (int i = 0; i < argc; ++i) {
    if (i > 0 && is_override(argv[i])) {
      overrides.emplace_back(argv[i] + 2);
    } else {
      cli_args.push_back(argv[i]);
    }
  }

  CLI::App app{"OFDM over-the-air FL aggregation error simulator"};
  app.set_version_flag("--version", std::string(otafl::kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.footer("Any config value can be overridden with --section.key=value, e.g. --fl.rounds=20.");

  std::string config_path;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  app.add_option("--config", config_path, "TOML-style configuration file")->check(CLI::ExistingFile);
  app.add_option("--jobs", jobs, "Maximum worker threads");
  app.add_option("--seed", seed, "Base RNG seed");
  app.add_option("--out", out, "Output directory for CSV files");

  auto* bounds = app.add_subcommand("bounds", "Closed-form single-round and accumulated bounds");
  auto* validate = app.add_subcommand("validate", "Monte-Carlo checks of the interference bounds");
  auto* fl = app.add_subcommand("fl", "Multi-round FL sweeps over eta and N");
  auto* all = app.add_subcommand("all", "bounds, validate and fl in one go");

  try {
    app.parse(static_cast<int>(cli_args.size()), cli_args.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  otafl::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg.apply(otafl::ConfigTree::load(config_path));
    otafl::ConfigTree cli_tree;
    if (jobs) cli_tree.set("run.jobs", std::to_string(*jobs));
    if (seed) cli_tree.set("run.seed", std::to_string(*seed));
    if (out) cli_tree.set("run.out", "\"" + *out + "\"");
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      cli_tree.set(o.substr(0, eq), o.substr(eq + 1));
    }
    cfg.apply(cli_tree);
    cfg.validate();
  } catch (const otafl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  otafl::CommandOutcome outcome;
  try {
    if (bounds->parsed()) outcome = otafl::cmd_bounds(cfg);
    else if (validate->parsed()) outcome = otafl::cmd_validate(cfg);
    else if (fl->parsed()) outcome = otafl::cmd_fl(cfg);
    else if (all->parsed()) outcome = otafl::cmd_all(cfg);
  } catch (const otafl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    nlohmann::json summary = {{"status", "error"}, {"message", e.what()}};
    std::cerr << summary.dump() << "\n";
    return 1;
  }

  for (const auto& f : outcome.files) std::cout << f.string() << "\n";
  if (!outcome.ok()) {
    nlohmann::json summary = {{"status", "fail"}, {"failures", outcome.failures}};
    std::cerr << summary.dump() << "\n";
    return 1;
  }
  return 0;
}
