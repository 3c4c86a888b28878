#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "l2flow_cli/commands.hpp"

namespace {

using namespace l2flow::cli;

struct Overrides {
  std::string out;
  std::optional<int> resolution;
  std::optional<unsigned long long> seed;
};

ExperimentConfig load_with_overrides(const std::string& path, const Overrides& o) {
  ExperimentConfig cfg = load_config(path);
  if (!o.out.empty()) set_config_value(cfg, "output.directory", o.out);
  if (o.resolution) {
    set_config_value(cfg, "background.resolution", std::to_string(*o.resolution));
  }
  if (o.seed) set_config_value(cfg, "init.seed", std::to_string(*o.seed));
  return cfg;
}

int with_config(const std::string& path, const Overrides& o,
                int (*command)(const ExperimentConfig&, std::ostream&)) {
  try {
    return command(load_with_overrides(path, o), std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for the L2 curvature-energy flow on surfaces"};
  app.require_subcommand(1);

  std::string config;
  Overrides o;
  int resolution = 32;
  double eps = 1e-5;
  unsigned long long seed = 7;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "experiment config file")->required();
    sub->add_option("--out", o.out, "output directory (overrides output.directory)");
    sub->add_option("--resolution", o.resolution, "grid resolution for every axis");
    sub->add_option("--seed", o.seed, "overrides init.seed");
  };
  CLI::App* run = app.add_subcommand("run", "run the flow and write series.csv");
  add_common(run);
  CLI::App* diffeo = app.add_subcommand(
      "diffeo-check", "pullback invariance and full-flow residual on a short run");
  add_common(diffeo);
  CLI::App* sweep = app.add_subcommand("sweep", "normalized-flow runs over init.scale");
  add_common(sweep);

  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "first variation of F on random metrics");
  gradcheck->add_option("--resolution", resolution, "torus grid size")->check(CLI::Range(8, 4096));
  gradcheck->add_option("--eps", eps, "finite-difference step");
  gradcheck->add_option("--seed", seed, "random metric seed");

  CLI::App* xcheck = app.add_subcommand(
      "xcheck", "general tensor gradient against the conformal surface formula");
  xcheck->add_option("--resolution", resolution, "coarse torus grid size")
      ->check(CLI::Range(8, 2048));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  if (run->parsed()) return with_config(config, o, cmd_run);
  if (diffeo->parsed()) return with_config(config, o, cmd_diffeo_check);
  if (sweep->parsed()) return with_config(config, o, cmd_sweep);
  if (gradcheck->parsed()) return cmd_gradcheck(resolution, eps, seed, std::cout);
  if (xcheck->parsed()) return cmd_xcheck(resolution, std::cout);
  return kExitConfig;
}
