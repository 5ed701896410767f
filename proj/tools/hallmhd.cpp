#include <CLI11.hpp>
#include <iostream>

#include "hallmhd/errors.hpp"
#include "hallmhd/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving dual-field solver for incompressible Hall MHD"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run the scenario described by a JSON configuration");
  run->add_option("--config", config_path, "Configuration file (JSON)")->required();
  run->add_option("--set", overrides, "Override a configuration value, e.g. time.dt=0.05");

  auto* sweep = app.add_subcommand("sweep", "Run a temporal or spatial convergence sweep");
  sweep->add_option("--config", config_path, "Configuration file (JSON)")->required();
  sweep->add_option("--set", overrides, "Override a configuration value");

  CLI11_PARSE(app, argc, argv);

  try {
    const hallmhd::RunConfig config = hallmhd::load_config(config_path, overrides);
    if (sweep->parsed() && !config.is_sweep()) {
      std::cerr << "error: 'sweep' needs scenario temporal_convergence or spatial_convergence, got "
                << hallmhd::to_string(config.scenario) << "\n";
      return 2;
    }
    hallmhd::execute(config, std::cout);
  } catch (const hallmhd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
