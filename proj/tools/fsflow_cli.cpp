// fsflow run <config> | check <config> | fit <diagnostics.csv>
//
// FSFLOW_THREADS overrides the worker thread count.

#include <iostream>

#include "CLI11.hpp"
#include "fsflow/errors.hpp"
#include "fsflow/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Viscous free-surface flow over a flat bottom, spectral solver"};
  app.require_subcommand(1);

  std::string config_path, diag_path;
  auto* run = app.add_subcommand("run", "run a simulation from a JSON config");
  run->add_option("config", config_path, "config file")->required();
  auto* check = app.add_subcommand("check", "validate a config and report initial compatibility");
  check->add_option("config", config_path, "config file")->required();
  auto* fit = app.add_subcommand("fit", "refit the energy decay of a diagnostics table");
  fit->add_option("diagnostics", diag_path, "diagnostics CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fsflow::kConfigError;
  }

  if (*fit) return fsflow::fit_command(diag_path, std::cout);

  fsflow::RunConfig cfg;
  try {
    cfg = fsflow::parse_config(config_path);
  } catch (const fsflow::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return fsflow::kIoError;
  } catch (const fsflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return fsflow::kConfigError;
  }
  if (*check) return fsflow::check_command(cfg, std::cout);
  const int rc = fsflow::run_command(cfg, std::cout);
  if (rc != fsflow::kOk) std::cerr << "exit status " << rc << '\n';
  return rc;
}
