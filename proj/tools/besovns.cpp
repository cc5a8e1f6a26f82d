#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "besovns/cli/config.hpp"
#include "besovns/cli/experiment.hpp"

namespace {

int with_config(const std::string& path, int (*command)(const besovns::cli::RunConfig&, std::ostream&, std::ostream&)) {
  besovns::cli::RunConfig config;
  try {
    if (!path.empty()) config = besovns::cli::load_config(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return besovns::cli::kExitUsage;
  }
  return command(config, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Navier-Stokes runs with Besov regularity-criterion monitoring"};
  app.require_subcommand(1);
  app.footer(std::string("\nExit codes: 0 all criteria pass, 2 any fail, 3 any inconclusive, 1 usage error.\n") +
             "Relative output directories are placed under $" + besovns::cli::kOutputRootEnv + " when it is set.\n\n" +
             besovns::cli::defaults_help());

  std::string run_config;
  int ensemble = 0;
  auto* run = app.add_subcommand("run", "Solve, monitor every criterion and write timeseries.csv and report.csv");
  run->add_option("config", run_config, "Config file (defaults when omitted)");
  run->add_option("--ensemble", ensemble, "Run N consecutive seeds, each into <dir>/seed-<k>")->check(CLI::PositiveNumber);

  std::string calib_config;
  auto* calib = app.add_subcommand("calibrate", "Measure the inequality constants on the seeded ensemble");
  calib->add_option("config", calib_config, "Config file (defaults when omitted)");

  std::string ineq_config;
  auto* ineq = app.add_subcommand("verify-inequalities", "Measure the functional inequalities on the ensemble");
  ineq->add_option("config", ineq_config, "Config file (defaults when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : besovns::cli::kExitUsage;
  }

  if (*run) {
    if (ensemble > 0) {
      besovns::cli::RunConfig config;
      try {
        if (!run_config.empty()) config = besovns::cli::load_config(run_config);
      } catch (const std::exception& e) {
        std::cerr << "error: " << run_config << ": " << e.what() << "\n";
        return besovns::cli::kExitUsage;
      }
      return besovns::cli::run_ensemble(config, ensemble, std::cout, std::cerr);
    }
    return with_config(run_config, besovns::cli::run_experiment);
  }
  if (*calib) return with_config(calib_config, besovns::cli::calibrate_command);
  return with_config(ineq_config, besovns::cli::verify_inequalities_command);
}
