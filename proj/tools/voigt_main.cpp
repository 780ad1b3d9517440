// voigt: simulate | sweep | diagnose. See README.md for the config format.

#include <CLI11.hpp>

#include <iostream>
#include <limits>

#include "voigt/cli_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral 2D Euler / Euler-Voigt solver and convergence harness"};
  app.set_version_flag("--version", voigt::kToolVersion);
  app.require_subcommand(1);

  std::string sim_config;
  auto* simulate = app.add_subcommand("simulate", "Integrate one configuration and write diagnostics");
  simulate->add_option("config", sim_config, "INI configuration file")->required();

  std::string sweep_config;
  bool self_test = false;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run an alpha sweep and fit convergence rates");
  sweep->add_option("config", sweep_config, "INI configuration file with a [sweep] section");
  sweep->add_flag("--self-test", self_test, "Check fit_rate on synthetic power laws and exit");
  sweep->add_option("-j,--jobs", jobs, "Concurrent runs (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  std::string snapshot;
  voigt::DiagnoseOptions opts;
  auto* diagnose = app.add_subcommand("diagnose", "Print norms and inequality ratios of a snapshot as CSV");
  diagnose->add_option("snapshot", snapshot, "VFLD snapshot file")->required();
  diagnose->add_option("--sobolev", opts.sobolev, "Orders s of ||u||_{s,2}")->delimiter(',');
  diagnose->add_option("--lp", opts.lp, "Exponents p of ||omega||_p (inf allowed)")->delimiter(',');
  diagnose->add_option("--gagliardo", opts.gagliardo, "Exponents p >= 2 of the Gagliardo-Nirenberg ratio")
      ->delimiter(',');
  diagnose->add_option("--cz", opts.cz, "Exponents p > 2 of the Calderon-Zygmund ratio")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(voigt::ExitCode::config);
  }

  if (simulate->parsed()) return voigt::cmd_simulate(sim_config, std::cout, std::cerr);
  if (sweep->parsed()) {
    if (self_test) return voigt::cmd_sweep_self_test(std::cout);
    if (sweep_config.empty()) {
      std::cerr << "error: sweep needs a config file or --self-test\n";
      return static_cast<int>(voigt::ExitCode::config);
    }
    return voigt::cmd_sweep(sweep_config, jobs, std::cout, std::cerr);
  }
  return voigt::cmd_diagnose(snapshot, opts, std::cout, std::cerr);
}
