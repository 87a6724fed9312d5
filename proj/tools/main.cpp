// Command-line entry point: subcommand dispatch, shared flags, and the
// exit-code contract (0 success, 1 configuration/usage error,
// 2 variational divergence, 3 verification failure).

#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving simulation toolkit for exponentially "
               "damped Lagrangian systems"};
  app.require_subcommand(1);

  dvi_cli::CliOptions options;
  std::uint64_t seed_value = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config_path,
                    "Path to the experiment configuration (JSON)")
        ->required();
    sub->add_option("--out", options.out_dir,
                    "Output directory (overrides the config and "
                    "$DVI_OUT_DIR)");
    sub->add_option("--seed", seed_value,
                    "Seed override for randomized sampling and probes");
    sub->add_option("--threads", options.threads,
                    "Worker count for sweep campaigns")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Integrate a configured run and write per-step artifacts");
  CLI::App* compare = app.add_subcommand(
      "compare-euler",
      "Run the variational update and the explicit Euler baseline side by "
      "side");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sample a displacement region and classify each run");
  CLI::App* verify = app.add_subcommand(
      "verify", "Check the structural invariants of a configuration");
  for (CLI::App* sub : {simulate, compare, sweep, verify}) add_common(sub);
  verify->add_flag("--corrupt-coefficient", options.corrupt_coefficient,
                   "Negative control: mis-scale the position update so the "
                   "stationarity check must fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (app.get_subcommands().front()->count("--seed") > 0) {
    options.seed = seed_value;
  }

  try {
    if (simulate->parsed()) return dvi_cli::run_simulate(options);
    if (compare->parsed()) return dvi_cli::run_compare(options);
    if (sweep->parsed()) return dvi_cli::run_sweep(options);
    return dvi_cli::run_verify(options);
  } catch (const dvi_cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
