// The four tool commands: simulate a configured run, compare the
// variational update against the Euler baseline, execute a sweep
// campaign, and verify the structural invariants of a configuration.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace dvi_cli {

struct CliOptions {
  std::string config_path;
  std::string out_dir;                // --out override; empty falls through
  std::optional<std::uint64_t> seed;  // --seed override
  int threads = 1;                    // --threads, sweep workers
  bool corrupt_coefficient = false;   // verify negative-control hook
};

// Each command loads and validates the config (the config's mode must
// match the command), runs, writes its artifacts, prints a short
// summary, and returns the process exit code:
//   0 success, 2 the variational run tripped the overflow guard,
//   3 a verification check failed.
// Configuration problems raise ConfigError (the entry point maps them
// to exit code 1).
int run_simulate(const CliOptions& options);
int run_compare(const CliOptions& options);
int run_sweep(const CliOptions& options);
int run_verify(const CliOptions& options);

}  // namespace dvi_cli
