#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coexsim/config.hpp"

namespace coexsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

/// Loads the config file (if any), applies `key=value` overrides and the
/// seed flag, then validates.
RunConfig load_config(const std::optional<std::string> &config_path,
                      const std::vector<std::string> &overrides,
                      std::optional<std::uint64_t> seed);

/// Single simulation; writes the CSV header and one metrics row to `out`,
/// and the event trace to `trace_path` when non-empty.
void cmd_run(const RunConfig &cfg, std::ostream &out, const std::string &trace_path);

struct SweepOptions {
  std::string scenario; // built-in name or scenario file
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  std::vector<std::string> grids; // key=v1,v2,...
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<double> duration_s;
  std::string out_path; // empty: <scenario>.csv
  unsigned jobs = 0;
};

/// Runs the sweep, writes the CSV and its `.summary.csv` companion. Returns
/// the CSV path.
std::string cmd_sweep(const SweepOptions &opts, std::ostream &log);

struct BaselineLine {
  int mcs = 0;
  double analytic_mbps = 0.0;
  double simulated_mbps = 0.0;
  double rel_error = 0.0;
};

/// Analytic single-station DCF goodput against a duty-0 simulation.
std::vector<BaselineLine> cmd_baseline(const RunConfig &cfg,
                                       const std::vector<int> &mcs_labels,
                                       std::ostream &out);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace coexsim::cli
