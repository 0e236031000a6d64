#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coexsim/config.hpp"
#include "coexsim/metrics.hpp"

namespace coexsim::experiments {

class SweepError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One swept configuration path and its value grid (textual, as accepted by
/// set_field).
struct SweepAxis {
  std::string path;
  std::vector<std::string> values;
};

struct Scenario {
  std::string name;
  RunConfig fixed;
  std::vector<SweepAxis> swept;
  int reps = 5;
  double duration_s = 10.0;
};

/// LTE duty 0..1 step 0.1 x LTE power {-16,-6,-1,12} dBm x MCS {6,54}.
Scenario exp_duty_cycle();
/// Duty 0.5; LTE power {-16,-11,-6,-1,4,12} x WiFi power {8,17} x MCS {6,54}.
Scenario exp_tx_power();
/// Duty 0.5; PRB {6..100} x LTE power {-16,-1,12} x CCA profile x MCS.
Scenario exp_prb_sweep();
/// Duty 0.5; LTE centre offset -20..20 MHz step 5 x LTE power x MCS.
Scenario exp_center_freq();

/// Built-in names: duty, power, prb, freq.
std::optional<Scenario> builtin_scenario(std::string_view name);
const std::vector<std::string> &builtin_scenario_names();

/// Scenario file: a run configuration plus `[scenario]` (name, reps,
/// duration_s) and `[grid]` (path = comma-separated values) sections.
Scenario parse_scenario(std::string_view text);

/// Replaces (or adds) the grid of one axis; `key` may be a bare key.
void override_grid(Scenario &s, std::string_view key, std::string_view values);

/// Checks grids and canonicalizes every grid value through the config
/// layer. Throws ConfigError naming the axis.
void validate(Scenario &s);

/// Number of grid points (product of axis sizes).
std::size_t grid_size(const Scenario &s);

struct SweepRow {
  std::vector<std::string> params;
  int rep = 0;
  std::uint64_t seed = 0;
  metrics::RunMetrics metrics;
  double throughput_mbps = 0.0;
  std::optional<double> normalized;
};

struct SweepResult {
  std::string scenario;
  std::vector<std::string> param_names;
  /// Grid order (first axis outermost), repetitions innermost.
  std::vector<SweepRow> rows;
};

/// Seed of one run: from the master seed, the canonical assignment of the
/// swept paths and the repetition index.
std::uint64_t run_seed(std::uint64_t master_seed,
                       const std::vector<std::pair<std::string, std::string>> &assignment,
                       int rep);

/// Runs reps x grid simulations on `jobs` threads (0 = hardware
/// concurrency). Each row is normalized against the same grid point with
/// LTE duty 0 and the same repetition index. Output is independent of jobs.
SweepResult run_sweep(Scenario s, std::uint64_t master_seed, unsigned jobs = 0,
                      bool normalize = true);

std::string csv_header(const std::vector<std::string> &param_names);
std::string csv_row(std::string_view scenario, const SweepRow &row);
void write_csv(const SweepResult &result, std::ostream &out);

/// Box statistics of throughput and normalized throughput per grid point.
void write_summary(const SweepResult &result, std::ostream &out);

/// Rows whose parameters match every given `path=value` filter.
std::vector<const SweepRow *>
select_rows(const SweepResult &result,
            const std::vector<std::pair<std::string, std::string>> &filter);

/// Median normalized throughput over the selected rows.
double median_normalized(const SweepResult &result,
                         const std::vector<std::pair<std::string, std::string>> &filter);

} // namespace coexsim::experiments
