#include "coexsim/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "coexsim/experiments.hpp"
#include "coexsim/simulation.hpp"

namespace coexsim::cli {

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<ConfigEntry> override_entries(const std::vector<std::string> &overrides) {
  std::vector<ConfigEntry> entries;
  for (const auto &o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError(o, "expected key=value");
    entries.push_back({resolve_key(o.substr(0, eq)), o.substr(eq + 1), 0});
  }
  return entries;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string summary_path(const std::string &csv_path) {
  std::filesystem::path p(csv_path);
  const auto stem = p.extension() == ".csv" ? p.stem().string() : p.filename().string();
  return (p.parent_path() / (stem + ".summary.csv")).string();
}

} // namespace

RunConfig load_config(const std::optional<std::string> &config_path,
                      const std::vector<std::string> &overrides,
                      std::optional<std::uint64_t> seed) {
  RunConfig cfg;
  if (config_path) apply_entries(cfg, parse_entries(read_file(*config_path)));
  apply_entries(cfg, override_entries(overrides));
  if (seed) cfg.seed = *seed;
  validate(cfg);
  return cfg;
}

void cmd_run(const RunConfig &cfg, std::ostream &out, const std::string &trace_path) {
  Simulation sim(cfg);
  std::ofstream trace;
  if (!trace_path.empty()) {
    trace = open_output(trace_path);
    sim.set_trace(&trace);
  }
  experiments::SweepRow row;
  row.seed = cfg.seed;
  row.metrics = sim.run();
  row.throughput_mbps = metrics::throughput_mbps(row.metrics);
  out << experiments::csv_header({}) << '\n' << experiments::csv_row("run", row) << '\n';
}

std::string cmd_sweep(const SweepOptions &opts, std::ostream &log) {
  experiments::Scenario scenario;
  if (auto builtin = experiments::builtin_scenario(opts.scenario)) {
    scenario = std::move(*builtin);
  } else if (std::filesystem::is_regular_file(opts.scenario)) {
    scenario = experiments::parse_scenario(read_file(opts.scenario));
  } else {
    throw ConfigError(opts.scenario, "unknown scenario (built-ins: duty, power, prb, freq; "
                                     "or a scenario file)");
  }

  std::uint64_t master_seed = scenario.fixed.seed;
  if (opts.config_path) {
    apply_entries(scenario.fixed, parse_entries(read_file(*opts.config_path)));
    master_seed = scenario.fixed.seed;
  }
  apply_entries(scenario.fixed, override_entries(opts.overrides));
  validate(scenario.fixed);
  if (opts.seed) master_seed = *opts.seed;
  for (const auto &g : opts.grids) {
    const auto eq = g.find('=');
    if (eq == std::string::npos) throw ConfigError(g, "expected --grid key=v1,v2,...");
    experiments::override_grid(scenario, g.substr(0, eq), g.substr(eq + 1));
  }
  if (opts.reps) scenario.reps = *opts.reps;
  if (opts.duration_s) scenario.duration_s = *opts.duration_s;
  experiments::validate(scenario);

  const auto result = experiments::run_sweep(scenario, master_seed, opts.jobs);

  const std::string csv = opts.out_path.empty() ? scenario.name + ".csv" : opts.out_path;
  {
    auto out = open_output(csv);
    experiments::write_csv(result, out);
  }
  const auto summary = summary_path(csv);
  {
    auto out = open_output(summary);
    experiments::write_summary(result, out);
  }
  log << "wrote " << result.rows.size() << " rows to " << csv << " (summary: " << summary
      << ")\n";
  return csv;
}

std::vector<BaselineLine> cmd_baseline(const RunConfig &cfg,
                                       const std::vector<int> &mcs_labels,
                                       std::ostream &out) {
  std::vector<BaselineLine> lines;
  out << "mcs_mbps,analytic_mbps,simulated_mbps,rel_error\n";
  for (int label : mcs_labels) {
    RunConfig run = cfg;
    run.wifi.mcs = label;
    run.lte.duty.duty = 0.0;
    validate(run);
    BaselineLine line;
    line.mcs = label;
    line.analytic_mbps = wifi::analytic_goodput_mbps(wifi::mcs_for_label(label),
                                                     run.wifi.payload_bytes, run.wifi.dcf);
    line.simulated_mbps = metrics::throughput_mbps(run_simulation(run));
    line.rel_error = std::abs(line.simulated_mbps - line.analytic_mbps) / line.analytic_mbps;
    out << fmt::format("{},{:.4f},{:.4f},{:.5f}\n", label, line.analytic_mbps,
                       line.simulated_mbps, line.rel_error);
    lines.push_back(line);
  }
  return lines;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Duty-cycled LTE / 802.11 DCF coexistence simulator"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--config", config_path, "Configuration file");
    cmd->add_option("--set", overrides, "Override a configuration key (key=value)");
    cmd->add_option("--seed", seed, "Master seed");
  };

  auto *run = app.add_subcommand("run", "Run a single simulation");
  add_common(run);
  std::string trace_path;
  std::string run_out;
  run->add_option("--trace", trace_path, "Write the event trace to this file");
  run->add_option("--out", run_out, "Also write the CSV row to this file");

  auto *sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  add_common(sweep);
  SweepOptions sweep_opts;
  sweep->add_option("scenario", sweep_opts.scenario, "duty, power, prb, freq or a scenario file")
      ->required();
  sweep->add_option("--out", sweep_opts.out_path, "CSV output path");
  sweep->add_option("--jobs", sweep_opts.jobs, "Worker threads (0 = all cores)");
  sweep->add_option("--grid", sweep_opts.grids, "Replace an axis grid (key=v1,v2,...)");
  sweep->add_option("--reps", sweep_opts.reps, "Repetitions per grid point");
  sweep->add_option("--duration", sweep_opts.duration_s, "Simulated seconds per run");

  auto *baseline = app.add_subcommand("baseline", "Compare simulated and analytic DCF goodput");
  add_common(baseline);
  std::vector<int> mcs;
  baseline->add_option("--mcs", mcs, "MCS rate(s) in Mbps (default: all eight)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*run) {
      const auto cfg = load_config(config_path, overrides, seed);
      const std::string trace = trace_path.empty() ? cfg.output.trace : trace_path;
      const std::string csv = run_out.empty() ? cfg.output.csv : run_out;
      std::ostringstream buffer;
      cmd_run(cfg, buffer, trace);
      out << buffer.str();
      if (!csv.empty()) open_output(csv) << buffer.str();
    } else if (*sweep) {
      sweep_opts.config_path = config_path;
      sweep_opts.overrides = overrides;
      sweep_opts.seed = seed;
      cmd_sweep(sweep_opts, err);
    } else if (*baseline) {
      const auto cfg = load_config(config_path, overrides, seed);
      if (mcs.empty()) {
        for (const auto &m : wifi::mcs_table()) mcs.push_back(m.label_mbps);
      }
      cmd_baseline(cfg, mcs, out);
    }
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitOk;
}

} // namespace coexsim::cli
