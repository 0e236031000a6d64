#include "coexsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "coexsim/simulation.hpp"

namespace coexsim::experiments {

namespace {

using Assignment = std::vector<std::pair<std::string, std::string>>;

std::vector<std::string> numbers(std::initializer_list<double> values) {
  std::vector<std::string> out;
  for (double v : values) out.push_back(format_number(v));
  return out;
}

Scenario base_scenario(std::string name) {
  Scenario s;
  s.name = std::move(name);
  s.fixed.wifi.tx_power_dbm = 17.0;
  s.fixed.lte.phy.n_prb = 100;
  s.fixed.lte.phy.center_offset_mhz = 0.0;
  s.fixed.lte.duty.duty = 0.5;
  return s;
}

std::string assignment_key(const Assignment &a) {
  std::string key;
  for (const auto &[path, value] : a) {
    if (!key.empty()) key += ';';
    key += path + '=' + value;
  }
  return key;
}

std::string describe(const Assignment &a) {
  return a.empty() ? std::string("(no swept parameters)") : assignment_key(a);
}

/// Assignment of the duty-0 run sharing every other parameter.
Assignment baseline_of(Assignment a) {
  bool found = false;
  for (auto &[path, value] : a) {
    if (path == "lte.duty") {
      value = "0";
      found = true;
    }
  }
  if (!found) a.emplace_back("lte.duty", "0");
  return a;
}

bool values_equal(const std::string &a, const std::string &b) {
  if (a == b) return true;
  double x = 0, y = 0;
  const auto rx = std::from_chars(a.data(), a.data() + a.size(), x);
  const auto ry = std::from_chars(b.data(), b.data() + b.size(), y);
  return rx.ec == std::errc{} && ry.ec == std::errc{} &&
         rx.ptr == a.data() + a.size() && ry.ptr == b.data() + b.size() && x == y;
}

} // namespace

Scenario exp_duty_cycle() {
  Scenario s = base_scenario("duty");
  s.swept = {
      {"lte.duty", {"0", "0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1"}},
      {"lte.tx_power_dbm", numbers({-16, -6, -1, 12})},
      {"wifi.mcs", {"6", "54"}},
  };
  return s;
}

Scenario exp_tx_power() {
  Scenario s = base_scenario("power");
  s.swept = {
      {"lte.tx_power_dbm", numbers({-16, -11, -6, -1, 4, 12})},
      {"wifi.tx_power_dbm", numbers({8, 17})},
      {"wifi.mcs", {"6", "54"}},
  };
  return s;
}

Scenario exp_prb_sweep() {
  Scenario s = base_scenario("prb");
  s.swept = {
      {"lte.n_prb", {"6", "15", "25", "50", "75", "100"}},
      {"lte.tx_power_dbm", numbers({-16, -1, 12})},
      {"wifi.cca", {"vendor-A", "vendor-B"}},
      {"wifi.mcs", {"6", "54"}},
  };
  return s;
}

Scenario exp_center_freq() {
  Scenario s = base_scenario("freq");
  s.swept = {
      {"lte.center_offset_mhz", numbers({-20, -15, -10, -5, 0, 5, 10, 15, 20})},
      {"lte.tx_power_dbm", numbers({-16, -1, 12})},
      {"wifi.mcs", {"6", "54"}},
  };
  return s;
}

const std::vector<std::string> &builtin_scenario_names() {
  static const std::vector<std::string> names{"duty", "power", "prb", "freq"};
  return names;
}

std::optional<Scenario> builtin_scenario(std::string_view name) {
  if (name == "duty") return exp_duty_cycle();
  if (name == "power") return exp_tx_power();
  if (name == "prb") return exp_prb_sweep();
  if (name == "freq") return exp_center_freq();
  return std::nullopt;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  s.name = "custom";
  std::vector<ConfigEntry> config_entries;
  for (auto &e : parse_entries(text)) {
    if (e.path.rfind("scenario.", 0) == 0) {
      const auto key = e.path.substr(9);
      if (key == "name") {
        s.name = e.value;
      } else if (key == "reps") {
        try {
          s.reps = std::stoi(e.value);
        } catch (const std::exception &) {
          throw ConfigError(e.path, "expected an integer");
        }
      } else if (key == "duration_s") {
        try {
          s.duration_s = std::stod(e.value);
        } catch (const std::exception &) {
          throw ConfigError(e.path, "expected a number");
        }
      } else {
        throw ConfigError(e.path, "unknown scenario key");
      }
    } else if (e.path.rfind("grid.", 0) == 0) {
      override_grid(s, e.path.substr(5), e.value);
    } else {
      config_entries.push_back(std::move(e));
    }
  }
  apply_entries(s.fixed, config_entries);
  validate(s.fixed);
  validate(s);
  return s;
}

void override_grid(Scenario &s, std::string_view key, std::string_view values) {
  const std::string path = resolve_key(key);
  auto grid = split_list(values);
  if (grid.empty()) throw ConfigError(path, "grid must not be empty");
  for (auto &axis : s.swept) {
    if (axis.path == path) {
      axis.values = std::move(grid);
      return;
    }
  }
  s.swept.push_back({path, std::move(grid)});
}

void validate(Scenario &s) {
  if (s.reps < 1) throw ConfigError("scenario.reps", "must be at least 1");
  if (!(s.duration_s > 0.0)) throw ConfigError("scenario.duration_s", "must be positive");
  for (auto &axis : s.swept) {
    (void)resolve_key(axis.path);
    if (axis.values.empty()) throw ConfigError(axis.path, "grid must not be empty");
    if (axis.path == "run.seed" || axis.path == "run.duration_s" ||
        axis.path.rfind("output.", 0) == 0) {
      throw ConfigError(axis.path, "cannot be swept");
    }
    for (auto &v : axis.values) {
      RunConfig probe = s.fixed;
      set_field(probe, axis.path, v);
      v = get_field(probe, axis.path);
    }
  }
}

std::size_t grid_size(const Scenario &s) {
  std::size_t n = 1;
  for (const auto &axis : s.swept) n *= axis.values.size();
  return n;
}

std::uint64_t run_seed(std::uint64_t master_seed, const Assignment &assignment,
                       int rep) {
  return derive_seed(master_seed, assignment_key(assignment),
                     static_cast<std::uint64_t>(rep));
}

SweepResult run_sweep(Scenario s, std::uint64_t master_seed, unsigned jobs,
                      bool normalize) {
  validate(s);

  // Grid points in order, first axis outermost.
  std::vector<Assignment> points;
  const std::size_t n_points = grid_size(s);
  for (std::size_t idx = 0; idx < n_points; ++idx) {
    Assignment a;
    std::size_t rem = idx;
    std::size_t stride = n_points;
    for (const auto &axis : s.swept) {
      stride /= axis.values.size();
      a.emplace_back(axis.path, axis.values[rem / stride]);
      rem %= stride;
    }
    points.push_back(std::move(a));
  }

  struct Job {
    Assignment assignment;
    int rep;
    std::uint64_t seed;
    metrics::RunMetrics result;
    std::exception_ptr error;
  };
  std::vector<Job> jobs_list;
  std::map<std::string, std::size_t> job_index;
  auto add_job = [&](const Assignment &a, int rep) {
    const auto key = assignment_key(a) + '#' + std::to_string(rep);
    auto [it, inserted] = job_index.try_emplace(key, jobs_list.size());
    if (inserted) jobs_list.push_back({a, rep, run_seed(master_seed, a, rep), {}, nullptr});
    return it->second;
  };

  std::vector<std::pair<std::size_t, std::size_t>> row_jobs; // (run, baseline)
  for (const auto &a : points) {
    for (int rep = 0; rep < s.reps; ++rep) {
      const auto run = add_job(a, rep);
      const auto base = normalize ? add_job(baseline_of(a), rep) : run;
      row_jobs.emplace_back(run, base);
    }
  }

  auto execute = [&](Job &job) {
    try {
      RunConfig cfg = s.fixed;
      cfg.duration_s = s.duration_s;
      cfg.seed = job.seed;
      for (const auto &[path, value] : job.assignment) set_field(cfg, path, value);
      job.result = run_simulation(cfg);
    } catch (...) {
      job.error = std::current_exception();
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, jobs_list.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs_list.size(); i = next++) execute(jobs_list[i]);
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  for (const auto &job : jobs_list) {
    if (!job.error) continue;
    std::string why;
    try {
      std::rethrow_exception(job.error);
    } catch (const std::exception &e) {
      why = e.what();
    } catch (...) {
      why = "unknown error";
    }
    throw SweepError("scenario '" + s.name + "' aborted at grid point " +
                     describe(job.assignment) + " rep " + std::to_string(job.rep) +
                     ": " + why);
  }

  SweepResult result;
  result.scenario = s.name;
  for (const auto &axis : s.swept) result.param_names.push_back(axis.path);
  for (const auto &[run, base] : row_jobs) {
    const auto &job = jobs_list[run];
    SweepRow row;
    for (const auto &[path, value] : job.assignment) row.params.push_back(value);
    row.rep = job.rep;
    row.seed = job.seed;
    row.metrics = job.result;
    row.throughput_mbps = metrics::throughput_mbps(job.result);
    if (normalize) {
      try {
        row.normalized = metrics::normalized_throughput(job.result, jobs_list[base].result);
      } catch (const std::domain_error &e) {
        throw SweepError("scenario '" + s.name + "' grid point " +
                         describe(job.assignment) + ": " + e.what());
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string csv_header(const std::vector<std::string> &param_names) {
  std::string h = "scenario";
  for (const auto &p : param_names) h += ',' + p;
  h += ",rep,seed,throughput_mbps,normalized,wifi_airtime_frac,lte_airtime_frac,"
       "attempts,failures,drops";
  return h;
}

std::string csv_row(std::string_view scenario, const SweepRow &row) {
  std::string line(scenario);
  for (const auto &p : row.params) line += ',' + p;
  const auto &m = row.metrics;
  const double dur = static_cast<double>(m.duration_ns);
  line += fmt::format(",{},{},{:.6f},{},{:.6f},{:.6f},{},{},{}", row.rep, row.seed,
                      row.throughput_mbps,
                      row.normalized ? fmt::format("{:.6f}", *row.normalized) : std::string{},
                      m.wifi_airtime_ns / dur, m.lte_airtime_ns / dur, m.attempts,
                      m.failures, m.drops);
  return line;
}

void write_csv(const SweepResult &result, std::ostream &out) {
  out << csv_header(result.param_names) << '\n';
  for (const auto &row : result.rows) out << csv_row(result.scenario, row) << '\n';
}

void write_summary(const SweepResult &result, std::ostream &out) {
  out << "scenario";
  for (const auto &p : result.param_names) out << ',' << p;
  out << ",metric,n,median,q25,q75,whisker_lo,whisker_hi,outliers\n";

  auto emit = [&](const std::vector<std::string> &params, const char *metric,
                  const std::vector<double> &samples) {
    const auto b = metrics::box_stats(samples);
    out << result.scenario;
    for (const auto &p : params) out << ',' << p;
    std::string outliers;
    for (double x : b.outliers) {
      if (!outliers.empty()) outliers += ';';
      outliers += fmt::format("{:.6f}", x);
    }
    out << fmt::format(",{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", metric,
                       samples.size(), b.median, b.q25, b.q75, b.whisker_lo,
                       b.whisker_hi, outliers);
  };

  std::size_t i = 0;
  while (i < result.rows.size()) {
    std::size_t j = i;
    std::vector<double> thr, norm;
    while (j < result.rows.size() && result.rows[j].params == result.rows[i].params) {
      thr.push_back(result.rows[j].throughput_mbps);
      if (result.rows[j].normalized) norm.push_back(*result.rows[j].normalized);
      ++j;
    }
    emit(result.rows[i].params, "throughput_mbps", thr);
    if (!norm.empty()) emit(result.rows[i].params, "normalized", norm);
    i = j;
  }
}

std::vector<const SweepRow *> select_rows(const SweepResult &result,
                                          const Assignment &filter) {
  std::vector<std::size_t> cols;
  for (const auto &[path, value] : filter) {
    const auto it = std::find(result.param_names.begin(), result.param_names.end(), path);
    if (it == result.param_names.end()) {
      throw std::invalid_argument("'" + path + "' is not swept in " + result.scenario);
    }
    cols.push_back(static_cast<std::size_t>(it - result.param_names.begin()));
  }
  std::vector<const SweepRow *> out;
  for (const auto &row : result.rows) {
    bool match = true;
    for (std::size_t k = 0; k < cols.size() && match; ++k) {
      match = values_equal(row.params[cols[k]], filter[k].second);
    }
    if (match) out.push_back(&row);
  }
  return out;
}

double median_normalized(const SweepResult &result, const Assignment &filter) {
  std::vector<double> v;
  for (const auto *row : select_rows(result, filter)) {
    if (!row->normalized) throw std::invalid_argument("sweep was not normalized");
    v.push_back(*row->normalized);
  }
  if (v.empty()) throw std::invalid_argument("no rows match the filter");
  return metrics::box_stats(v).median;
}

} // namespace coexsim::experiments
