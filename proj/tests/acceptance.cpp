// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "coexsim/cli.hpp"
#include "coexsim/experiments.hpp"
#include "coexsim/radio.hpp"
#include "coexsim/simulation.hpp"
#include "oracles.hpp"

using namespace coexsim;
using namespace coexsim::experiments;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;
using Filter = std::vector<std::pair<std::string, std::string>>;

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string &name, const std::function<Verdict()> &check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception &e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": "
            << v.detail << std::endl;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_num(double v) { return fmt::format("{:.3f}", v); }

unsigned cores() { return std::max(1u, std::thread::hardware_concurrency()); }

// Full default suite, shared by criteria 3-6 and timed for criterion 10.
struct Suite {
  SweepResult duty, power, prb, freq;
  double wall_s = 0.0;
};

const Suite &suite() {
  static const Suite s = [] {
    Suite out;
    const auto t0 = Clock::now();
    out.duty = run_sweep(exp_duty_cycle(), 1, cores());
    out.power = run_sweep(exp_tx_power(), 1, cores());
    out.prb = run_sweep(exp_prb_sweep(), 1, cores());
    out.freq = run_sweep(exp_center_freq(), 1, cores());
    out.wall_s = seconds_since(t0);
    return out;
  }();
  return s;
}

Verdict dcf_oracle() {
  Verdict v;
  RunConfig cfg;
  cfg.lte.duty.duty = 0.0;
  double worst = 0.0;
  double slowest = 0.0;
  for (const auto &m : wifi::mcs_table()) {
    cfg.wifi.mcs = m.label_mbps;
    const auto t0 = Clock::now();
    const double sim = metrics::throughput_mbps(run_simulation(cfg));
    slowest = std::max(slowest, seconds_since(t0));
    const double ref = oracle::dcf_goodput_mbps(m.bits_per_symbol, cfg.wifi.payload_bytes);
    const double err = std::abs(sim - ref) / ref;
    worst = std::max(worst, err);
    if (err > 0.02) v.pass = false;
  }
  if (slowest >= 5.0) v.pass = false;
  v.detail = fmt::format("worst relative error {:.4f} (limit 0.02), slowest 10 s run {:.3f} s "
                         "wall (limit 5)",
                         worst, slowest);
  return v;
}

Verdict duty_law() {
  Scenario s = exp_duty_cycle();
  s.swept = {{"lte.duty", {"0", "0.25", "0.5", "0.75", "1"}},
             {"lte.tx_power_dbm", {"12"}},
             {"wifi.mcs", {"6", "54"}}};
  const auto r = run_sweep(s, 1, cores());
  Verdict v;
  double worst = 0.0;
  for (const char *mcs : {"6", "54"}) {
    for (double d : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double med = median_normalized(r, {{"lte.duty", format_number(d)}, {"wifi.mcs", mcs}});
      const double dev = std::abs(med - (1.0 - d));
      worst = std::max(worst, dev);
      if (dev > 0.1) v.pass = false;
      v.detail += fmt::format("MCS{} d={}:{} ", mcs, format_number(d), fmt_num(med));
    }
  }
  v.detail += fmt::format("| max |median-(1-d)| {:.3f} (limit 0.1)", worst);
  return v;
}

Verdict capture_asymmetry() {
  const auto &r = suite().power;
  auto gap = [&](const char *lte) {
    const Filter base{{"lte.tx_power_dbm", lte}, {"wifi.tx_power_dbm", "17"}};
    auto f6 = base, f54 = base;
    f6.emplace_back("wifi.mcs", "6");
    f54.emplace_back("wifi.mcs", "54");
    return median_normalized(r, f6) - median_normalized(r, f54);
  };
  const double low = gap("-16");
  const double high = gap("12");
  Verdict v;
  v.pass = low >= 0.2 && std::abs(high) <= 0.05;
  v.detail = fmt::format("gap(MCS6-MCS54) at -16 dBm {:.3f} (>= 0.2), at 12 dBm {:.3f} "
                         "(|gap| <= 0.05)",
                         low, high);
  return v;
}

Verdict wifi_power_insensitivity() {
  const auto &r = suite().power;
  Verdict v;
  double worst = 0.0;
  std::string where;
  const auto grid = exp_tx_power();
  for (const auto &lte : grid.swept[0].values) {
    for (const char *mcs : {"6", "54"}) {
      const double a = median_normalized(
          r, {{"lte.tx_power_dbm", lte}, {"wifi.tx_power_dbm", "8"}, {"wifi.mcs", mcs}});
      const double b = median_normalized(
          r, {{"lte.tx_power_dbm", lte}, {"wifi.tx_power_dbm", "17"}, {"wifi.mcs", mcs}});
      const double diff = std::abs(a - b);
      if (diff > worst) {
        worst = diff;
        where = fmt::format("LTE {} dBm MCS {}", lte, mcs);
      }
    }
  }
  v.pass = worst <= 0.05;
  v.detail = fmt::format("max |median(8 dBm)-median(17 dBm)| {:.3f} at {} (limit 0.05)", worst,
                         where);
  return v;
}

double prb_spread(const SweepResult &r, const char *lte, const std::string &cca,
                  const char *mcs) {
  double lo = INFINITY, hi = -INFINITY;
  const auto grid = exp_prb_sweep();
  for (const auto &prb : grid.swept[0].values) {
    const double m = median_normalized(
        r, {{"lte.n_prb", prb}, {"lte.tx_power_dbm", lte}, {"wifi.cca", cca}, {"wifi.mcs", mcs}});
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return hi - lo;
}

Verdict prb_neutrality() {
  const auto &r = suite().prb;
  double high_worst = 0.0, low_best = 0.0;
  std::string low_where;
  for (const std::string cca : {"vendor-A", "vendor-B"}) {
    for (const char *mcs : {"6", "54"}) {
      high_worst = std::max(high_worst, prb_spread(r, "12", cca, mcs));
      const double low = prb_spread(r, "-16", cca, mcs);
      if (low > low_best) {
        low_best = low;
        low_where = fmt::format("{} MCS {}", cca, mcs);
      }
    }
  }
  Verdict v;
  v.pass = high_worst <= 0.05 && low_best >= 0.1;
  v.detail = fmt::format("PRB spread at 12 dBm max {:.3f} (<= 0.05); at -16 dBm max {:.3f} "
                         "({}) (>= 0.1)",
                         high_worst, low_best, low_where);
  return v;
}

Verdict frequency_symmetry() {
  const auto &r = suite().freq;
  Verdict v;
  double worst = 0.0;
  std::string edges;
  for (const char *mcs : {"6", "54"}) {
    auto med = [&](double off) {
      return median_normalized(r, {{"lte.center_offset_mhz", format_number(off)},
                                   {"lte.tx_power_dbm", "12"},
                                   {"wifi.mcs", mcs}});
    };
    for (double d : {5.0, 10.0, 15.0, 20.0}) worst = std::max(worst, std::abs(med(d) - med(-d)));
    const double at0 = med(0.0), lo = med(-20.0), hi = med(20.0);
    if (!(lo > at0 && hi > at0)) v.pass = false;
    edges += fmt::format(" MCS{}: -20:{} 0:{} +20:{}", mcs, fmt_num(lo), fmt_num(at0), fmt_num(hi));
  }
  if (worst > 0.05) v.pass = false;
  v.detail = fmt::format("max asymmetry {:.3f} (limit 0.05);{}", worst, edges);
  return v;
}

Verdict determinism() {
  const auto dir = fs::temp_directory_path() / "coexsim_acceptance";
  fs::create_directories(dir);
  const auto a = (dir / "duty_a.csv").string();
  const auto b = (dir / "duty_b.csv").string();
  std::ostringstream sink;
  for (const auto &path : {a, b}) {
    const std::vector<std::string> args{"coexsim", "sweep", "duty", "--seed", "1",
                                        "--out", path};
    std::vector<const char *> argv;
    for (const auto &s : args) argv.push_back(s.c_str());
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), sink, sink);
    if (code != 0) return {false, "sweep exited with " + std::to_string(code)};
  }
  auto slurp = [](const std::string &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const auto x = slurp(a), y = slurp(b);
  Verdict v;
  v.pass = !x.empty() && x == y;
  v.detail = fmt::format("two `sweep duty` executions: {} bytes vs {} bytes, {}", x.size(),
                         y.size(), x == y ? "identical" : "different");
  return v;
}

Verdict lte_schedule() {
  RunConfig cfg;
  cfg.duration_s = 100.0;
  cfg.lte.duty.duty = 0.5;
  Simulation with(cfg);
  const auto &m = with.run();
  cfg.wifi.enabled = false;
  Simulation without(cfg);
  without.run();

  const double frac = static_cast<double>(m.lte_airtime_ns) / static_cast<double>(m.duration_ns);
  bool aligned = true;
  for (const auto &t : with.lte_transitions()) {
    if (t.on && t.at.count() % 10'000'000 != 0) aligned = false;
  }
  const bool same = with.lte_transitions() == without.lte_transitions();
  Verdict v;
  v.pass = frac >= 0.48 && frac <= 0.52 && aligned && same;
  v.detail = fmt::format("on-time fraction {:.4f} (in [0.48, 0.52]), on-transitions on 10 ms "
                         "grid: {}, identical with/without WiFi: {}",
                         frac, aligned ? "yes" : "no", same ? "yes" : "no");
  return v;
}

Verdict overlap_arithmetic() {
  using radio::overlap_fraction;
  const radio::SpectrumBand wifi{0.0, 20.0};
  bool examples = overlap_fraction({0.0, 18.0}, wifi, -30.0) == 1.0 &&
                  overlap_fraction({10.0, 18.0}, wifi, -30.0) == 0.5 &&
                  overlap_fraction({20.0, 18.0}, wifi, -30.0) == std::pow(10.0, -3.0);

  std::mt19937_64 gen(2016);
  std::uniform_real_distribution<double> width(0.18, 40.0), offset(0.0, 45.0), step(0.0, 5.0);
  int violations = 0;
  constexpr int trials = 100'000;
  for (int i = 0; i < trials; ++i) {
    const radio::SpectrumBand victim{0.0, width(gen)};
    const double w = width(gen), d = offset(gen);
    const double f = overlap_fraction({d, w}, victim, -30.0);
    if (f != overlap_fraction({-d, w}, victim, -30.0)) ++violations;
    if (overlap_fraction({d + step(gen), w}, victim, -30.0) > f) ++violations;
    if (f < 0.0 || f > 1.0) ++violations;
  }
  Verdict v;
  v.pass = examples && violations == 0;
  v.detail = fmt::format("worked examples {}; {} property violations over {} random bands",
                         examples ? "exact" : "WRONG", violations, trials);
  return v;
}

Verdict suite_runtime() {
  const auto &s = suite();
  const std::size_t rows = s.duty.rows.size() + s.power.rows.size() + s.prb.rows.size() +
                           s.freq.rows.size();
  Verdict v;
  v.pass = s.wall_s < 30.0 * 60.0;
  v.detail = fmt::format("4 scenarios, {} rows, 5 reps, {} job(s): {:.1f} s wall (limit 1800)",
                         rows, cores(), s.wall_s);
  return v;
}

} // namespace

int main() {
  report(1, "DCF oracle", dcf_oracle);
  report(2, "duty-cycle law", duty_law);
  report(3, "capture asymmetry", capture_asymmetry);
  report(4, "WiFi power insensitivity", wifi_power_insensitivity);
  report(5, "PRB neutrality at high power", prb_neutrality);
  report(6, "frequency symmetry", frequency_symmetry);
  report(7, "determinism", determinism);
  report(8, "LTE schedule invariants", lte_schedule);
  report(9, "overlap arithmetic", overlap_arithmetic);
  report(10, "full default sweep runtime", suite_runtime);
  std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
