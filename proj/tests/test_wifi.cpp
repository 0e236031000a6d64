#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "coexsim/config.hpp"
#include "coexsim/simulation.hpp"
#include "coexsim/station.hpp"
#include "coexsim/wifi.hpp"
#include "oracles.hpp"

using namespace coexsim;
using namespace coexsim::wifi;
using namespace std::chrono_literals;

namespace {

struct TraceLine {
  long long t_ns;
  std::string kind;
  std::string node;
  long long arg;
};

std::vector<TraceLine> traced_run(const RunConfig &cfg,
                                  std::vector<lte::Transition> *lte = nullptr) {
  Simulation sim(cfg);
  std::ostringstream out;
  sim.set_trace(&out);
  sim.run();
  if (lte) *lte = sim.lte_transitions();
  std::vector<TraceLine> lines;
  std::istringstream in(out.str());
  TraceLine l;
  while (in >> l.t_ns >> l.kind >> l.node >> l.arg) lines.push_back(l);
  return lines;
}

bool lte_active_at(const std::vector<lte::Transition> &tr, SimTime t) {
  bool on = false;
  for (const auto &x : tr) {
    if (x.at > t) break;
    on = x.on;
  }
  return on;
}

RunConfig short_run() {
  RunConfig cfg;
  cfg.duration_s = 2.0;
  return cfg;
}

} // namespace

TEST_CASE("frame airtimes match the OFDM symbol oracle") {
  const DcfParams p;
  for (const auto &m : mcs_table()) {
    CHECK(frame_airtime_us(m, 1500, p) == oracle::ofdm_ppdu_us(1536, m.bits_per_symbol));
    CHECK(frame_airtime_us(m, 100, p) == oracle::ofdm_ppdu_us(136, m.bits_per_symbol));
  }
  CHECK(frame_airtime_us(mcs_for_label(54), 1500, p) == 248);
  CHECK(frame_airtime_us(mcs_for_label(6), 1500, p) == 2072);
  CHECK(ack_airtime_us(p) == 28);
  CHECK(ack_airtime_us(p) == oracle::ofdm_ppdu_us(14, 96));
}

TEST_CASE("MCS table") {
  CHECK(mcs_table().size() == 8);
  CHECK(mcs_for_label(6).bits_per_symbol == 24);
  CHECK(mcs_for_label(54).bits_per_symbol == 216);
  CHECK_THROWS(mcs_for_label(11));
}

TEST_CASE("DCF parameter validation") {
  DcfParams p;
  CHECK_NOTHROW(validate(p));
  p.difs_us = 30;
  CHECK_THROWS(validate(p));
  p = DcfParams{};
  p.cw_min = 16;
  CHECK_THROWS(validate(p));
}

TEST_CASE("cca_busy") {
  const radio::SpectrumBand wifi_band{0.0, 20.0};
  const radio::SpectrumBand lte_full{0.0, 18.0};

  CcaProfile strict = vendor_a();
  strict.ed_threshold_dbm = -62.0;
  CHECK(cca_busy(strict, -19.4, lte_full, wifi_band));
  CHECK_FALSE(cca_busy(strict, std::nullopt, lte_full, wifi_band));
  CHECK(cca_busy(strict, std::nullopt, lte_full, wifi_band, -30.0, true));

  // 6 PRB placed outside the primary 10 MHz but inside the full channel.
  const radio::SpectrumBand narrow{7.0, 6 * lte::kPrbWidthMhz};
  CcaProfile full = vendor_a();
  CcaProfile primary = vendor_a();
  primary.measure_band = MeasureBand::Primary10;
  CHECK(cca_busy(full, -40.0, narrow, wifi_band));
  CHECK_FALSE(cca_busy(primary, -40.0, narrow, wifi_band));

  CHECK(measured_band(MeasureBand::Primary10, wifi_band).width_mhz == 10.0);
  CHECK(measured_band(MeasureBand::Full20, wifi_band).width_mhz == 20.0);
}

TEST_CASE("presets") {
  CHECK(cca_preset("vendor-A") == vendor_a());
  CHECK(cca_preset("vendor-B") == vendor_b());
  CHECK_FALSE(cca_preset("vendor-C"));
  CHECK(vendor_a().mid_packet_abort);
  CHECK_FALSE(vendor_b().mid_packet_abort);
  CHECK(parse_measure_band("primary10") == MeasureBand::Primary10);
  CHECK(to_string(MeasureBand::Full20) == "full20");
}

TEST_CASE("receiver_decode against the default geometry") {
  const RunConfig defaults;
  const auto env = make_environment(defaults);
  const double signal = 17.0 + env.wifi_path_gain_db;
  CHECK(signal == doctest::Approx(-23.2).epsilon(0.002));

  auto decode = [&](double lte_dbm, double duty, int mcs) {
    Engine engine(1);
    lte::DutyCycleConfig dc;
    dc.duty = duty;
    lte::LtePhyConfig phy;
    phy.tx_power_dbm = lte_dbm;
    lte::LteNode node(engine, dc, phy);
    Medium medium(node, env);
    node.start();
    engine.run_until(1ms);
    RngStream rng(1, "per");
    const auto airtime = std::chrono::microseconds(frame_airtime_us(mcs_for_label(mcs), 1500, {}));
    return receiver_decode(medium, Position::Receiver, signal, mcs, SimTime(1ms),
                           SimTime(1ms) + airtime, rng);
  };

  CHECK(decode(12.0, 0.0, 54) == radio::Outcome::Success);
  CHECK(decode(12.0, 1.0, 54) == radio::Outcome::Failure);
  CHECK(decode(12.0, 1.0, 6) == radio::Outcome::Failure);
  CHECK(decode(-16.0, 1.0, 6) == radio::Outcome::Success); // SINR 24.4 dB
  CHECK(decode(-16.0, 1.0, 54) == radio::Outcome::Failure);
}

TEST_CASE("idle-channel goodput matches the analytic DCF model") {
  RunConfig cfg;
  cfg.lte.duty.duty = 0.0;
  for (const auto &m : mcs_table()) {
    cfg.wifi.mcs = m.label_mbps;
    const double sim = metrics::throughput_mbps(run_simulation(cfg));
    const double ref = oracle::dcf_goodput_mbps(m.bits_per_symbol, 1500);
    CHECK(std::abs(sim - ref) / ref < 0.02);
    CHECK(analytic_goodput_mbps(m, 1500, DcfParams{}) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("ACK is sent exactly SIFS after the data frame") {
  auto cfg = short_run();
  cfg.lte.duty.duty = 0.0;
  const auto lines = traced_run(cfg);
  int acks = 0;
  long long last_data_end = -1;
  for (const auto &l : lines) {
    if (l.kind != "tx-end") continue;
    if (l.node == "wifi-tx") {
      last_data_end = l.t_ns;
    } else if (l.node == "wifi-rx") {
      REQUIRE(last_data_end >= 0);
      CHECK(l.t_ns - last_data_end == (16 + 28) * 1000);
      ++acks;
    }
  }
  CHECK(acks > 1000);
}

TEST_CASE("backoff freezes while sensed LTE is active") {
  auto cfg = short_run();
  cfg.lte.phy.tx_power_dbm = 12.0;
  const auto airtime = frame_airtime_us(mcs_for_label(54), 1500, {}) * 1000;

  SUBCASE("vendor-A aborts mid-slot: no frame starts while LTE is on") {
    cfg.wifi.cca = vendor_a();
    std::vector<lte::Transition> tr;
    const auto lines = traced_run(cfg, &tr);
    int frames = 0;
    for (const auto &l : lines) {
      if (l.kind != "tx-end" || l.node != "wifi-tx") continue;
      const SimTime start(l.t_ns - airtime);
      CHECK_FALSE(lte_active_at(tr, start));
      ++frames;
    }
    CHECK(frames > 1000);
  }
  SUBCASE("vendor-B samples at slot boundaries: at most one slot late") {
    cfg.wifi.cca = vendor_b();
    std::vector<lte::Transition> tr;
    const auto lines = traced_run(cfg, &tr);
    for (const auto &l : lines) {
      if (l.kind != "tx-end" || l.node != "wifi-tx") continue;
      const SimTime start(l.t_ns - airtime);
      if (lte_active_at(tr, start)) {
        CHECK_FALSE(lte_active_at(tr, start - 9us));
      }
    }
  }
}

TEST_CASE("binary exponential backoff and retry limit") {
  auto cfg = short_run();
  cfg.lte.duty.duty = 1.0;       // always on
  cfg.wifi.cca.name = "custom";
  cfg.wifi.cca.ed_threshold_dbm = 0.0; // never sensed: every frame collides

  Simulation sim(cfg);
  std::vector<StationState> draws;
  sim.transmitter()->set_observer([&](const StationState &s) { draws.push_back(s); });
  const auto m = sim.run();

  CHECK(m.delivered_payload_bytes == 0);
  CHECK(m.failures == m.attempts);
  CHECK(m.drops == m.attempts / 7);

  const int expected_cw[] = {15, 31, 63, 127, 255, 511, 1023};
  REQUIRE(draws.size() > 14);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    CHECK(draws[i].cw == expected_cw[i % 7]);
    CHECK(draws[i].retries == static_cast<int>(i % 7));
    CHECK(draws[i].backoff_slots >= 0);
    CHECK(draws[i].backoff_slots <= draws[i].cw);
  }
}

TEST_CASE("contention window saturates at cw_max") {
  auto cfg = short_run();
  cfg.lte.duty.duty = 1.0;
  cfg.wifi.cca.name = "custom";
  cfg.wifi.cca.ed_threshold_dbm = 0.0;
  cfg.wifi.dcf.retry_limit = 10;
  cfg.wifi.dcf.cw_max = 255;

  Simulation sim(cfg);
  std::vector<int> cws;
  sim.transmitter()->set_observer([&](const StationState &s) { cws.push_back(s.cw); });
  sim.run();
  const int expected_cw[] = {15, 31, 63, 127, 255, 255, 255, 255, 255, 255};
  REQUIRE(cws.size() > 20);
  for (std::size_t i = 0; i < cws.size(); ++i) CHECK(cws[i] == expected_cw[i % 10]);
}

TEST_CASE("work conservation on an idle channel") {
  // With a saturated queue and no LTE, the channel time splits exactly into
  // DIFS + drawn backoff + DATA + SIFS + ACK per cycle.
  auto cfg = short_run();
  cfg.lte.duty.duty = 0.0;
  Simulation sim(cfg);
  std::vector<int> slots;
  sim.transmitter()->set_observer([&](const StationState &s) { slots.push_back(s.backoff_slots); });
  const auto m = sim.run();

  const long long cycle_fixed_ns = (34 + 248 + 16 + 28) * 1000LL;
  long long busy_ns = 0;
  for (std::size_t i = 0; i + 1 < slots.size(); ++i) {
    busy_ns += cycle_fixed_ns + slots[i] * 9000LL;
  }
  const long long last_cycle_max = cycle_fixed_ns + 15 * 9000LL;
  CHECK(m.duration_ns - busy_ns >= 0);
  CHECK(m.duration_ns - busy_ns <= last_cycle_max);
  CHECK(static_cast<std::size_t>(m.attempts) + 1 >= slots.size() - 1);

  const auto &occ = m.occupancy;
  CHECK(occ.wifi_only_ns + occ.lte_only_ns + occ.overlap_ns + occ.idle_ns == m.duration_ns);
  CHECK(occ.lte_only_ns == 0);
}

TEST_CASE("occupancy partitions the run under coexistence") {
  auto cfg = short_run();
  cfg.lte.phy.tx_power_dbm = -16.0; // not sensed: frames overlap LTE
  const auto m = run_simulation(cfg);
  const auto &occ = m.occupancy;
  CHECK(occ.wifi_only_ns + occ.lte_only_ns + occ.overlap_ns + occ.idle_ns == m.duration_ns);
  CHECK(occ.overlap_ns > 0);
  CHECK(m.failures > 0);
  CHECK(m.lte_airtime_ns == occ.lte_only_ns + occ.overlap_ns);
}

TEST_CASE("CCA profile choice is neutral when LTE is strong") {
  RunConfig cfg;
  cfg.duration_s = 10.0;
  cfg.lte.phy.tx_power_dbm = 12.0;
  cfg.wifi.cca = vendor_a();
  const double a = metrics::throughput_mbps(run_simulation(cfg));
  cfg.wifi.cca = vendor_b();
  const double b = metrics::throughput_mbps(run_simulation(cfg));
  cfg.lte.duty.duty = 0.0;
  const double base = metrics::throughput_mbps(run_simulation(cfg));
  CHECK(std::abs(a - b) / base <= 0.05);
}
