#include "coexsim/simulation.hpp"

#include <cmath>

namespace coexsim {

wifi::RadioEnvironment make_environment(const RunConfig &cfg) {
  wifi::RadioEnvironment env;
  env.wifi_path_gain_db = cfg.radio.path_gain_db(cfg.radio.wifi_link);
  env.lte_to_tx_gain_db = cfg.radio.path_gain_db(cfg.radio.lte_to_wifi_tx);
  env.lte_to_rx_gain_db = cfg.radio.path_gain_db(cfg.radio.lte_to_wifi_rx);
  env.noise_dbm = radio::noise_floor_dbm(wifi::kChannelWidthMhz, cfg.radio.noise_figure_db);
  env.wifi_band = {0.0, wifi::kChannelWidthMhz};
  env.per = cfg.radio.per;
  return env;
}

namespace {

wifi::StationConfig station_config(const RunConfig &cfg) {
  wifi::StationConfig s;
  s.dcf = cfg.wifi.dcf;
  s.mcs = wifi::mcs_for_label(cfg.wifi.mcs);
  s.mcs.min_sinr_db = cfg.radio.per.threshold_db(cfg.wifi.mcs);
  s.cca = cfg.wifi.cca;
  s.payload_bytes = cfg.wifi.payload_bytes;
  s.tx_power_dbm = cfg.wifi.tx_power_dbm;
  return s;
}

SimTime run_length(const RunConfig &cfg) {
  return SimTime(std::llround(cfg.duration_s * 1e9));
}

} // namespace

Simulation::Simulation(const RunConfig &cfg)
    : cfg_((validate(cfg), cfg)), engine_(cfg.seed),
      lte_(engine_, cfg.lte.duty, cfg.lte.phy),
      medium_(lte_, make_environment(cfg)),
      control_(engine_.add_node("sim", [](const Event &) {})) {
  if (cfg_.wifi.enabled) {
    const auto station = station_config(cfg_);
    tx_ = std::make_unique<wifi::WifiTransmitter>(engine_, medium_, station, metrics_);
    rx_ = std::make_unique<wifi::WifiReceiver>(engine_, medium_, station, *tx_);
    tx_->attach(*rx_);
    const bool sensed = medium_.lte_sensed(wifi::Position::Transmitter, station.cca);
    if (sensed) {
      lte_.on_transition([tx = tx_.get()](bool on) { tx->on_cca_change(on); });
    }
  }
}

Simulation::~Simulation() = default;

const metrics::RunMetrics &Simulation::run() {
  if (ran_) throw SimulationError("simulation already ran");
  ran_ = true;
  const SimTime end = run_length(cfg_);
  lte_.start();
  if (tx_) tx_->start();
  engine_.schedule(end, control_, EventKind::RunEnd);
  engine_.run_until(end);

  metrics_.duration_ns = end.count();
  metrics_.occupancy = medium_.occupancy(end);
  const auto &occ = metrics_.occupancy;
  metrics_.wifi_airtime_ns = occ.wifi_only_ns + occ.overlap_ns;
  metrics_.lte_airtime_ns = occ.lte_only_ns + occ.overlap_ns;
  return metrics_;
}

metrics::RunMetrics run_simulation(const RunConfig &cfg) {
  Simulation sim(cfg);
  return sim.run();
}

} // namespace coexsim
