#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "coexsim/config.hpp"
#include "coexsim/engine.hpp"
#include "coexsim/lte.hpp"
#include "coexsim/metrics.hpp"
#include "coexsim/station.hpp"

namespace coexsim {

/// Derives the static radio picture (path gains, noise, PER model) of a run.
wifi::RadioEnvironment make_environment(const RunConfig &cfg);

/// One closed run: LTE node, medium and (optionally) the WiFi link.
class Simulation {
public:
  explicit Simulation(const RunConfig &cfg);
  ~Simulation();

  Simulation(const Simulation &) = delete;
  Simulation &operator=(const Simulation &) = delete;

  void set_trace(std::ostream *sink) { engine_.set_trace(sink); }

  /// Runs to the configured duration; may be called once.
  const metrics::RunMetrics &run();

  const metrics::RunMetrics &metrics() const { return metrics_; }
  const std::vector<lte::Transition> &lte_transitions() const {
    return lte_.transitions();
  }
  Engine &engine() { return engine_; }
  wifi::WifiTransmitter *transmitter() { return tx_.get(); }
  const wifi::Medium &medium() const { return medium_; }

private:
  RunConfig cfg_;
  Engine engine_;
  lte::LteNode lte_;
  wifi::Medium medium_;
  metrics::RunMetrics metrics_;
  std::unique_ptr<wifi::WifiTransmitter> tx_;
  std::unique_ptr<wifi::WifiReceiver> rx_;
  NodeId control_;
  bool ran_ = false;
};

/// Convenience wrapper: build, run, return the metrics.
metrics::RunMetrics run_simulation(const RunConfig &cfg);

} // namespace coexsim
