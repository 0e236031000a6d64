#pragma once

#include <functional>
#include <vector>

#include "coexsim/engine.hpp"
#include "coexsim/lte.hpp"
#include "coexsim/metrics.hpp"
#include "coexsim/radio.hpp"
#include "coexsim/wifi.hpp"

namespace coexsim::wifi {

enum class Position { Transmitter, Receiver };

/// Static propagation picture of one run.
struct RadioEnvironment {
  double wifi_path_gain_db = 0.0;
  double lte_to_tx_gain_db = 0.0;
  double lte_to_rx_gain_db = 0.0;
  double noise_dbm = -94.0;
  radio::SpectrumBand wifi_band{0.0, kChannelWidthMhz};
  radio::PerModel per = radio::default_per_model();
};

/// Shared channel: LTE activity history, WiFi transmissions and the
/// interference each WiFi position sees.
class Medium {
public:
  Medium(const lte::LteNode &lte, RadioEnvironment env);

  const RadioEnvironment &environment() const { return env_; }

  /// LTE power arriving at a position, before spectral overlap.
  double lte_power_at(Position pos) const;

  /// In-band LTE interference at a position while LTE is active.
  double lte_inband_interference_dbm(Position pos) const;

  /// Whether active LTE trips the profile's energy detector at `pos`.
  bool lte_sensed(Position pos, const CcaProfile &profile) const;

  /// SINR at `pos` over [start, end) for a signal of `signal_dbm`, following
  /// the LTE activity recorded so far.
  radio::SinrTrace sinr_trace(Position pos, double signal_dbm, SimTime start,
                              SimTime end) const;

  void record_wifi_tx(SimTime start, SimTime end);

  metrics::Occupancy occupancy(SimTime run_end) const;

private:
  struct Interval {
    SimTime start;
    SimTime end;
  };

  const lte::LteNode &lte_;
  RadioEnvironment env_;
  radio::SpectrumBand lte_band_;
  std::vector<Interval> wifi_tx_;
};

struct StationConfig {
  DcfParams dcf;
  McsEntry mcs;
  CcaProfile cca = vendor_a();
  int payload_bytes = 1500;
  double tx_power_dbm = 17.0;
};

enum class Phase { Idle, DifsWait, Backoff, Transmitting, AwaitAck };

struct StationState {
  Phase phase = Phase::Idle;
  int backoff_slots = 0;
  int cw = 15;
  int retries = 0;
};

/// Decodes a frame at `pos` against the interference timeline.
radio::Outcome receiver_decode(const Medium &medium, Position pos,
                               double signal_dbm, int mcs_label, SimTime start,
                               SimTime end, RngStream &rng);

class WifiReceiver;

/// Saturated DCF transmitter (always has a frame queued).
class WifiTransmitter {
public:
  /// Called after every backoff draw with the fresh state.
  using Observer = std::function<void(const StationState &)>;

  WifiTransmitter(Engine &engine, Medium &medium, StationConfig cfg,
                  metrics::RunMetrics &counters);

  void attach(WifiReceiver &receiver) { receiver_ = &receiver; }
  void set_observer(Observer obs) { observer_ = std::move(obs); }

  void start();
  /// Energy-detect state change at the transmitter.
  void on_cca_change(bool busy);
  /// ACK reception finished at the transmitter.
  void on_ack(SimTime start, SimTime end);

  const StationState &state() const { return state_; }
  bool cca_busy() const { return busy_; }

private:
  void handle(const Event &ev);
  void draw_backoff();
  void begin_access();
  void schedule_slot();
  void transmit();
  void attempt_succeeded();
  void attempt_failed();

  Engine &engine_;
  Medium &medium_;
  StationConfig cfg_;
  metrics::RunMetrics &counters_;
  RngStream backoff_rng_;
  RngStream per_rng_;
  NodeId id_;
  WifiReceiver *receiver_ = nullptr;
  Observer observer_;

  StationState state_;
  bool busy_ = false;
  EventHandle pending_;
  EventHandle ack_timeout_;
  Duration data_airtime_;
  Duration ack_airtime_;
};

/// Peer station: decodes data frames and answers with an ACK after SIFS.
class WifiReceiver {
public:
  WifiReceiver(Engine &engine, Medium &medium, StationConfig cfg,
               WifiTransmitter &transmitter);

  void on_data(SimTime start, SimTime end);

private:
  void handle(const Event &ev);

  Engine &engine_;
  Medium &medium_;
  StationConfig cfg_;
  WifiTransmitter &transmitter_;
  RngStream per_rng_;
  NodeId id_;
  Duration ack_airtime_;
  SimTime ack_start_{};
};

} // namespace coexsim::wifi
