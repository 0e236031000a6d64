#include "coexsim/station.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace coexsim::wifi {

using namespace std::chrono_literals;

namespace {

constexpr std::int64_t kDataFrame = 0;
constexpr std::int64_t kAckFrame = 1;

Duration micros(std::int64_t us) { return std::chrono::microseconds(us); }

} // namespace

// ---------------------------------------------------------------- Medium

Medium::Medium(const lte::LteNode &lte, RadioEnvironment env)
    : lte_(lte), env_(std::move(env)), lte_band_(lte::occupied_band(lte.phy())) {}

double Medium::lte_power_at(Position pos) const {
  const double gain = pos == Position::Transmitter ? env_.lte_to_tx_gain_db
                                                   : env_.lte_to_rx_gain_db;
  return lte_.phy().tx_power_dbm + gain;
}

double Medium::lte_inband_interference_dbm(Position pos) const {
  const double frac =
      radio::overlap_fraction(lte_band_, env_.wifi_band, env_.per.oob_floor_dbc);
  return lte_power_at(pos) + 10.0 * std::log10(frac);
}

bool Medium::lte_sensed(Position pos, const CcaProfile &profile) const {
  return wifi::cca_busy(profile, lte_power_at(pos), lte_band_, env_.wifi_band,
                        env_.per.oob_floor_dbc);
}

radio::SinrTrace Medium::sinr_trace(Position pos, double signal_dbm,
                                    SimTime start, SimTime end) const {
  const std::array<radio::Interferer, 1> lte{
      radio::Interferer{lte_inband_interference_dbm(pos), 1.0}};
  const double sinr_quiet = radio::sinr_db(signal_dbm, {}, env_.noise_dbm);
  const double sinr_lte = radio::sinr_db(signal_dbm, lte, env_.noise_dbm);

  const auto &tr = lte_.transitions();
  auto it = std::upper_bound(
      tr.begin(), tr.end(), start,
      [](SimTime t, const lte::Transition &x) { return t < x.at; });
  bool on = it != tr.begin() && std::prev(it)->on;

  radio::SinrTrace trace(start, end);
  for (; it != tr.end() && it->at < end; ++it) {
    if (it->on == on) continue;
    trace.append(it->at, on ? sinr_lte : sinr_quiet);
    on = it->on;
  }
  trace.append(end, on ? sinr_lte : sinr_quiet);
  return trace;
}

void Medium::record_wifi_tx(SimTime start, SimTime end) {
  wifi_tx_.push_back({start, end});
}

metrics::Occupancy Medium::occupancy(SimTime run_end) const {
  std::vector<Interval> lte_on;
  for (const auto &t : lte_.transitions()) {
    if (t.at >= run_end) break;
    if (t.on) {
      lte_on.push_back({t.at, run_end});
    } else if (!lte_on.empty()) {
      lte_on.back().end = t.at;
    }
  }

  auto clipped = [&](const Interval &i) {
    return Interval{std::min(i.start, run_end), std::min(i.end, run_end)};
  };

  std::int64_t wifi = 0, lte = 0, both = 0;
  for (const auto &i : wifi_tx_) {
    const auto c = clipped(i);
    wifi += (c.end - c.start).count();
  }
  for (const auto &i : lte_on) lte += (i.end - i.start).count();

  // Both lists are sorted and internally disjoint.
  std::size_t a = 0, b = 0;
  while (a < wifi_tx_.size() && b < lte_on.size()) {
    const auto w = clipped(wifi_tx_[a]);
    const auto &l = lte_on[b];
    const SimTime lo = std::max(w.start, l.start);
    const SimTime hi = std::min(w.end, l.end);
    if (hi > lo) both += (hi - lo).count();
    if (w.end < l.end) ++a; else ++b;
  }

  metrics::Occupancy occ;
  occ.overlap_ns = both;
  occ.wifi_only_ns = wifi - both;
  occ.lte_only_ns = lte - both;
  occ.idle_ns = run_end.count() - wifi - lte + both;
  return occ;
}

radio::Outcome receiver_decode(const Medium &medium, Position pos,
                               double signal_dbm, int mcs_label, SimTime start,
                               SimTime end, RngStream &rng) {
  const auto trace = medium.sinr_trace(pos, signal_dbm, start, end);
  return radio::packet_outcome(mcs_label, trace, medium.environment().per, rng);
}

// ---------------------------------------------------------- Transmitter

WifiTransmitter::WifiTransmitter(Engine &engine, Medium &medium,
                                 StationConfig cfg,
                                 metrics::RunMetrics &counters)
    : engine_(engine), medium_(medium), cfg_(std::move(cfg)),
      counters_(counters), backoff_rng_(engine.rng_stream("wifi-backoff")),
      per_rng_(engine.rng_stream("wifi-tx-per")),
      id_(engine.add_node("wifi-tx", [this](const Event &ev) { handle(ev); })),
      data_airtime_(micros(frame_airtime_us(cfg_.mcs, cfg_.payload_bytes, cfg_.dcf))),
      ack_airtime_(micros(ack_airtime_us(cfg_.dcf))) {
  state_.cw = cfg_.dcf.cw_min;
}

void WifiTransmitter::start() {
  state_ = StationState{Phase::Idle, 0, cfg_.dcf.cw_min, 0};
  draw_backoff();
  begin_access();
}

void WifiTransmitter::draw_backoff() {
  state_.backoff_slots = static_cast<int>(backoff_rng_.uniform_int(0, state_.cw));
  if (observer_) observer_(state_);
}

void WifiTransmitter::begin_access() {
  if (busy_) {
    state_.phase = Phase::Idle;
    return;
  }
  state_.phase = Phase::DifsWait;
  pending_ = engine_.schedule_in(micros(cfg_.dcf.difs_us), id_,
                                 EventKind::CcaSample, state_.backoff_slots);
}

void WifiTransmitter::schedule_slot() {
  state_.phase = Phase::Backoff;
  pending_ = engine_.schedule_in(micros(cfg_.dcf.slot_us), id_,
                                 EventKind::BackoffSlot, state_.backoff_slots);
}

void WifiTransmitter::on_cca_change(bool busy) {
  busy_ = busy;
  if (busy) {
    if (state_.phase == Phase::DifsWait ||
        (state_.phase == Phase::Backoff && cfg_.cca.mid_packet_abort)) {
      engine_.cancel(pending_);
      state_.phase = Phase::Idle;
    }
    return;
  }
  if (state_.phase == Phase::Idle) begin_access();
}

void WifiTransmitter::transmit() {
  state_.phase = Phase::Transmitting;
  ++counters_.attempts;
  const SimTime start = engine_.now();
  medium_.record_wifi_tx(start, start + data_airtime_);
  pending_ = engine_.schedule_in(data_airtime_, id_, EventKind::TxEnd, kDataFrame);
}

void WifiTransmitter::handle(const Event &ev) {
  switch (ev.kind) {
  case EventKind::CcaSample: // DIFS elapsed on an idle channel
    if (state_.backoff_slots == 0) {
      transmit();
    } else {
      schedule_slot();
    }
    break;
  case EventKind::BackoffSlot:
    --state_.backoff_slots;
    if (state_.backoff_slots == 0) {
      transmit();
    } else if (busy_) {
      state_.phase = Phase::Idle; // sampled busy at the slot boundary
    } else {
      schedule_slot();
    }
    break;
  case EventKind::TxEnd: {
    state_.phase = Phase::AwaitAck;
    ack_timeout_ = engine_.schedule_in(
        micros(cfg_.dcf.sifs_us + cfg_.dcf.slot_us) + ack_airtime_, id_,
        EventKind::AckTimeout);
    receiver_->on_data(engine_.now() - data_airtime_, engine_.now());
    break;
  }
  case EventKind::AckTimeout:
    attempt_failed();
    break;
  default:
    throw SimulationError("wifi transmitter received unexpected event");
  }
}

void WifiTransmitter::on_ack(SimTime start, SimTime end) {
  if (state_.phase != Phase::AwaitAck) return;
  const double signal = cfg_.tx_power_dbm + medium_.environment().wifi_path_gain_db;
  if (receiver_decode(medium_, Position::Transmitter, signal,
                      cfg_.dcf.control_rate_mbps, start, end,
                      per_rng_) == radio::Outcome::Success) {
    engine_.cancel(ack_timeout_);
    attempt_succeeded();
  }
}

void WifiTransmitter::attempt_succeeded() {
  counters_.delivered_payload_bytes += cfg_.payload_bytes;
  state_.cw = cfg_.dcf.cw_min;
  state_.retries = 0;
  draw_backoff();
  begin_access();
}

void WifiTransmitter::attempt_failed() {
  ++counters_.failures;
  ++state_.retries;
  if (state_.retries >= cfg_.dcf.retry_limit) {
    ++counters_.drops;
    state_.retries = 0;
    state_.cw = cfg_.dcf.cw_min;
  } else {
    state_.cw = std::min(2 * (state_.cw + 1) - 1, cfg_.dcf.cw_max);
  }
  draw_backoff();
  begin_access();
}

// ------------------------------------------------------------- Receiver

WifiReceiver::WifiReceiver(Engine &engine, Medium &medium, StationConfig cfg,
                           WifiTransmitter &transmitter)
    : engine_(engine), medium_(medium), cfg_(std::move(cfg)),
      transmitter_(transmitter), per_rng_(engine.rng_stream("wifi-rx-per")),
      id_(engine.add_node("wifi-rx", [this](const Event &ev) { handle(ev); })),
      ack_airtime_(micros(ack_airtime_us(cfg_.dcf))) {}

void WifiReceiver::on_data(SimTime start, SimTime end) {
  const double signal = cfg_.tx_power_dbm + medium_.environment().wifi_path_gain_db;
  if (receiver_decode(medium_, Position::Receiver, signal, cfg_.mcs.label_mbps,
                      start, end, per_rng_) != radio::Outcome::Success) {
    return;
  }
  ack_start_ = end + micros(cfg_.dcf.sifs_us);
  medium_.record_wifi_tx(ack_start_, ack_start_ + ack_airtime_);
  engine_.schedule(ack_start_ + ack_airtime_, id_, EventKind::TxEnd, kAckFrame);
}

void WifiReceiver::handle(const Event &ev) {
  if (ev.kind != EventKind::TxEnd) {
    throw SimulationError("wifi receiver received unexpected event");
  }
  transmitter_.on_ack(ack_start_, engine_.now());
}

} // namespace coexsim::wifi
