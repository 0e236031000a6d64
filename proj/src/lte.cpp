#include "coexsim/lte.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coexsim::lte {

using namespace std::chrono_literals;

bool is_valid_prb_count(int n_prb) {
  return std::find(std::begin(kValidPrbCounts), std::end(kValidPrbCounts),
                   n_prb) != std::end(kValidPrbCounts);
}

void validate(const DutyCycleConfig &cfg) {
  if (!(cfg.duty >= 0.0 && cfg.duty <= 1.0))
    throw std::invalid_argument("duty must lie in [0, 1]");
  if (!(cfg.mean_period_ms > 0.0))
    throw std::invalid_argument("mean_period_ms must be positive");
  if (!(cfg.silent_spread >= 0.0 && cfg.silent_spread < 1.0))
    throw std::invalid_argument("silent_spread must lie in [0, 1)");
  if (cfg.frame_align_ms <= 0)
    throw std::invalid_argument("frame_align_ms must be positive");
}

void validate(const LtePhyConfig &phy) {
  if (!is_valid_prb_count(phy.n_prb))
    throw std::invalid_argument("n_prb must be one of 6, 15, 25, 50, 75, 100");
  if (!std::isfinite(phy.center_offset_mhz))
    throw std::invalid_argument("center_offset_mhz must be finite");
  if (!std::isfinite(phy.tx_power_dbm))
    throw std::invalid_argument("tx_power_dbm must be finite");
}

namespace {

Duration whole_subframes(double ms) {
  return std::chrono::milliseconds(std::llround(ms));
}

} // namespace

Duration on_duration(const DutyCycleConfig &cfg) {
  return whole_subframes(cfg.duty * cfg.mean_period_ms);
}

Duration draw_silent_duration(const DutyCycleConfig &cfg, RngStream &rng) {
  if (cfg.duty >= 1.0) {
    throw std::invalid_argument("no silent period at 100% duty cycle");
  }
  const double mean = (1.0 - cfg.duty) * cfg.mean_period_ms;
  const double lo = (1.0 - cfg.silent_spread) * mean;
  const double hi = (1.0 + cfg.silent_spread) * mean;
  const double draw = cfg.silent_spread == 0.0 ? mean : rng.uniform(lo, hi);
  return std::max<Duration>(whole_subframes(draw), 1ms);
}

SimTime align_to_frame(SimTime t, Duration frame) {
  const auto rem = t % frame;
  return rem == Duration::zero() ? t : t + (frame - rem);
}

radio::SpectrumBand occupied_band(const LtePhyConfig &phy) {
  return {phy.center_offset_mhz, phy.n_prb * kPrbWidthMhz};
}

LteNode::LteNode(Engine &engine, DutyCycleConfig cfg, LtePhyConfig phy)
    : engine_(engine), cfg_(cfg), phy_(phy),
      rng_(engine.rng_stream("lte-silent")),
      id_(engine.add_node("lte", [this](const Event &ev) { handle(ev); })),
      on_time_(on_duration(cfg)) {
  validate(cfg_);
  validate(phy_);
}

void LteNode::start() {
  if (on_time_ <= Duration::zero()) return; // never transmits
  const SimTime first =
      align_to_frame(engine_.now(), std::chrono::milliseconds(cfg_.frame_align_ms));
  engine_.schedule(first, id_, EventKind::LteOn);
}

void LteNode::handle(const Event &ev) {
  switch (ev.kind) {
  case EventKind::LteOn:
    set_active(true);
    if (cfg_.duty < 1.0) engine_.schedule_in(on_time_, id_, EventKind::LteOff);
    break;
  case EventKind::LteOff: {
    set_active(false);
    const SimTime silent_end = engine_.now() + draw_silent_duration(cfg_, rng_);
    engine_.schedule(
        align_to_frame(silent_end, std::chrono::milliseconds(cfg_.frame_align_ms)),
        id_, EventKind::LteOn);
    break;
  }
  default:
    throw SimulationError("lte node received unexpected event");
  }
}

void LteNode::set_active(bool on) {
  active_ = on;
  transitions_.push_back({engine_.now(), on});
  if (listener_) listener_(on);
}

} // namespace coexsim::lte
