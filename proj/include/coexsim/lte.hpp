#pragma once

#include <functional>
#include <vector>

#include "coexsim/engine.hpp"
#include "coexsim/radio.hpp"

namespace coexsim::lte {

inline constexpr double kPrbWidthMhz = 0.18;
inline constexpr int kValidPrbCounts[] = {6, 15, 25, 50, 75, 100};

bool is_valid_prb_count(int n_prb);

/// CSAT-style on/off schedule: a fixed active interval followed by a
/// randomized silent interval, with activity starting on frame boundaries.
struct DutyCycleConfig {
  double duty = 0.5;
  double mean_period_ms = 150.0;
  /// Silent period half-width as a fraction of its mean.
  double silent_spread = 0.5;
  int frame_align_ms = 10;

  bool operator==(const DutyCycleConfig &) const = default;
};

struct LtePhyConfig {
  int n_prb = 100;
  double center_offset_mhz = 0.0;
  double tx_power_dbm = 12.0;

  bool operator==(const LtePhyConfig &) const = default;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const DutyCycleConfig &cfg);
void validate(const LtePhyConfig &phy);

/// Active interval: duty x mean period, rounded to whole 1 ms subframes.
Duration on_duration(const DutyCycleConfig &cfg);

/// Silent interval drawn uniformly within +-spread of its mean, rounded to
/// whole subframes, at least one subframe. Throws when duty is 1.
Duration draw_silent_duration(const DutyCycleConfig &cfg, RngStream &rng);

/// Smallest multiple of `frame` not earlier than `t`.
SimTime align_to_frame(SimTime t, Duration frame);

radio::SpectrumBand occupied_band(const LtePhyConfig &phy);

struct Transition {
  SimTime at{};
  bool on = false;

  bool operator==(const Transition &) const = default;
};

/// The duty-cycled transmitter. It never senses the channel: its schedule
/// depends only on its configuration and its own random stream.
class LteNode {
public:
  using Listener = std::function<void(bool on)>;

  LteNode(Engine &engine, DutyCycleConfig cfg, LtePhyConfig phy);

  /// Registers the activity listener; call before start().
  void on_transition(Listener listener) { listener_ = std::move(listener); }

  /// Schedules the first active interval at the current (frame-aligned) time.
  void start();

  bool active() const { return active_; }
  const std::vector<Transition> &transitions() const { return transitions_; }
  const DutyCycleConfig &duty_config() const { return cfg_; }
  const LtePhyConfig &phy() const { return phy_; }

private:
  void handle(const Event &ev);
  void set_active(bool on);

  Engine &engine_;
  DutyCycleConfig cfg_;
  LtePhyConfig phy_;
  RngStream rng_;
  NodeId id_;
  Duration on_time_;
  bool active_ = false;
  Listener listener_;
  std::vector<Transition> transitions_;
};

} // namespace coexsim::lte
