#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "coexsim/engine.hpp"

namespace coexsim::radio {

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
double db_to_linear(double db);

/// Occupied spectrum as a flat-PSD interval. Centres are relative to the
/// WiFi channel centre.
struct SpectrumBand {
  double center_mhz = 0.0;
  double width_mhz = 20.0;

  double low() const { return center_mhz - width_mhz / 2.0; }
  double high() const { return center_mhz + width_mhz / 2.0; }

  bool operator==(const SpectrumBand &) const = default;
};

struct LinkBudget {
  double tx_power_dbm = 0.0;
  /// Negative for loss; includes both antenna gains.
  double path_gain_db = 0.0;

  double rx_power_dbm() const { return tx_power_dbm + path_gain_db; }
};

struct PerModel {
  /// Minimum SINR per MCS rate label (Mbps).
  std::map<int, double> per_mcs_threshold_db;
  /// 0 selects the hard threshold model.
  double soft_slope_k = 0.0;
  /// Out-of-band leakage floor relative to in-band PSD.
  double oob_floor_dbc = -30.0;

  double threshold_db(int mcs_label) const;

  bool operator==(const PerModel &) const = default;
};

PerModel default_per_model();

struct SinrSegment {
  SimTime start{};
  SimTime end{};
  double sinr_db = 0.0;
};

/// Piecewise-constant SINR over one packet's reception window.
class SinrTrace {
public:
  SinrTrace(SimTime start, SimTime end);

  /// Appends [current end, until) at `sinr_db`. Throws if it would leave a gap
  /// or overrun the window.
  void append(SimTime until, double sinr_db);

  bool complete() const { return covered_ == end_; }
  SimTime start() const { return start_; }
  SimTime end() const { return end_; }
  std::span<const SinrSegment> segments() const { return segments_; }
  double min_sinr_db() const;

private:
  SimTime start_;
  SimTime end_;
  SimTime covered_;
  std::vector<SinrSegment> segments_;
};

struct Interferer {
  double power_dbm = 0.0;
  double overlap = 1.0;
};

/// Free-space path loss in dB, 20 log10(d_km) + 20 log10(f_GHz) + 92.45.
double fspl_db(double distance_m, double freq_ghz);

/// Fraction of the interferer's power falling inside the victim band under a
/// flat PSD, never below the linear leakage floor.
double overlap_fraction(const SpectrumBand &interferer,
                        const SpectrumBand &victim, double oob_floor_dbc);

double noise_floor_dbm(double bandwidth_mhz, double noise_figure_db);

double sinr_db(double signal_dbm, std::span<const Interferer> interferers,
               double noise_dbm);

enum class Outcome { Success, Failure };

/// Decodes a packet sent at `mcs_label` against the SINR trace. The hard
/// model never consumes randomness; the soft model draws once from `rng`.
Outcome packet_outcome(int mcs_label, const SinrTrace &trace,
                       const PerModel &model, RngStream &rng);

} // namespace coexsim::radio
