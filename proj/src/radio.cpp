#include "coexsim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace coexsim::radio {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double PerModel::threshold_db(int mcs_label) const {
  auto it = per_mcs_threshold_db.find(mcs_label);
  if (it == per_mcs_threshold_db.end()) {
    throw std::out_of_range("no SINR threshold for MCS " +
                            std::to_string(mcs_label));
  }
  return it->second;
}

PerModel default_per_model() {
  PerModel m;
  m.per_mcs_threshold_db = {{6, 5.0},   {9, 6.0},   {12, 7.0},  {18, 10.0},
                            {24, 13.0}, {36, 18.0}, {48, 23.0}, {54, 25.0}};
  return m;
}

SinrTrace::SinrTrace(SimTime start, SimTime end)
    : start_(start), end_(end), covered_(start) {
  if (end <= start) throw std::invalid_argument("empty reception window");
}

void SinrTrace::append(SimTime until, double sinr_db) {
  if (until <= covered_ || until > end_) {
    throw std::invalid_argument("SINR segment outside reception window");
  }
  segments_.push_back({covered_, until, sinr_db});
  covered_ = until;
}

double SinrTrace::min_sinr_db() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto &s : segments_) m = std::min(m, s.sinr_db);
  return m;
}

double fspl_db(double distance_m, double freq_ghz) {
  if (!(distance_m > 0.0) || !(freq_ghz > 0.0)) {
    throw std::invalid_argument("fspl_db requires positive distance and frequency");
  }
  return 20.0 * std::log10(distance_m / 1000.0) + 20.0 * std::log10(freq_ghz) +
         92.45;
}

double overlap_fraction(const SpectrumBand &interferer,
                        const SpectrumBand &victim, double oob_floor_dbc) {
  // Containment is decided exactly; the subtraction below can land an ulp
  // short of the full width.
  if (interferer.low() >= victim.low() && interferer.high() <= victim.high()) return 1.0;
  const double inter = std::max(
      0.0, std::min(interferer.high(), victim.high()) -
               std::max(interferer.low(), victim.low()));
  const double frac = std::min(1.0, inter / interferer.width_mhz);
  return std::max(frac, db_to_linear(oob_floor_dbc));
}

double noise_floor_dbm(double bandwidth_mhz, double noise_figure_db) {
  if (!(bandwidth_mhz > 0.0)) {
    throw std::invalid_argument("noise bandwidth must be positive");
  }
  return -174.0 + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db;
}

double sinr_db(double signal_dbm, std::span<const Interferer> interferers,
               double noise_dbm) {
  double denom = dbm_to_mw(noise_dbm);
  for (const auto &i : interferers) denom += i.overlap * dbm_to_mw(i.power_dbm);
  return 10.0 * std::log10(dbm_to_mw(signal_dbm) / denom);
}

Outcome packet_outcome(int mcs_label, const SinrTrace &trace,
                       const PerModel &model, RngStream &rng) {
  if (!trace.complete()) {
    throw std::invalid_argument("SINR trace does not cover the packet");
  }
  const double threshold = model.threshold_db(mcs_label);
  if (model.soft_slope_k == 0.0) {
    return trace.min_sinr_db() >= threshold ? Outcome::Success
                                            : Outcome::Failure;
  }
  // Each segment contributes its PER weighted by its share of the window.
  const double total = static_cast<double>((trace.end() - trace.start()).count());
  double log_success = 0.0;
  for (const auto &s : trace.segments()) {
    const double per =
        1.0 / (1.0 + std::exp(model.soft_slope_k * (s.sinr_db - threshold)));
    const double weight = static_cast<double>((s.end - s.start).count()) / total;
    log_success += weight * std::log1p(-per);
  }
  return rng.uniform01() < std::exp(log_success) ? Outcome::Success
                                                 : Outcome::Failure;
}

} // namespace coexsim::radio
