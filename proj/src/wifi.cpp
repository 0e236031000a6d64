#include "coexsim/wifi.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace coexsim::wifi {

namespace {

constexpr std::array<McsEntry, 8> kMcsTable{{
    {6, 24, 5.0},
    {9, 36, 6.0},
    {12, 48, 7.0},
    {18, 72, 10.0},
    {24, 96, 13.0},
    {36, 144, 18.0},
    {48, 192, 23.0},
    {54, 216, 25.0},
}};

bool is_pow2_minus_one(int v) { return v > 0 && ((v + 1) & v) == 0; }

} // namespace

void validate(const DcfParams &p) {
  if (p.slot_us <= 0 || p.sifs_us <= 0)
    throw std::invalid_argument("slot_us and sifs_us must be positive");
  if (p.difs_us != p.sifs_us + 2 * p.slot_us)
    throw std::invalid_argument("difs_us must equal sifs_us + 2 * slot_us");
  if (!is_pow2_minus_one(p.cw_min) || !is_pow2_minus_one(p.cw_max))
    throw std::invalid_argument("cw_min and cw_max must be 2^k - 1");
  if (p.cw_min > p.cw_max)
    throw std::invalid_argument("cw_min must not exceed cw_max");
  if (p.retry_limit < 1)
    throw std::invalid_argument("retry_limit must be at least 1");
  if (p.preamble_us < 0 || p.ack_bytes <= 0 || p.mac_overhead_bytes < 0)
    throw std::invalid_argument("frame format sizes must be non-negative");
  (void)mcs_for_label(p.control_rate_mbps);
}

std::span<const McsEntry> mcs_table() { return kMcsTable; }

const McsEntry &mcs_for_label(int label_mbps) {
  for (const auto &m : kMcsTable)
    if (m.label_mbps == label_mbps) return m;
  throw std::invalid_argument("unknown MCS rate " + std::to_string(label_mbps) +
                              " Mbps");
}

std::string_view to_string(MeasureBand band) {
  return band == MeasureBand::Full20 ? "full20" : "primary10";
}

std::optional<MeasureBand> parse_measure_band(std::string_view text) {
  if (text == "full20") return MeasureBand::Full20;
  if (text == "primary10") return MeasureBand::Primary10;
  return std::nullopt;
}

CcaProfile vendor_a() { return {"vendor-A", -45.0, MeasureBand::Full20, true}; }
CcaProfile vendor_b() {
  return {"vendor-B", -48.0, MeasureBand::Primary10, false};
}

std::optional<CcaProfile> cca_preset(std::string_view name) {
  if (name == "vendor-A") return vendor_a();
  if (name == "vendor-B") return vendor_b();
  return std::nullopt;
}

radio::SpectrumBand measured_band(MeasureBand band,
                                  const radio::SpectrumBand &wifi_band) {
  if (band == MeasureBand::Full20) return wifi_band;
  return {wifi_band.center_mhz, wifi_band.width_mhz / 2.0};
}

std::int64_t frame_airtime_us(const McsEntry &mcs, int payload_bytes,
                              const DcfParams &params) {
  if (payload_bytes <= 0) throw std::invalid_argument("payload must be positive");
  const std::int64_t bits =
      16 + 6 + 8 * static_cast<std::int64_t>(payload_bytes + params.mac_overhead_bytes);
  const std::int64_t symbols = (bits + mcs.bits_per_symbol - 1) / mcs.bits_per_symbol;
  return params.preamble_us + 4 * symbols;
}

std::int64_t ack_airtime_us(const DcfParams &params) {
  DcfParams bare = params;
  bare.mac_overhead_bytes = 0;
  return frame_airtime_us(mcs_for_label(params.control_rate_mbps),
                          params.ack_bytes, bare);
}

bool cca_busy(const CcaProfile &profile,
              std::optional<double> lte_power_at_sensor_dbm,
              const radio::SpectrumBand &lte_band,
              const radio::SpectrumBand &wifi_band, double oob_floor_dbc,
              bool peer_preamble) {
  if (peer_preamble) return true;
  if (!lte_power_at_sensor_dbm) return false;
  const double frac = radio::overlap_fraction(
      lte_band, measured_band(profile.measure_band, wifi_band), oob_floor_dbc);
  const double measured = *lte_power_at_sensor_dbm + 10.0 * std::log10(frac);
  return measured >= profile.ed_threshold_dbm;
}

double analytic_goodput_mbps(const McsEntry &mcs, int payload_bytes,
                             const DcfParams &params) {
  const double mean_backoff_us = params.slot_us * params.cw_min / 2.0;
  const double cycle_us = params.difs_us + mean_backoff_us +
                          frame_airtime_us(mcs, payload_bytes, params) +
                          params.sifs_us + ack_airtime_us(params);
  return 8.0 * payload_bytes / cycle_us;
}

} // namespace coexsim::wifi
