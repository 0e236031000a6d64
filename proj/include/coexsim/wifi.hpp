#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "coexsim/radio.hpp"

namespace coexsim::wifi {

inline constexpr double kChannelWidthMhz = 20.0;

/// 802.11a OFDM MAC/PHY timing. Times in microseconds.
struct DcfParams {
  int slot_us = 9;
  int sifs_us = 16;
  int difs_us = 34;
  int cw_min = 15;
  int cw_max = 1023;
  int retry_limit = 7;
  int preamble_us = 20;
  int ack_bytes = 14;
  int control_rate_mbps = 24;
  /// MAC header + FCS + LLC/SNAP.
  int mac_overhead_bytes = 36;

  bool operator==(const DcfParams &) const = default;
};

void validate(const DcfParams &p);

struct McsEntry {
  int label_mbps = 54;
  int bits_per_symbol = 216; // N_DBPS
  double min_sinr_db = 25.0;
};

/// The eight legacy OFDM rates, slowest first.
std::span<const McsEntry> mcs_table();
/// Throws std::invalid_argument for labels outside the table.
const McsEntry &mcs_for_label(int label_mbps);

enum class MeasureBand { Full20, Primary10 };

std::string_view to_string(MeasureBand band);
std::optional<MeasureBand> parse_measure_band(std::string_view text);

/// Vendor-specific energy-detect behaviour.
struct CcaProfile {
  std::string name = "vendor-A";
  double ed_threshold_dbm = -45.0;
  MeasureBand measure_band = MeasureBand::Full20;
  /// true: energy onset freezes the backoff countdown immediately;
  /// false: CCA is sampled at slot boundaries only.
  bool mid_packet_abort = true;

  bool operator==(const CcaProfile &) const = default;
};

CcaProfile vendor_a();
CcaProfile vendor_b();
/// Returns the preset with that name, if any.
std::optional<CcaProfile> cca_preset(std::string_view name);

/// Band over which the profile integrates interference energy.
radio::SpectrumBand measured_band(MeasureBand band,
                                  const radio::SpectrumBand &wifi_band);

/// PPDU duration: preamble + SIGNAL, then 4 us symbols carrying
/// SERVICE (16) + tail (6) + MPDU bits.
std::int64_t frame_airtime_us(const McsEntry &mcs, int payload_bytes,
                              const DcfParams &params);
std::int64_t ack_airtime_us(const DcfParams &params);

/// `lte_power_at_sensor_dbm` is empty while LTE is silent. Preamble
/// detection of the peer station is honored by every profile.
bool cca_busy(const CcaProfile &profile,
              std::optional<double> lte_power_at_sensor_dbm,
              const radio::SpectrumBand &lte_band,
              const radio::SpectrumBand &wifi_band,
              double oob_floor_dbc = -30.0, bool peer_preamble = false);

/// Saturated single-station DCF goodput on an idle channel: payload bits
/// over the expected cycle DIFS + E[backoff] + DATA + SIFS + ACK.
double analytic_goodput_mbps(const McsEntry &mcs, int payload_bytes,
                             const DcfParams &params);

} // namespace coexsim::wifi
