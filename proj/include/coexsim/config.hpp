#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coexsim/lte.hpp"
#include "coexsim/radio.hpp"
#include "coexsim/wifi.hpp"

namespace coexsim {

/// Raised for any invalid configuration input; `key()` names the offender.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string &what)
      : std::runtime_error(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}
  const std::string &key() const { return key_; }

private:
  std::string key_;
};

/// A link is described either by geometry or by an explicit path gain.
struct LinkSpec {
  std::optional<double> distance_m;
  std::optional<double> gain_db;

  bool operator==(const LinkSpec &) const = default;
};

struct RadioConfig {
  double freq_ghz = 5.18;
  double antenna_gain_dbi = 3.0;
  LinkSpec wifi_link{0.94, std::nullopt};
  LinkSpec lte_to_wifi_tx{0.34, std::nullopt};
  LinkSpec lte_to_wifi_rx{0.35, std::nullopt};
  double noise_figure_db = 7.0;
  radio::PerModel per = radio::default_per_model();

  /// FSPL at the configured frequency plus both antenna gains, unless an
  /// explicit gain is given.
  double path_gain_db(const LinkSpec &link) const;

  bool operator==(const RadioConfig &) const = default;
};

struct WifiConfig {
  bool enabled = true;
  int mcs = 54;
  double tx_power_dbm = 17.0;
  int payload_bytes = 1500;
  wifi::CcaProfile cca = wifi::vendor_a();
  wifi::DcfParams dcf;

  bool operator==(const WifiConfig &) const = default;
};

struct LteConfig {
  lte::DutyCycleConfig duty;
  lte::LtePhyConfig phy;

  bool operator==(const LteConfig &) const = default;
};

struct OutputConfig {
  std::string csv;
  std::string trace;

  bool operator==(const OutputConfig &) const = default;
};

/// Everything needed to run one closed simulation. Defaults reproduce the
/// bench testbed: 0.34/0.35/0.94 m links, 3 dBi antennas, 5.18 GHz, 100 PRB,
/// 17 dBm WiFi, 1500-byte UDP payload.
struct RunConfig {
  std::uint64_t seed = 1;
  double duration_s = 10.0;
  LteConfig lte;
  WifiConfig wifi;
  RadioConfig radio;
  OutputConfig output;

  bool operator==(const RunConfig &) const = default;
};

/// Sets `section.key` from its textual value. Throws ConfigError naming the
/// key on unknown keys and malformed values. Range checks run in validate().
void set_field(RunConfig &cfg, std::string_view path, std::string_view value);

/// Canonical text of a field (shortest round-trip numbers). Empty when a
/// link field is not the active description of that link.
std::string get_field(const RunConfig &cfg, std::string_view path);

/// Every settable `section.key`, in serialization order.
const std::vector<std::string> &known_keys();

/// Resolves a bare key (`duty`) to its unique full path (`lte.duty`).
std::string resolve_key(std::string_view key);

/// Range and consistency checks; throws ConfigError.
void validate(const RunConfig &cfg);

/// One parsed `key = value` line with its section prefix applied.
struct ConfigEntry {
  std::string path;
  std::string value;
  int line = 0;
};

/// Tokenizes the sectioned key-value format without interpreting keys.
std::vector<ConfigEntry> parse_entries(std::string_view text);

/// Applies entries in order on top of `base`; a CCA preset name is applied
/// before the individual CCA fields; a link gain replaces that link's
/// distance. Both given for one link is a geometry error.
void apply_entries(RunConfig &cfg, const std::vector<ConfigEntry> &entries);

/// Parses and validates a full configuration on top of the defaults.
RunConfig parse_config(std::string_view text);

std::string serialize_config(const RunConfig &cfg);

/// Splits a comma-separated list, trimming whitespace.
std::vector<std::string> split_list(std::string_view text);

std::string format_number(double v);

} // namespace coexsim
