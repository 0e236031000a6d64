#include "coexsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

namespace coexsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() ||
      !std::isfinite(v)) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int32(std::string_view key, std::string_view text) {
  const auto v = parse_int(key, text);
  if (v < INT32_MIN || v > INT32_MAX) {
    throw ConfigError(std::string(key), "integer out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_seed(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key), "expected a non-negative integer seed");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

/// Plain fraction or percentage ("50%").
double parse_fraction(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.back() == '%') {
    return parse_double(key, text.substr(0, text.size() - 1)) / 100.0;
  }
  return parse_double(key, text);
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::string path;
  std::function<void(RunConfig &, std::string_view key, std::string_view)> set;
  std::function<std::string(const RunConfig &)> get;
};

template <class Accessor>
Field real_field(std::string path, Accessor acc) {
  return {std::move(path),
          [acc](RunConfig &c, std::string_view k, std::string_view v) {
            acc(c) = parse_double(k, v);
          },
          [acc](const RunConfig &c) { return format_number(acc(c)); }};
}

template <class Accessor>
Field int_field(std::string path, Accessor acc) {
  return {std::move(path),
          [acc](RunConfig &c, std::string_view k, std::string_view v) {
            acc(c) = parse_int32(k, v);
          },
          [acc](const RunConfig &c) {
            return std::to_string(acc(c));
          }};
}

template <class Accessor>
Field bool_field(std::string path, Accessor acc) {
  return {std::move(path),
          [acc](RunConfig &c, std::string_view k, std::string_view v) {
            acc(c) = parse_bool(k, v);
          },
          [acc](const RunConfig &c) {
            return format_bool(acc(c));
          }};
}

/// Writing a distance makes geometry the active description of the link.
Field distance_field(std::string path, LinkSpec RadioConfig::*link) {
  return {std::move(path),
          [link](RunConfig &c, std::string_view k, std::string_view v) {
            (c.radio.*link).distance_m = parse_double(k, v);
            (c.radio.*link).gain_db.reset();
          },
          [link](const RunConfig &c) {
            const auto &l = c.radio.*link;
            return l.distance_m ? format_number(*l.distance_m) : std::string{};
          }};
}

Field gain_field(std::string path, LinkSpec RadioConfig::*link) {
  return {std::move(path),
          [link](RunConfig &c, std::string_view k, std::string_view v) {
            (c.radio.*link).gain_db = parse_double(k, v);
            (c.radio.*link).distance_m.reset();
          },
          [link](const RunConfig &c) {
            const auto &l = c.radio.*link;
            return l.gain_db ? format_number(*l.gain_db) : std::string{};
          }};
}

/// Explicit CCA parameters turn the profile into a custom one.
template <class Accessor, class Parse, class Format>
Field cca_field(std::string path, Accessor acc, Parse parse, Format format) {
  return {std::move(path),
          [acc, parse](RunConfig &c, std::string_view k, std::string_view v) {
            acc(c.wifi.cca) = parse(k, v);
            c.wifi.cca.name = "custom";
          },
          [acc, format](const RunConfig &c) {
            return format(acc(c.wifi.cca));
          }};
}

std::string format_thresholds(const radio::PerModel &m) {
  std::string out;
  for (const auto &[mcs, thr] : m.per_mcs_threshold_db) {
    if (!out.empty()) out += ',';
    out += std::to_string(mcs) + ':' + format_number(thr);
  }
  return out;
}

void parse_thresholds(radio::PerModel &m, std::string_view key, std::string_view text) {
  for (const auto &item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError(std::string(key), "expected mcs:threshold pairs, got '" + item + "'");
    }
    const int mcs = parse_int32(key, std::string_view(item).substr(0, colon));
    try {
      (void)wifi::mcs_for_label(mcs);
    } catch (const std::invalid_argument &e) {
      throw ConfigError(std::string(key), e.what());
    }
    m.per_mcs_threshold_db[mcs] = parse_double(key, std::string_view(item).substr(colon + 1));
  }
}

const std::vector<Field> &fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"run.seed",
                 [](RunConfig &c, std::string_view k, std::string_view v) { c.seed = parse_seed(k, v); },
                 [](const RunConfig &c) { return std::to_string(c.seed); }});
    f.push_back(real_field("run.duration_s", [](auto &c) -> auto & { return c.duration_s; }));

    f.push_back({"lte.duty",
                 [](RunConfig &c, std::string_view k, std::string_view v) {
                   c.lte.duty.duty = parse_fraction(k, v);
                 },
                 [](const RunConfig &c) { return format_number(c.lte.duty.duty); }});
    f.push_back(real_field("lte.mean_period_ms", [](auto &c) -> auto & { return c.lte.duty.mean_period_ms; }));
    f.push_back(real_field("lte.silent_spread", [](auto &c) -> auto & { return c.lte.duty.silent_spread; }));
    f.push_back(int_field("lte.frame_align_ms", [](auto &c) -> auto & { return c.lte.duty.frame_align_ms; }));
    f.push_back(int_field("lte.n_prb", [](auto &c) -> auto & { return c.lte.phy.n_prb; }));
    f.push_back(real_field("lte.center_offset_mhz", [](auto &c) -> auto & { return c.lte.phy.center_offset_mhz; }));
    f.push_back(real_field("lte.tx_power_dbm", [](auto &c) -> auto & { return c.lte.phy.tx_power_dbm; }));

    f.push_back(bool_field("wifi.enabled", [](auto &c) -> auto & { return c.wifi.enabled; }));
    f.push_back(int_field("wifi.mcs", [](auto &c) -> auto & { return c.wifi.mcs; }));
    f.push_back(real_field("wifi.tx_power_dbm", [](auto &c) -> auto & { return c.wifi.tx_power_dbm; }));
    f.push_back(int_field("wifi.payload_bytes", [](auto &c) -> auto & { return c.wifi.payload_bytes; }));
    f.push_back({"wifi.cca",
                 [](RunConfig &c, std::string_view k, std::string_view v) {
                   const auto name = trim(v);
                   if (name == "custom") {
                     c.wifi.cca.name = "custom";
                     return;
                   }
                   auto preset = wifi::cca_preset(name);
                   if (!preset) {
                     throw ConfigError(std::string(k), "unknown CCA profile '" + std::string(name) +
                                                           "' (vendor-A, vendor-B or custom)");
                   }
                   c.wifi.cca = *preset;
                 },
                 [](const RunConfig &c) { return c.wifi.cca.name; }});
    f.push_back(cca_field(
        "wifi.cca_ed_dbm", [](auto &p) -> auto & { return p.ed_threshold_dbm; },
        parse_double, format_number));
    f.push_back(cca_field(
        "wifi.cca_measure_band", [](auto &p) -> auto & { return p.measure_band; },
        [](std::string_view k, std::string_view v) {
          auto band = wifi::parse_measure_band(trim(v));
          if (!band) throw ConfigError(std::string(k), "expected full20 or primary10");
          return *band;
        },
        [](wifi::MeasureBand b) { return std::string(wifi::to_string(b)); }));
    f.push_back(cca_field(
        "wifi.cca_mid_packet_abort", [](auto &p) -> auto & { return p.mid_packet_abort; },
        parse_bool, format_bool));
    f.push_back(int_field("wifi.slot_us", [](auto &c) -> auto & { return c.wifi.dcf.slot_us; }));
    f.push_back(int_field("wifi.sifs_us", [](auto &c) -> auto & { return c.wifi.dcf.sifs_us; }));
    f.push_back(int_field("wifi.difs_us", [](auto &c) -> auto & { return c.wifi.dcf.difs_us; }));
    f.push_back(int_field("wifi.cw_min", [](auto &c) -> auto & { return c.wifi.dcf.cw_min; }));
    f.push_back(int_field("wifi.cw_max", [](auto &c) -> auto & { return c.wifi.dcf.cw_max; }));
    f.push_back(int_field("wifi.retry_limit", [](auto &c) -> auto & { return c.wifi.dcf.retry_limit; }));
    f.push_back(int_field("wifi.preamble_us", [](auto &c) -> auto & { return c.wifi.dcf.preamble_us; }));
    f.push_back(int_field("wifi.ack_bytes", [](auto &c) -> auto & { return c.wifi.dcf.ack_bytes; }));
    f.push_back(int_field("wifi.control_rate_mbps", [](auto &c) -> auto & { return c.wifi.dcf.control_rate_mbps; }));
    f.push_back(int_field("wifi.mac_overhead_bytes", [](auto &c) -> auto & { return c.wifi.dcf.mac_overhead_bytes; }));

    f.push_back(real_field("radio.freq_ghz", [](auto &c) -> auto & { return c.radio.freq_ghz; }));
    f.push_back(real_field("radio.antenna_gain_dbi", [](auto &c) -> auto & { return c.radio.antenna_gain_dbi; }));
    f.push_back(distance_field("radio.wifi_distance_m", &RadioConfig::wifi_link));
    f.push_back(gain_field("radio.wifi_gain_db", &RadioConfig::wifi_link));
    f.push_back(distance_field("radio.lte_tx_distance_m", &RadioConfig::lte_to_wifi_tx));
    f.push_back(gain_field("radio.lte_tx_gain_db", &RadioConfig::lte_to_wifi_tx));
    f.push_back(distance_field("radio.lte_rx_distance_m", &RadioConfig::lte_to_wifi_rx));
    f.push_back(gain_field("radio.lte_rx_gain_db", &RadioConfig::lte_to_wifi_rx));
    f.push_back(real_field("radio.noise_figure_db", [](auto &c) -> auto & { return c.radio.noise_figure_db; }));
    f.push_back(real_field("radio.oob_floor_dbc", [](auto &c) -> auto & { return c.radio.per.oob_floor_dbc; }));
    f.push_back(real_field("radio.per_soft_slope", [](auto &c) -> auto & { return c.radio.per.soft_slope_k; }));
    f.push_back({"radio.per_thresholds",
                 [](RunConfig &c, std::string_view k, std::string_view v) { parse_thresholds(c.radio.per, k, v); },
                 [](const RunConfig &c) { return format_thresholds(c.radio.per); }});

    f.push_back({"output.csv",
                 [](RunConfig &c, std::string_view, std::string_view v) { c.output.csv = trim(v); },
                 [](const RunConfig &c) { return c.output.csv; }});
    f.push_back({"output.trace",
                 [](RunConfig &c, std::string_view, std::string_view v) { c.output.trace = trim(v); },
                 [](const RunConfig &c) { return c.output.trace; }});
    return f;
  }();
  return table;
}

const Field &find_field(std::string_view path) {
  for (const auto &f : fields())
    if (f.path == path) return f;
  throw ConfigError(std::string(path), "unknown configuration key");
}

void require(bool ok, const char *key, const std::string &what) {
  if (!ok) throw ConfigError(key, what);
}

} // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0; // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double RadioConfig::path_gain_db(const LinkSpec &link) const {
  if (link.gain_db) return *link.gain_db;
  return -radio::fspl_db(link.distance_m.value(), freq_ghz) + 2.0 * antenna_gain_dbi;
}

void set_field(RunConfig &cfg, std::string_view path, std::string_view value) {
  find_field(path).set(cfg, path, value);
}

std::string get_field(const RunConfig &cfg, std::string_view path) {
  return find_field(path).get(cfg);
}

const std::vector<std::string> &known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto &f : fields()) k.push_back(f.path);
    return k;
  }();
  return keys;
}

std::string resolve_key(std::string_view key) {
  if (key.find('.') != std::string_view::npos) {
    (void)find_field(key);
    return std::string(key);
  }
  std::string match;
  for (const auto &f : fields()) {
    const auto dot = f.path.find('.');
    if (std::string_view(f.path).substr(dot + 1) != key) continue;
    if (!match.empty()) {
      throw ConfigError(std::string(key), "ambiguous key; qualify it as " + match +
                                              " or " + f.path);
    }
    match = f.path;
  }
  if (match.empty()) throw ConfigError(std::string(key), "unknown configuration key");
  return match;
}

void validate(const RunConfig &cfg) {
  require(cfg.duration_s > 0.0, "run.duration_s", "must be positive");

  const auto &d = cfg.lte.duty;
  require(d.duty >= 0.0 && d.duty <= 1.0, "lte.duty", "must lie in [0, 1] (or 0%..100%)");
  require(d.mean_period_ms > 0.0, "lte.mean_period_ms", "must be positive");
  require(d.silent_spread >= 0.0 && d.silent_spread < 1.0, "lte.silent_spread",
          "must lie in [0, 1)");
  require(d.frame_align_ms > 0, "lte.frame_align_ms", "must be positive");
  require(lte::is_valid_prb_count(cfg.lte.phy.n_prb), "lte.n_prb",
          "must be one of 6, 15, 25, 50, 75, 100");

  const auto &w = cfg.wifi;
  try {
    (void)wifi::mcs_for_label(w.mcs);
  } catch (const std::invalid_argument &e) {
    throw ConfigError("wifi.mcs", e.what());
  }
  require(w.payload_bytes > 0 && w.payload_bytes <= 2304, "wifi.payload_bytes",
          "must lie in [1, 2304]");
  try {
    wifi::validate(w.dcf);
  } catch (const std::invalid_argument &e) {
    throw ConfigError("wifi.dcf", e.what());
  }

  const auto &r = cfg.radio;
  require(r.freq_ghz > 0.0, "radio.freq_ghz", "must be positive");
  const std::pair<const char *, const LinkSpec *> links[] = {
      {"radio.wifi_distance_m", &r.wifi_link},
      {"radio.lte_tx_distance_m", &r.lte_to_wifi_tx},
      {"radio.lte_rx_distance_m", &r.lte_to_wifi_rx}};
  for (const auto &[key, link] : links) {
    require(link->distance_m.has_value() != link->gain_db.has_value(), key,
            "inconsistent geometry: give either a distance or a path gain");
    if (link->distance_m) require(*link->distance_m > 0.0, key, "must be positive");
  }
  require(r.per.oob_floor_dbc <= 0.0, "radio.oob_floor_dbc", "must not exceed 0 dBc");
  require(r.per.soft_slope_k >= 0.0, "radio.per_soft_slope", "must be non-negative");
  require(r.per.per_mcs_threshold_db.size() == wifi::mcs_table().size(),
          "radio.per_thresholds", "needs a threshold for every MCS");
  double prev = -INFINITY;
  for (const auto &m : wifi::mcs_table()) {
    const auto it = r.per.per_mcs_threshold_db.find(m.label_mbps);
    require(it != r.per.per_mcs_threshold_db.end(), "radio.per_thresholds",
            "missing MCS " + std::to_string(m.label_mbps));
    require(it->second > prev, "radio.per_thresholds",
            "thresholds must increase strictly with rate");
    prev = it->second;
  }
}

std::vector<ConfigEntry> parse_entries(std::string_view text) {
  std::vector<ConfigEntry> out;
  std::string section = "run";
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("line " + std::to_string(line_no), "malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
    out.push_back({section + "." + std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return out;
}

void apply_entries(RunConfig &cfg, const std::vector<ConfigEntry> &entries) {
  const std::pair<const char *, const char *> link_keys[] = {
      {"radio.wifi_distance_m", "radio.wifi_gain_db"},
      {"radio.lte_tx_distance_m", "radio.lte_tx_gain_db"},
      {"radio.lte_rx_distance_m", "radio.lte_rx_gain_db"}};
  auto given = [&](std::string_view path) {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const ConfigEntry &e) { return e.path == path; });
  };
  for (const auto &[dist, gain] : link_keys) {
    if (given(dist) && given(gain)) {
      throw ConfigError(gain, std::string("inconsistent geometry: ") + dist +
                                  " is also set for this link");
    }
  }
  for (const auto &e : entries) {
    if (e.path == "wifi.cca") set_field(cfg, e.path, e.value);
  }
  for (const auto &e : entries) {
    if (e.path != "wifi.cca") set_field(cfg, e.path, e.value);
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  apply_entries(cfg, parse_entries(text));
  validate(cfg);
  return cfg;
}

std::string serialize_config(const RunConfig &cfg) {
  std::ostringstream out;
  std::string section;
  const bool preset = wifi::cca_preset(cfg.wifi.cca.name).has_value();
  for (const auto &f : fields()) {
    if (preset && f.path.rfind("wifi.cca_", 0) == 0) continue;
    const auto value = f.get(cfg);
    if (value.empty()) continue;
    const auto dot = f.path.find('.');
    const auto sec = f.path.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << '\n';
      out << '[' << sec << "]\n";
      section = sec;
    }
    out << f.path.substr(dot + 1) << " = " << value << '\n';
  }
  return out.str();
}

} // namespace coexsim
