#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace coexsim::metrics {

/// Channel time split by who radiates. The four parts sum to the run
/// duration exactly.
struct Occupancy {
  std::int64_t wifi_only_ns = 0;
  std::int64_t lte_only_ns = 0;
  std::int64_t overlap_ns = 0;
  std::int64_t idle_ns = 0;

  bool operator==(const Occupancy &) const = default;
};

struct RunMetrics {
  std::int64_t delivered_payload_bytes = 0;
  std::int64_t attempts = 0;
  std::int64_t failures = 0;
  std::int64_t drops = 0;
  std::int64_t wifi_airtime_ns = 0;
  std::int64_t lte_airtime_ns = 0;
  std::int64_t duration_ns = 0;
  Occupancy occupancy;

  bool operator==(const RunMetrics &) const = default;
};

/// Goodput in Mbps (payload bytes only).
double throughput_mbps(const RunMetrics &m);

/// throughput(run) / throughput(baseline); throws std::domain_error when
/// the baseline delivered nothing.
double normalized_throughput(const RunMetrics &run, const RunMetrics &baseline);

struct BoxStats {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  std::vector<double> outliers;
};

/// Linear-interpolation quantile at position p * (n - 1) of sorted data.
double quantile_inclusive(std::span<const double> sorted, double p);

/// Quartiles by inclusive linear interpolation; whiskers at the most extreme
/// samples within 1.5 IQR of the quartiles (never inside the box); everything
/// beyond is an outlier.
BoxStats box_stats(std::span<const double> samples);

} // namespace coexsim::metrics
