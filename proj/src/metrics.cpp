#include "coexsim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace coexsim::metrics {

double throughput_mbps(const RunMetrics &m) {
  if (m.duration_ns <= 0) throw std::domain_error("run duration must be positive");
  return static_cast<double>(m.delivered_payload_bytes) * 8.0 /
         (static_cast<double>(m.duration_ns) * 1e-9) / 1e6;
}

double normalized_throughput(const RunMetrics &run, const RunMetrics &baseline) {
  const double base = throughput_mbps(baseline);
  if (!(base > 0.0)) throw std::domain_error("baseline throughput is zero");
  return throughput_mbps(run) / base;
}

double quantile_inclusive(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("box_stats needs at least one sample");
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());

  BoxStats b;
  b.q25 = quantile_inclusive(v, 0.25);
  b.median = quantile_inclusive(v, 0.5);
  b.q75 = quantile_inclusive(v, 0.75);
  const double iqr = b.q75 - b.q25;
  const double lo_fence = b.q25 - 1.5 * iqr;
  const double hi_fence = b.q75 + 1.5 * iqr;

  b.whisker_lo = b.q25;
  b.whisker_hi = b.q75;
  bool any_inside = false;
  for (double x : v) {
    if (x < lo_fence || x > hi_fence) {
      b.outliers.push_back(x);
      continue;
    }
    if (!any_inside) {
      b.whisker_lo = b.whisker_hi = x;
      any_inside = true;
    }
    b.whisker_lo = std::min(b.whisker_lo, x);
    b.whisker_hi = std::max(b.whisker_hi, x);
  }
  // With an outlier next to a quartile the interpolated quartile can pass the
  // last inlier; the whisker never ends inside the box.
  b.whisker_lo = std::min(b.whisker_lo, b.q25);
  b.whisker_hi = std::max(b.whisker_hi, b.q75);
  return b;
}

} // namespace coexsim::metrics
