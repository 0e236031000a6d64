#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace coexsim {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent run derived from a master seed, a key naming the
/// run (e.g. a canonical parameter assignment) and a repetition index.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key,
                          std::uint64_t rep);

/// Labeled random stream. The engine is mt19937_64 (bit-exact across
/// standard libraries); distributions are implemented here for the same
/// reason, since std:: distributions are implementation-defined.
class RngStream {
public:
  RngStream(std::uint64_t master_seed, std::string_view label);

  const std::string &label() const { return label_; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

private:
  std::string label_;
  std::mt19937_64 gen_;
};

} // namespace coexsim
