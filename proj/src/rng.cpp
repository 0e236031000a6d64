#include "coexsim/rng.hpp"

#include <stdexcept>

namespace coexsim {

std::uint64_t fnv1a(std::string_view text, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view key,
                          std::uint64_t rep) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ fnv1a(key));
  return splitmix64(h ^ rep);
}

RngStream::RngStream(std::uint64_t master_seed, std::string_view label)
    : label_(label),
      gen_(splitmix64(splitmix64(master_seed) ^ fnv1a(label))) {}

double RngStream::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(gen_()); // full 64-bit range
  // 2^64 mod span; rejecting below it leaves a multiple of span outcomes.
  const std::uint64_t threshold = (0 - span) % span;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x < threshold);
  return lo + static_cast<std::int64_t>(x % span);
}

} // namespace coexsim
