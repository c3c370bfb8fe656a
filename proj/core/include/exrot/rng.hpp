#pragma once

#include <cstdint>

namespace exrot {

// Counter-based randomness: every variate is a pure function of
// (seed, domain, i, j), so streams can be evaluated in any order, in
// parallel, and reproduce bit-identically across platforms.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer (Stafford mix13).
inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t domain,
                                  std::uint64_t i = 0, std::uint64_t j = 0) {
  std::uint64_t h = mix64(seed ^ 0x8f1bbcdcbfa53e0bull);
  h = mix64(h ^ domain);
  h = mix64(h ^ i);
  h = mix64(h ^ j);
  return h;
}

// Domain salts keep independent uses of the same seed from colliding.
inline constexpr std::uint64_t kDomainEnsemble = 0x45;
inline constexpr std::uint64_t kDomainDirection = 0xd1;
inline constexpr std::uint64_t kDomainNet = 0x4e;
inline constexpr std::uint64_t kDomainPacking = 0x50;
inline constexpr std::uint64_t kDomainTrial = 0x7b;
inline constexpr std::uint64_t kDomainPadding = 0xa2;
inline constexpr std::uint64_t kDomainSearch = 0x5e;

// Map 64 random bits to the open interval (0,1); 52-bit resolution so the
// midpoint offset stays exactly representable and the result can never
// round to 0 or 1, keeping normal quantiles of it finite.
inline double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Sequential convenience stream over the same hash.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t domain = 0;
  std::uint64_t counter = 0;

  std::uint64_t next_u64() { return counter_hash(seed, domain, counter++); }
  double next_unit() { return unit_open(next_u64()); }
};

// Sub-stream with its own seed, derived so that distinct (i, j) labels
// give statistically independent streams.
inline RngStream derive_stream(std::uint64_t seed, std::uint64_t domain,
                               std::uint64_t i = 0, std::uint64_t j = 0) {
  return RngStream{counter_hash(seed, domain, i, j), domain, 0};
}

}  // namespace exrot
