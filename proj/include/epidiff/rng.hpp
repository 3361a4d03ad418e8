// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace epidiff {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }
};

/// SplitMix64 finalizer, used to fold stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

enum class Purpose : std::uint32_t {
  PointProcess = 1,
  Path = 2,
  Lifetime = 3,
  Thinning = 4,
  Bridge = 5,   // boundary-crossing uniforms for hitting detection
  Refine = 6,   // Brownian-bridge midpoints of the driving noise
  Sampling = 7, // hit-or-miss sample points
  Infection = 8 // per-pair per-step trials in the diffusion engine
};

/// Identifies one independent random stream under a master seed.
struct StreamKey {
  std::uint64_t replicate = 0;
  std::uint64_t particle = 0;
  Purpose purpose = Purpose::Path;
  std::uint64_t sub = 0;
};

/// A keyed stream. Values are a pure function of (master seed, key, index),
/// so draws can be replayed in any order; the sequential interface is a
/// cursor over the same sequence.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t master_seed, const StreamKey& key);

  /// 128 random bits at block index `block`.
  std::array<std::uint64_t, 2> block(std::uint64_t block) const;

  /// Uniform on [0, 1) at random-access index.
  double uniform_at(std::uint64_t index) const;
  /// Standard normal at random-access index (Box-Muller pairs per block).
  double normal_at(std::uint64_t index) const;
  /// Standard exponential at random-access index.
  double exponential_at(std::uint64_t index) const;

  // Sequential interface (UniformRandomBitGenerator).
  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  double uniform() { return to_unit((*this)()); }
  double normal();
  double exponential();

  static double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

 private:
  Philox4x32::Key key_{};
  std::uint64_t domain_ = 0;
  std::uint64_t cursor_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

}  // namespace epidiff
