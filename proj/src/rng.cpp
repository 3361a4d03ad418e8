// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/rng.hpp"

#include <cmath>
#include <numbers>

namespace epidiff {

Stream::Stream(std::uint64_t master_seed, const StreamKey& key) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ key.replicate);
  h = mix64(h ^ key.particle);
  h = mix64(h ^ static_cast<std::uint64_t>(key.purpose));
  h = mix64(h ^ key.sub);
  key_ = {static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  domain_ = mix64(h ^ 0x5851f42d4c957f2dull);
}

std::array<std::uint64_t, 2> Stream::block(std::uint64_t index) const {
  const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                   static_cast<std::uint32_t>(domain_), static_cast<std::uint32_t>(domain_ >> 32)};
  const auto out = Philox4x32::apply(ctr, key_);
  return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0], (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

double Stream::uniform_at(std::uint64_t index) const { return to_unit(block(index)[0]); }

double Stream::normal_at(std::uint64_t index) const {
  const auto b = block(index >> 1);
  const double u1 = 1.0 - to_unit(b[0]);  // (0, 1]
  const double u2 = to_unit(b[1]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (index & 1u) ? radius * std::sin(angle) : radius * std::cos(angle);
}

double Stream::exponential_at(std::uint64_t index) const { return -std::log(1.0 - uniform_at(index)); }

Stream::result_type Stream::operator()() {
  if (buffered_ == 0) {
    buffer_ = block(cursor_++);
    buffered_ = 2;
  }
  return buffer_[2 - buffered_--];
}

double Stream::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Stream::exponential() { return -std::log(1.0 - uniform()); }

}  // namespace epidiff
