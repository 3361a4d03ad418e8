// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiff/rng.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace epidiff;

TEST_CASE("philox known-answer vectors") {
  // Reference vectors published with the Random123 library.
  auto zero = Philox4x32::apply({0, 0, 0, 0}, {0, 0});
  CHECK(zero == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  auto ones = Philox4x32::apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(ones == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  auto pi = Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(pi == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are pure functions of seed and key") {
  const StreamKey key{3, 17, Purpose::Path, 2};
  Stream a(42, key);
  Stream b(42, key);
  for (std::uint64_t i = 0; i < 100; ++i) {
    CHECK(a.uniform_at(i) == b.uniform_at(i));
    CHECK(a.normal_at(i) == b.normal_at(i));
  }
  // Random access agrees regardless of query order.
  std::vector<double> forward, backward;
  for (std::uint64_t i = 0; i < 50; ++i) forward.push_back(a.uniform_at(i));
  for (std::uint64_t i = 50; i-- > 0;) backward.push_back(b.uniform_at(i));
  for (std::size_t i = 0; i < 50; ++i) CHECK(forward[i] == backward[49 - i]);
}

TEST_CASE("distinct keys give distinct streams") {
  const double base = Stream(1, {0, 0, Purpose::Path, 0}).uniform_at(0);
  CHECK(Stream(2, {0, 0, Purpose::Path, 0}).uniform_at(0) != base);
  CHECK(Stream(1, {1, 0, Purpose::Path, 0}).uniform_at(0) != base);
  CHECK(Stream(1, {0, 1, Purpose::Path, 0}).uniform_at(0) != base);
  CHECK(Stream(1, {0, 0, Purpose::Lifetime, 0}).uniform_at(0) != base);
  CHECK(Stream(1, {0, 0, Purpose::Path, 1}).uniform_at(0) != base);
}

TEST_CASE("sequential interface replays the block sequence") {
  Stream s(9, {0, 0, Purpose::Sampling, 0});
  const Stream ref(9, {0, 0, Purpose::Sampling, 0});
  for (std::uint64_t blk = 0; blk < 10; ++blk) {
    const auto bits = ref.block(blk);
    CHECK(s() == bits[0]);
    CHECK(s() == bits[1]);
  }
}

TEST_CASE("moments of uniform, normal and exponential draws") {
  const Stream s(2024, {0, 0, Purpose::Sampling, 0});
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, se = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform_at(i);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = s.normal_at(i);
    sn += z;
    sn2 += z * z;
    se += s.exponential_at(i);
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(se / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("stream works with std distributions") {
  Stream s(5, {0, 0, Purpose::PointProcess, 0});
  std::poisson_distribution<int> pois(10.0);
  double total = 0;
  for (int i = 0; i < 20000; ++i) total += pois(s);
  CHECK(total / 20000 == doctest::Approx(10.0).epsilon(0.02));
}
