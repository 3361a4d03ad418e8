// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiff/sampling.hpp"

#include <cmath>

using namespace epidiff;

TEST_CASE("poisson cloud has the origin and the right mean count") {
  double total = 0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    Stream s(7, {static_cast<std::uint64_t>(r), 0, Purpose::PointProcess, 0});
    const auto cloud = sample_poisson_cloud(0.5, 5.0, 2, s);
    REQUIRE(cloud.rows() == 2);
    CHECK(cloud.col(0).isZero());
    CHECK(cloud.cwiseAbs().maxCoeff() <= 5.0);
    total += static_cast<double>(cloud.cols() - 1);
  }
  // mean 50, sd of the average ~ 0.35
  CHECK(std::abs(total / reps - 50.0) < 2.0);
}

TEST_CASE("lifetimes couple across alpha") {
  const Stream s(11, {0, 4, Purpose::Lifetime, 0});
  const double t1 = sample_lifetime(1.0, s);
  const double t2 = sample_lifetime(2.0, s);
  CHECK(t2 == doctest::Approx(t1 / 2.0));
  CHECK(sample_lifetime(0.0, s) == kInf);
}

TEST_CASE("thinning recovers an exponential first contact") {
  // Constant rate 2 on [0, inf): first point ~ Exp(2).
  double total = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    Stream s(3, {0, static_cast<std::uint64_t>(i), Purpose::Thinning, 0});
    auto t = sample_first_contact_thinned([](double) { return 2.0; }, 5.0, kInf, s);
    REQUIRE(t.has_value());
    total += *t;
  }
  CHECK(total / n == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("thinning rejects a violated bound") {
  Stream s(3, {0, 0, Purpose::Thinning, 0});
  CHECK_THROWS_AS(sample_first_contact_thinned([](double) { return 3.0; }, 1.0, kInf, s), ThinningBoundError);
}

TEST_CASE("banded thinning is monotone in the rate") {
  for (int i = 0; i < 500; ++i) {
    auto band = [i](std::uint64_t b) { return Stream(8, {0, static_cast<std::uint64_t>(i), Purpose::Thinning, b}); };
    auto rate = [](double scale) { return [scale](double t) { return scale * (1.0 + std::sin(t)); }; };
    const auto low = sample_first_contact_banded(rate(1.0), 8.0, 2.0, 10.0, band);
    const auto high = sample_first_contact_banded(rate(4.0), 8.0, 2.0, 10.0, band);
    if (low) {
      REQUIRE(high.has_value());
      CHECK(*high <= *low);
    }
  }
}

TEST_CASE("banded thinning has the right law") {
  // Rate 3 constant, window 1: P(no contact) = exp(-3).
  int misses = 0;
  double total = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto band = [i](std::uint64_t b) { return Stream(21, {0, static_cast<std::uint64_t>(i), Purpose::Thinning, b}); };
    const auto t = sample_first_contact_banded([](double) { return 3.0; }, 4.0, 1.0, 1.0, band);
    if (!t) ++misses;
    else total += *t;
  }
  CHECK(static_cast<double>(misses) / n == doctest::Approx(std::exp(-3.0)).epsilon(0.06));
}
