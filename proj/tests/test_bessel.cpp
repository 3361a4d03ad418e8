// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiff/bessel.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>

using namespace epidiff;

// Frozen values from an independent high-precision quadrature of the
// integral representations (scipy.integrate.quad, epsrel 1e-13).
TEST_CASE("frozen oracle values") {
  CHECK(bessel_k(0, 1.0) == doctest::Approx(0.42102443824071).epsilon(1e-12));
  CHECK(bessel_k(1, 1.0) == doctest::Approx(0.60190723019723).epsilon(1e-12));
  CHECK(z_alpha(0.1) == doctest::Approx(29.4433929963).epsilon(1e-10));
  CHECK(z_alpha(0.5) == doctest::Approx(12.1241939507).epsilon(1e-10));
  CHECK(z_alpha(1.0) == doctest::Approx(8.97888588460).epsilon(1e-10));
  CHECK(z_alpha(2.0) == doctest::Approx(6.99958445065).epsilon(1e-10));
  CHECK(z_alpha(4.0) == doctest::Approx(5.72923094356).epsilon(1e-10));
  CHECK(z_alpha(16.0) == doctest::Approx(4.34675898913).epsilon(1e-10));
  CHECK(z_alpha(100.0) == doctest::Approx(3.60132896709).epsilon(1e-10));
  CHECK(z_alpha(1e4) == doctest::Approx(3.18617828687).epsilon(1e-10));
}

TEST_CASE("agrees with an independent library to 1e-10 on [1e-3, 50]") {
  for (double x = 1e-3; x <= 50.0; x *= 1.17) {
    for (int order : {0, 1}) {
      const double ref = boost::math::cyl_bessel_k(order, x);
      CHECK(std::abs(bessel_k(order, x) / ref - 1.0) < 1e-10);
    }
  }
  for (int order : {0, 1}) CHECK(std::abs(bessel_k(order, 50.0) / boost::math::cyl_bessel_k(order, 50.0) - 1.0) < 1e-10);
}

TEST_CASE("leading asymptotic at large argument") {
  const double x = 40.0;
  CHECK(std::abs(bessel_k(0, x) / (std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x)) - 1.0) < 1e-2);
}

TEST_CASE("nonpositive arguments are rejected") {
  CHECK_THROWS(bessel_k(0, 0.0));
  CHECK_THROWS(bessel_k(1, -1.0));
  CHECK_THROWS(bessel_k(2, 1.0));
  CHECK_THROWS(z_alpha(0.0));
}

TEST_CASE("z_alpha large-alpha expansion") {
  const double a = 1e4;
  const double lead = std::numbers::sqrt2 * std::numbers::pi;
  CHECK(z_alpha(a) - std::numbers::pi - lead / std::sqrt(a) == doctest::Approx(1.5680389461e-4).epsilon(1e-6));
  CHECK(z_alpha(100.0) - std::numbers::pi - lead / 10.0 == doctest::Approx(0.0154480196873).epsilon(1e-8));
}

TEST_CASE("z_alpha strictly decreasing") {
  double prev = z_alpha(0.1);
  for (double a = 0.2; a <= 100.0; a += 0.1) {
    const double z = z_alpha(a);
    CHECK(z < prev);
    prev = z;
  }
}

TEST_CASE("planar hitting ratios") {
  CHECK(planar_hit_probability(1.5, 0.5) == doctest::Approx(0.507822214646).epsilon(1e-10));
  CHECK(planar_hit_probability(1.5, 1.0) == doctest::Approx(0.41064508402).epsilon(1e-10));
  CHECK(planar_hit_probability(1.5, 2.0) == doctest::Approx(0.30501644687).epsilon(1e-10));
  CHECK(planar_hit_probability(2.0, 0.5) == doctest::Approx(0.270516061313).epsilon(1e-10));
  CHECK(planar_hit_probability(2.0, 1.0) == doctest::Approx(0.17726596183).epsilon(1e-10));
  CHECK(planar_hit_probability(2.0, 2.0) == doctest::Approx(0.0979831119659).epsilon(1e-10));
  CHECK(planar_hit_probability(3.0, 0.5) == doctest::Approx(0.0825118478429).epsilon(1e-10));
  CHECK(planar_hit_probability(3.0, 1.0) == doctest::Approx(0.0356013211689).epsilon(1e-10));
  CHECK(planar_hit_probability(3.0, 2.0) == doctest::Approx(0.0109223990543).epsilon(1e-10));
  CHECK(planar_hit_probability(0.5, 1.0) == 1.0);
}

TEST_CASE("critical planar alpha") {
  const auto a = critical_alpha_planar(0.2);
  REQUIRE(a.has_value());
  CHECK(*a == doctest::Approx(7.22737199424936).epsilon(1e-9));
  CHECK(0.2 * z_alpha(*a) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_FALSE(critical_alpha_planar(1.0 / std::numbers::pi).has_value());
  CHECK_FALSE(critical_alpha_planar(0.5).has_value());
}
