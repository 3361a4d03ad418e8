// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiff/kernel.hpp"

#include <cmath>
#include <numbers>

using namespace epidiff;

TEST_CASE("ball volumes") {
  CHECK(ball_volume(1, 1.0) == doctest::Approx(2.0));
  CHECK(ball_volume(2, 1.0) == doctest::Approx(std::numbers::pi));
  CHECK(ball_volume(3, 2.0) == doctest::Approx(4.0 / 3.0 * std::numbers::pi * 8.0));
  CHECK(ball_volume(4, 1.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0));
}

TEST_CASE("indicator kernels are closed balls") {
  const auto unit = KernelSpec::unit_ball();
  CHECK(kernel_eval_sq(unit, 1.0) == 1.0);
  CHECK(kernel_eval_sq(unit, 1.0 + 1e-12) == 0.0);
  const auto ball = KernelSpec::ball(2.0);
  CHECK(kernel_eval_sq(ball, 4.0) == 1.0);
  CHECK(kernel_eval_sq(ball, 4.01) == 0.0);
  CHECK(is_ball_indicator(unit));
  CHECK(indicator_radius(ball) == 2.0);
  CHECK_THROWS(indicator_radius(KernelSpec::gaussian(1.0)));
}

TEST_CASE("kernel masses") {
  CHECK(kernel_mass(KernelSpec::unit_ball(), 2) == doctest::Approx(std::numbers::pi));
  // Gaussian: (2 pi s^2)^{d/2}.
  CHECK(kernel_mass(KernelSpec::gaussian(0.5), 2) == doctest::Approx(2.0 * std::numbers::pi * 0.25));
  CHECK(kernel_mass(KernelSpec::gaussian(1.0), 3) == doctest::Approx(std::pow(2.0 * std::numbers::pi, 1.5)));
  // Cone 1 - r on [0, 1] in d = 2: 2 pi * (1/2 - 1/3) = pi / 3.
  const auto cone = KernelSpec::table({0.0, 1.0}, {1.0, 0.0}, 1.0, true);
  CHECK(kernel_mass(cone, 2) == doctest::Approx(std::numbers::pi / 3.0));
  CHECK(kernel_eval_sq(cone, 0.25) == doctest::Approx(0.5));
  CHECK(kernel_eval_sq(cone, 1.5) == 0.0);
}

TEST_CASE("dilation scales support and mass") {
  const auto g = KernelSpec::gaussian(1.0);
  const auto g2 = dilate_kernel(g, 2.0);
  CHECK(kernel_mass(g2, 2) == doctest::Approx(4.0 * kernel_mass(g, 2)));
  CHECK(kernel_support_radius(g2) == doctest::Approx(2.0 * kernel_support_radius(g)));
  CHECK(indicator_radius(dilate_kernel(KernelSpec::unit_ball(), 3.0)) == 3.0);
  const auto cone = KernelSpec::table({0.0, 1.0}, {1.0, 0.0}, 1.0, true);
  CHECK(kernel_mass(dilate_kernel(cone, 2.0), 3) == doctest::Approx(8.0 * kernel_mass(cone, 3)));
}

TEST_CASE("kernel validation reports field paths") {
  CHECK(validate_kernel(KernelSpec::unit_ball(), 2).empty());
  auto errs = validate_kernel(KernelSpec::ball(-1.0), 2);
  REQUIRE(!errs.empty());
  CHECK(errs[0].rfind("kernel.radius", 0) == 0);
  CHECK(!validate_kernel(KernelSpec::gaussian(0.0), 2).empty());
  CHECK(!validate_kernel(KernelSpec::table({0.0, 1.0}, {2.0, 0.0}, 1.0), 2).empty());
}
