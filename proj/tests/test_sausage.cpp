// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiff/bessel.hpp"
#include "epidiff/kernel.hpp"
#include "epidiff/sausage.hpp"

#include <cmath>
#include <numbers>

using namespace epidiff;

namespace {

Point vec2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

DiscretizedPath drift_path(const Point& velocity, double dt, double horizon = 10.0) {
  const int d = static_cast<int>(velocity.size());
  return DiscretizedPath(DiffusionSpec::affine(Square::Zero(d, d), velocity, Square::Zero(d, d)), d, dt, 0, horizon,
                         1, {});
}

DiscretizedPath brownian_path(std::uint64_t id, double dt, double horizon = 20.0) {
  return DiscretizedPath(DiffusionSpec::brownian(), 2, dt, 0, horizon, 77, {id, 0, Purpose::Path, 0});
}

}  // namespace

TEST_CASE("hitting time is zero for a target inside the ball") {
  auto p = brownian_path(0, 0.01);
  CHECK(first_hitting_time(p, vec2(0.5, 0.5), 1.0, 1.0) == 0.0);
  CHECK(first_hitting_time(p, vec2(1.0, 0.0), 1.0, 1.0) == 0.0);  // closed ball
}

TEST_CASE("hitting time along a straight drift") {
  auto p = drift_path(vec2(2.0, 0.0), 0.01);
  const auto t = first_hitting_time(p, vec2(5.0, 0.0), 1.0, 10.0);
  REQUIRE(t.has_value());
  CHECK(std::abs(*t - 2.0) <= 0.01);
  CHECK_FALSE(first_hitting_time(p, vec2(5.0, 0.0), 1.0, 1.5).has_value());
  CHECK_FALSE(first_hitting_time(p, vec2(0.0, 5.0), 1.0, 10.0).has_value());
}

TEST_CASE("occupation of a static path") {
  DiscretizedPath p(DiffusionSpec::zero_motion(2), 2, 0.01, 0, 10.0, 1, {});
  CHECK(occupation_time(p, vec2(0.3, 0.0), 1.0, 2.5) == doctest::Approx(2.5));
  CHECK(occupation_time(p, vec2(1.3, 0.0), 1.0, 2.5) == 0.0);
}

TEST_CASE("occupation along a transversal chord") {
  // Path x(t) = t e_1 crossing the unit ball around (3, 0.6): chord 2 sqrt(1 - 0.36) = 1.6.
  auto p = drift_path(vec2(1.0, 0.0), 0.01);
  const double chord = 2.0 * std::sqrt(1.0 - 0.36);
  CHECK(std::abs(occupation_time(p, vec2(3.0, 0.6), 1.0, 8.0) - chord) <= 0.02);
}

TEST_CASE("monotone in the radius on a fixed path") {
  for (std::uint64_t id = 0; id < 50; ++id) {
    auto p = brownian_path(id, 0.01, 5.0);
    const Point x = vec2(1.5, -0.7);
    double prev_time = kInf;
    double prev_occ = -1.0;
    for (double r : {0.5, 0.8, 1.0, 1.3, 2.0}) {
      const double t = first_hitting_time(p, x, r, 5.0).value_or(kInf);
      const double occ = occupation_time(p, x, r, 5.0);
      CHECK(t <= prev_time);
      CHECK(occ >= prev_occ - 1e-12);
      prev_time = t;
      prev_occ = occ;
    }
  }
}

TEST_CASE("sampled crossings are a coupling of the hit probability") {
  // The fraction of sampled hits over many bridge streams approaches the
  // conditional probability on one grid path.
  auto p = brownian_path(3, 0.05, 5.0);
  const Point x = vec2(1.6, 0.4);
  const double prob = hit_probability(p, x, 1.0, 2.0);
  int hits = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const Stream bridge(5, {0, static_cast<std::uint64_t>(i), Purpose::Bridge, 0});
    if (first_hitting_time(p, x, 1.0, 2.0, {true, &bridge})) ++hits;
  }
  const double freq = static_cast<double>(hits) / n;
  CHECK(std::abs(freq - prob) <= 4.0 * std::sqrt(prob * (1 - prob) / n) + 1e-12);
}

TEST_CASE("degenerate sausage has the ball volume") {
  SausageOptions opts;
  opts.dt = 1e-3;
  opts.samples_per_path = 256;
  // Small t: |hull + B| = pi + perimeter + area, E perimeter = sqrt(8 pi t).
  const double t = 1e-3;
  const auto est = sausage_volume_estimate(DiffusionSpec::brownian(), 2, t, 400, opts);
  const double small_t = std::numbers::pi + std::sqrt(8 * std::numbers::pi * t) + std::numbers::pi * t / 2;
  CHECK(std::abs(est.mean - small_t) < 3 * est.std_error + 0.02);
  const auto zero = sausage_volume_estimate(DiffusionSpec::zero_motion(2), 2, 5.0, 200, opts);
  CHECK(std::abs(zero.mean - std::numbers::pi) < 3 * zero.std_error);
  const auto diff_zero = difference_sausage_volume_estimate(DiffusionSpec::zero_motion(2), 2, 5.0, 200, opts);
  CHECK(std::abs(diff_zero.mean - std::numbers::pi) < 3 * diff_zero.std_error);
}

TEST_CASE("volume profile is non-decreasing on shared paths") {
  SausageOptions opts;
  opts.dt = 1e-2;
  const auto prof = sausage_volume_profile(DiffusionSpec::brownian(), 2, {0.1, 0.5, 1.0, 2.0, 4.0}, 100, opts);
  for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i].mean >= prof[i - 1].mean);
}

TEST_CASE("bounded motion stays within the dilated cap") {
  // zeta(t) = b (1 - e^{-t}) never leaves the ball of radius |b| = 2.
  Point b = vec2(1.2, 1.6);
  const auto spec = DiffusionSpec::affine(-Square::Identity(2, 2), b, Square::Zero(2, 2));
  SausageOptions opts;
  opts.dt = 1e-2;
  const auto est = sausage_volume_estimate(spec, 2, 5.0, 100, opts);
  CHECK(est.mean <= ball_volume(2, 3.0));
}

TEST_CASE("planar hitting probability against the Bessel ratio (coarse grid)") {
  SausageOptions opts;
  opts.dt = 1e-3;
  opts.seed = 3;
  const std::vector<Point> targets{vec2(1.5, 0.0), vec2(0.0, 2.0)};
  const std::vector<double> alphas{1.0, 2.0};
  const auto est = exp_horizon_hit_probability(DiffusionSpec::brownian(), 2, targets, alphas, 2000, opts);
  const double dist[] = {1.5, 2.0};
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t a = 0; a < 2; ++a) {
      const double exact = planar_hit_probability(dist[x], alphas[a]);
      CHECK(std::abs(est[x][a].mean - exact) < 3.0 * est[x][a].std_error + 0.01);
    }
  }
}

TEST_CASE("growth envelope") {
  SausageOptions opts;
  opts.dt = 2e-2;
  opts.samples_per_path = 32;
  const std::vector<double> grid{1, 2, 4, 8, 12, 16, 20};
  const auto prof = sausage_volume_profile(DiffusionSpec::brownian(), 2, grid, 60, opts);
  const auto fit = fit_growth_envelope(prof);
  CHECK(fit.sigma < 0.5);
  for (const auto& e : prof) CHECK(fit.envelope(e.time) >= e.mean + 2 * e.std_error - 1e-9);

  const auto zero = fit_growth_envelope(DiffusionSpec::zero_motion(2), 2, grid, 20, opts);
  CHECK(zero.sigma == doctest::Approx(0.0));

  const auto ou = fit_growth_envelope(DiffusionSpec::ornstein_uhlenbeck(-Square::Identity(2, 2)), 2, grid, 60, opts);
  CHECK(std::isfinite(ou.gamma));
  CHECK(std::isfinite(ou.sigma));
}
