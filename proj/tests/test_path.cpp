// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiff/path.hpp"

#include <cmath>
#include <sstream>

using namespace epidiff;

namespace {
DiscretizedPath brownian(std::uint64_t particle, double dt, int levels, double horizon = 10.0) {
  return DiscretizedPath(DiffusionSpec::brownian(), 2, dt, levels, horizon, 5, {0, particle, Purpose::Path, 0});
}
}  // namespace

TEST_CASE("paths start at the origin and are reproducible") {
  auto a = brownian(1, 0.01, 0);
  auto b = brownian(1, 0.01, 0);
  a.ensure_time(1.0);
  b.ensure_time(0.3);
  b.ensure_time(1.0);
  REQUIRE(a.steps() == b.steps());
  CHECK(a.point(0).isZero());
  for (Index k = 0; k <= a.steps(); ++k) CHECK(a.point(k) == b.point(k));
}

TEST_CASE("refined paths agree with the coarse path on the coarse grid") {
  auto coarse = brownian(2, 0.04, 0);
  auto fine = brownian(2, 0.04, 2);
  coarse.ensure_time(2.0);
  fine.ensure_time(2.0);
  CHECK(fine.dt() == doctest::Approx(0.01));
  for (Index k = 0; k <= coarse.steps(); ++k) {
    CHECK((fine.point(4 * k) - coarse.point(k)).norm() < 1e-12);
  }
  // One more level: the midpoints of the level-2 path are its level-3 refinement.
  auto finer = brownian(2, 0.04, 3);
  finer.ensure_time(2.0);
  for (Index k = 0; k + 1 <= fine.steps(); k += 7) {
    CHECK((finer.point(2 * k + 1) - fine.midpoint(k)).norm() < 1e-12);
    CHECK((finer.point(2 * k) - fine.point(k)).norm() < 1e-12);
  }
}

TEST_CASE("brownian increments have unit variance rate") {
  double sum_sq = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    auto p = brownian(100 + i, 0.05, 1, 2.0);
    p.ensure_time(1.0);
    sum_sq += p.point(static_cast<Index>(std::lround(1.0 / p.dt()))).squaredNorm();
  }
  // E|W_1|^2 = d = 2
  CHECK(sum_sq / n == doctest::Approx(2.0).epsilon(0.08));
}

TEST_CASE("ou paths relax toward the origin") {
  Square a = -2.0 * Square::Identity(1, 1);
  double sum_sq = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    DiscretizedPath p(DiffusionSpec::ornstein_uhlenbeck(a), 1, 0.01, 0, 10.0, 9, {0, static_cast<std::uint64_t>(i)});
    p.ensure_time(5.0);
    sum_sq += p.point(p.steps()).squaredNorm();
  }
  // Stationary variance 1 / (2 * 2).
  CHECK(sum_sq / n == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("zero motion stays put") {
  DiscretizedPath p(DiffusionSpec::zero_motion(3), 3, 0.1, 1, 5.0, 1, {});
  p.ensure_time(5.0);
  CHECK(p.storage().leftCols(p.steps() + 1).isZero());
  CHECK(p.midpoint(3).isZero());
}

TEST_CASE("paths stop at the horizon") {
  auto p = brownian(3, 0.1, 0, 1.0);
  p.ensure_time(100.0);
  CHECK(p.horizon() == doctest::Approx(1.0));
}

TEST_CASE("chunk boxes enclose their points") {
  auto p = brownian(4, 0.01, 0);
  p.ensure_time(1.0);
  p.ensure_time(3.3);
  for (Index k = 0; k <= p.steps(); ++k) {
    const Index c = std::min(k / kPathChunk, p.chunk_count() - 1);
    CHECK((p.point(k).array() >= p.chunk_lo(c).array()).all());
    CHECK((p.point(k).array() <= p.chunk_hi(c).array()).all());
    if (k % kPathChunk == 0 && k > 0) {
      CHECK((p.point(k).array() >= p.chunk_lo(c - 1).array()).all());
      CHECK((p.point(k).array() <= p.chunk_hi(c - 1).array()).all());
    }
  }
}

TEST_CASE("difference path") {
  auto a = brownian(10, 0.02, 0);
  auto b = DiscretizedPath(DiffusionSpec::brownian(), 2, 0.02, 0, 10.0, 5, {0, 10, Purpose::Path, 1});
  DifferencePath diff(a, b);
  diff.ensure_time(1.0);
  a.ensure_time(1.0);
  b.ensure_time(1.0);
  for (Index k = 0; k <= diff.steps(); ++k) CHECK((diff.point(k) - (a.point(k) - b.point(k))).norm() < 1e-14);
  Point u(2);
  u << 1.0, 0.0;
  CHECK(diff.variance_rate(0, u) == doctest::Approx(2.0));
}

TEST_CASE("cursor streams the same positions") {
  auto p = brownian(12, 0.02, 2);
  p.ensure_time(2.0);
  PathCursor cursor(DiffusionSpec::brownian(), 2, 0.02, 2, 5, {0, 12, Purpose::Path, 0});
  for (Index k = 0; k <= p.steps(); k += 3) CHECK((cursor.advance_to(k) - p.point(k)).norm() < 1e-12);
}

TEST_CASE("csv dump") {
  auto p = brownian(1, 0.5, 0, 1.0);
  p.ensure_time(1.0);
  std::ostringstream out;
  write_path_csv(p, out);
  CHECK(out.str().rfind("t,x_1,x_2\n0,0,0\n", 0) == 0);
}
