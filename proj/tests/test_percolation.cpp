// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiff/percolation.hpp"
#include "epidiff/sampling.hpp"

#include <algorithm>
#include <deque>
#include <set>

using namespace epidiff;

namespace {

// Brute-force component of `source` by BFS over all pairs, restricted to
// allowed vertices.
std::vector<Index> bfs_component(const PointCloud& pts, Index source, double r, const std::vector<bool>& allowed) {
  std::vector<bool> seen(static_cast<std::size_t>(pts.cols()), false);
  std::deque<Index> q{source};
  seen[static_cast<std::size_t>(source)] = true;
  std::vector<Index> out{source};
  while (!q.empty()) {
    const Index i = q.front();
    q.pop_front();
    for (Index j = 0; j < pts.cols(); ++j) {
      if (seen[static_cast<std::size_t>(j)] || !allowed[static_cast<std::size_t>(j)]) continue;
      if ((pts.col(j) - pts.col(i)).norm() <= r) {
        seen[static_cast<std::size_t>(j)] = true;
        out.push_back(j);
        q.push_back(j);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PointCloud random_cloud(std::uint64_t rep, double lambda, double half_width, int dim) {
  Stream s(31, {rep, 0, Purpose::PointProcess, 0});
  return sample_poisson_cloud(lambda, half_width, dim, s);
}

}  // namespace

TEST_CASE("isolated origin and a short chain") {
  PointCloud pts(2, 4);
  pts << 0.0, 0.9, 1.8, 5.0,  //
      0.0, 0.0, 0.0, 5.0;
  CHECK(origin_cluster(pts, 1.0) == std::vector<Index>{0, 1, 2});
  PointCloud lonely(2, 2);
  lonely << 0.0, 3.0, 0.0, 0.0;
  CHECK(origin_cluster(lonely, 1.0) == std::vector<Index>{0});
}

TEST_CASE("closed adjacency at exactly the radius") {
  PointCloud pts(1, 2);
  pts << 0.0, 1.0;
  CHECK(origin_cluster(pts, 1.0).size() == 2);
}

TEST_CASE("union-find components equal brute-force BFS components") {
  for (std::uint64_t rep = 0; rep < 40; ++rep) {
    const int dim = 1 + static_cast<int>(rep % 3);
    const auto pts = random_cloud(rep, dim == 1 ? 2.0 : 1.0, dim == 3 ? 3.0 : 8.0, dim);
    REQUIRE(pts.cols() <= 1000);
    DiskGraph graph(pts, 1.0);
    const std::vector<bool> all(static_cast<std::size_t>(pts.cols()), true);
    for (Index i = 0; i < pts.cols(); i += 7) CHECK(graph.cluster_of(i) == bfs_component(pts, i, 1.0, all));
  }
}

TEST_CASE("instant closure equals the brute-force susceptible component") {
  for (std::uint64_t rep = 0; rep < 1000; ++rep) {
    const auto pts = random_cloud(rep, 1.2, 4.0, 2);
    std::vector<bool> susceptible(static_cast<std::size_t>(pts.cols()));
    Stream coin(32, {rep, 0, Purpose::Sampling, 0});
    for (auto&& s : susceptible) s = coin.uniform() < 0.7;
    susceptible[0] = false;
    auto allowed = susceptible;
    allowed[0] = true;
    auto expected = bfs_component(pts, 0, 1.0, allowed);
    expected.erase(std::find(expected.begin(), expected.end(), Index{0}));
    REQUIRE(instant_closure(pts, 0, susceptible, 1.0) == expected);
  }
}

TEST_CASE("instant closure with everyone susceptible is the origin cluster") {
  const auto pts = random_cloud(5, 1.5, 6.0, 2);
  std::vector<bool> susceptible(static_cast<std::size_t>(pts.cols()), true);
  auto closure = instant_closure(pts, 0, susceptible, 1.0);
  closure.insert(closure.begin(), 0);
  CHECK(closure == origin_cluster(pts, 1.0));
}

TEST_CASE("grid queries match brute force") {
  const auto pts = random_cloud(9, 2.0, 5.0, 2);
  const SpatialGrid grid(pts, 0.7);
  Point c(2);
  c << 0.3, -1.1;
  for (double r : {0.2, 1.0, 2.5, 20.0}) {
    std::set<Index> found, expected;
    grid.for_each_within(c, r, [&](Index j) { found.insert(j); });
    for (Index j = 0; j < pts.cols(); ++j)
      if ((pts.col(j) - c).norm() <= r) expected.insert(j);
    CHECK(found == expected);
  }
}

TEST_CASE("crossing probability limits") {
  PercolationOptions opts;
  opts.seed = 4;
  CHECK(crossing_probability(0.01, 2, 10.0, 200, opts).probability == 0.0);
  CHECK(crossing_probability(4.0, 2, 10.0, 100, opts).probability == 1.0);
}

TEST_CASE("supercritical clusters often reach the boundary") {
  PercolationOptions opts;
  opts.seed = 6;
  CHECK(crossing_probability(2.0, 2, 30.0, 100, opts).probability > 0.5);
}

TEST_CASE("superposition coupling makes crossing monotone per replicate") {
  PercolationOptions opts;
  opts.seed = 8;
  std::vector<std::vector<bool>> per;
  const std::vector<double> lambdas{0.8, 1.1, 1.4, 1.7, 2.0};
  const auto est = coupled_crossing_probability(lambdas, 2, 8.0, 300, opts, &per);
  for (const auto& row : per)
    for (std::size_t k = 1; k < row.size(); ++k) CHECK((!row[k - 1] || row[k]));
  for (std::size_t k = 1; k < est.size(); ++k) CHECK(est[k].probability >= est[k - 1].probability);
}

TEST_CASE("critical intensity bisection lands between the limits") {
  PercolationOptions opts;
  opts.seed = 12;
  const double lc = critical_intensity_estimate(2, 10.0, 200, opts);
  CHECK(lc > 0.8);
  CHECK(lc < 2.5);
}
