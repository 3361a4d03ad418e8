// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/percolation.hpp"

#include "epidiff/parallel.hpp"
#include "epidiff/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace epidiff {

SpatialGrid::SpatialGrid(const PointCloud& points, double cell_size) : points_(&points), cell_(cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("grid cell size must be positive");
  for (Index j = 0; j < points.cols(); ++j) insert(j);
}

SpatialGrid::SpatialGrid(const PointCloud& points, double cell_size, const std::vector<Index>& subset)
    : points_(&points), cell_(cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("grid cell size must be positive");
  for (Index j : subset) insert(j);
}

void SpatialGrid::insert(Index j) {
  const int d = static_cast<int>(points_->rows());
  Coord c(d);
  for (int k = 0; k < d; ++k) c[k] = cell_of((*points_)(k, j));
  buckets_[hash(c)].push_back(j);
  indexed_.push_back(j);
}

UnionFind::UnionFind(Index n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
  std::iota(parent_.begin(), parent_.end(), Index{0});
}

Index UnionFind::find(Index i) {
  auto& p = parent_;
  while (p[i] != i) {
    p[i] = p[p[i]];
    i = p[i];
  }
  return i;
}

bool UnionFind::unite(Index a, Index b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

DiskGraph::DiskGraph(const PointCloud& points, double radius)
    : points_(&points), radius_(radius), components_(points.cols()) {
  const SpatialGrid grid(points, radius);
  for (Index i = 0; i < points.cols(); ++i) {
    grid.for_each_within(points.col(i), radius, [&](Index j) {
      if (j > i) components_.unite(i, j);
    });
  }
}

std::vector<Index> DiskGraph::cluster_of(Index i) {
  const Index root = components_.find(i);
  std::vector<Index> out;
  for (Index j = 0; j < points_->cols(); ++j)
    if (components_.find(j) == root) out.push_back(j);
  return out;
}

std::vector<Index> origin_cluster(const PointCloud& points, double radius) {
  DiskGraph graph(points, radius);
  return graph.cluster_of(0);
}

std::vector<Index> instant_closure(const PointCloud& points, Index source, const std::vector<bool>& susceptible,
                                   double radius) {
  std::vector<Index> members{source};
  for (Index j = 0; j < points.cols(); ++j)
    if (j != source && susceptible[static_cast<std::size_t>(j)]) members.push_back(j);
  const SpatialGrid grid(points, radius, members);
  UnionFind sets(points.cols());
  for (Index i : members) {
    grid.for_each_within(points.col(i), radius, [&](Index j) {
      if (j > i) sets.unite(i, j);
    });
  }
  std::vector<Index> out;
  const Index root = sets.find(source);
  for (Index j : members)
    if (j != source && sets.find(j) == root) out.push_back(j);
  std::sort(out.begin(), out.end());
  return out;
}

bool origin_crosses(const PointCloud& points, double radius, double half_width) {
  for (Index j : origin_cluster(points, radius)) {
    if (points.col(j).cwiseAbs().maxCoeff() >= half_width - radius) return true;
  }
  return false;
}

namespace {

CrossingEstimate summarize(double lambda, double half_width, const std::vector<char>& hits) {
  const auto n = static_cast<double>(hits.size());
  const double p = static_cast<double>(std::count(hits.begin(), hits.end(), 1)) / n;
  return {lambda, half_width, p, std::sqrt(p * (1.0 - p) / std::max(n - 1.0, 1.0)), static_cast<Index>(hits.size())};
}

}  // namespace

CrossingEstimate crossing_probability(double lambda, int dim, double half_width, Index replicates,
                                      const PercolationOptions& options) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  std::vector<char> hits(static_cast<std::size_t>(replicates));
  parallel_for(replicates, options.threads, [&](Index r) {
    Stream stream(options.seed, {static_cast<std::uint64_t>(r), 0, Purpose::PointProcess, 0});
    const auto cloud = sample_poisson_cloud(lambda, half_width, dim, stream);
    hits[static_cast<std::size_t>(r)] = origin_crosses(cloud, options.radius, half_width) ? 1 : 0;
  });
  return summarize(lambda, half_width, hits);
}

std::vector<CrossingEstimate> coupled_crossing_probability(const std::vector<double>& lambdas, int dim,
                                                           double half_width, Index replicates,
                                                           const PercolationOptions& options,
                                                           std::vector<std::vector<bool>>* per_replicate) {
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0.0) || (k > 0 && lambdas[k] < lambdas[k - 1]))
      throw std::invalid_argument("intensities must be positive and non-decreasing");
  }
  const std::size_t m = lambdas.size();
  std::vector<std::vector<char>> hits(m, std::vector<char>(static_cast<std::size_t>(replicates)));
  parallel_for(replicates, options.threads, [&](Index r) {
    const auto rep = static_cast<std::uint64_t>(r);
    PointCloud cloud;
    for (std::size_t k = 0; k < m; ++k) {
      Stream layer(options.seed, {rep, 0, Purpose::PointProcess, static_cast<std::uint64_t>(k)});
      if (k == 0) cloud = sample_poisson_cloud(lambdas[0], half_width, dim, layer);
      else if (lambdas[k] > lambdas[k - 1]) append_poisson_points(cloud, lambdas[k] - lambdas[k - 1], half_width, layer);
      hits[k][static_cast<std::size_t>(r)] = origin_crosses(cloud, options.radius, half_width) ? 1 : 0;
    }
  });
  std::vector<CrossingEstimate> out;
  for (std::size_t k = 0; k < m; ++k) out.push_back(summarize(lambdas[k], half_width, hits[k]));
  if (per_replicate) {
    per_replicate->assign(static_cast<std::size_t>(replicates), std::vector<bool>(m));
    for (std::size_t r = 0; r < static_cast<std::size_t>(replicates); ++r)
      for (std::size_t k = 0; k < m; ++k) (*per_replicate)[r][k] = hits[k][r] != 0;
  }
  return out;
}

double critical_intensity_estimate(int dim, double half_width, Index replicates, const PercolationOptions& options,
                                   double level, double lo, double hi, int iterations) {
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double p = crossing_probability(mid, dim, half_width, replicates, options).probability;
    (p < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace epidiff
