// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/rng.hpp"
#include "epidiff/types.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace epidiff {

/// Uniform hash grid over a fixed point set. Cells are hashed, so unrelated
/// cells may share a bucket; queries always confirm by exact geometry.
class SpatialGrid {
 public:
  SpatialGrid(const PointCloud& points, double cell_size);
  /// Only the listed columns are indexed.
  SpatialGrid(const PointCloud& points, double cell_size, const std::vector<Index>& subset);

  double cell_size() const { return cell_; }

  /// Calls visit(j) for every indexed point j with |p_j - center| <= radius.
  template <typename Visit>
  void for_each_within(const Point& center, double radius, Visit&& visit) const {
    Point lo = center.array() - radius;
    Point hi = center.array() + radius;
    for_each_in_box(lo, hi, [&](Index j) {
      if (within_closed_ball(center, points_->col(j), radius)) visit(j);
    });
  }

  /// Calls visit(j) for every indexed point inside the closed box [lo, hi].
  template <typename Visit>
  void for_each_in_box(const Point& lo, const Point& hi, Visit&& visit) const {
    const int d = static_cast<int>(points_->rows());
    Coord first(d), last(d);
    double cells = 1.0;
    for (int k = 0; k < d; ++k) {
      first[k] = cell_of(lo(k));
      last[k] = cell_of(hi(k));
      cells *= static_cast<double>(last[k] - first[k] + 1);
    }
    auto inside = [&](Index j) {
      const auto p = points_->col(j);
      return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
    };
    if (cells > static_cast<double>(indexed_.size())) {
      for (Index j : indexed_)
        if (inside(j)) visit(j);
      return;
    }
    Coord c = first;
    while (true) {
      if (auto it = buckets_.find(hash(c)); it != buckets_.end()) {
        for (Index j : it->second) {
          if (!inside(j)) continue;
          // Skip points that reached this bucket through a hash collision.
          bool home = true;
          for (int k = 0; k < d && home; ++k) home = cell_of((*points_)(k, j)) == c[k];
          if (home) visit(j);
        }
      }
      int k = 0;
      while (k < d && c[k] == last[k]) {
        c[k] = first[k];
        ++k;
      }
      if (k == d) break;
      ++c[k];
    }
  }

 private:
  using Coord = std::vector<std::int64_t>;
  std::int64_t cell_of(double x) const { return static_cast<std::int64_t>(std::floor(x / cell_)); }
  static std::uint64_t hash(const Coord& c) {
    std::uint64_t h = 0x2545f4914f6cdd1dull;
    for (auto v : c) h = mix64(h ^ static_cast<std::uint64_t>(v));
    return h;
  }
  void insert(Index j);

  const PointCloud* points_;
  double cell_;
  std::vector<Index> indexed_;
  std::unordered_map<std::uint64_t, std::vector<Index>> buckets_;
};

class UnionFind {
 public:
  explicit UnionFind(Index n);
  Index find(Index i);
  /// Returns true if the two sets were distinct.
  bool unite(Index a, Index b);
  Index size() const { return static_cast<Index>(parent_.size()); }

 private:
  std::vector<Index> parent_;
  std::vector<Index> rank_;
};

/// Gilbert graph: i ~ j iff |X_j - X_i| <= radius.
class DiskGraph {
 public:
  DiskGraph(const PointCloud& points, double radius);

  Index component(Index i) { return components_.find(i); }
  bool connected(Index a, Index b) { return components_.find(a) == components_.find(b); }
  /// Sorted members of i's component.
  std::vector<Index> cluster_of(Index i);

 private:
  const PointCloud* points_;
  double radius_;
  UnionFind components_;
};

/// Sorted indices of the component containing column 0.
std::vector<Index> origin_cluster(const PointCloud& points, double radius);

/// Susceptible points reachable from `source` through chains of
/// susceptibles with consecutive gaps <= radius. The source itself is not
/// included; an isolated source gives an empty set.
std::vector<Index> instant_closure(const PointCloud& points, Index source, const std::vector<bool>& susceptible,
                                   double radius);

/// True if the origin's cluster has a point within `radius` of the boundary
/// of [-half_width, half_width]^d.
bool origin_crosses(const PointCloud& points, double radius, double half_width);

struct CrossingEstimate {
  double lambda = 0.0;
  double half_width = 0.0;
  double probability = 0.0;
  double std_error = 0.0;
  Index replicates = 0;
};

struct PercolationOptions {
  double radius = 1.0;
  std::uint64_t seed = 0;
  int threads = 0;
};

/// Frequency of origin_crosses over fresh rate-lambda clouds.
CrossingEstimate crossing_probability(double lambda, int dim, double half_width, Index replicates,
                                      const PercolationOptions& options);

/// Crossing frequencies at increasing intensities on superposed clouds: the
/// cloud at lambdas[k] is the cloud at lambdas[k-1] plus an independent
/// rate-(lambdas[k] - lambdas[k-1]) layer, so crossing is monotone per replicate.
/// `per_replicate`, if given, receives the indicators [replicate][k].
std::vector<CrossingEstimate> coupled_crossing_probability(const std::vector<double>& lambdas, int dim,
                                                           double half_width, Index replicates,
                                                           const PercolationOptions& options,
                                                           std::vector<std::vector<bool>>* per_replicate = nullptr);

/// Intensity at which the crossing probability equals `level`, by bisection
/// on [lo, hi]. A finite-box reference value only.
double critical_intensity_estimate(int dim, double half_width, Index replicates, const PercolationOptions& options,
                                   double level = 0.5, double lo = 0.2, double hi = 4.0, int iterations = 14);

}  // namespace epidiff
