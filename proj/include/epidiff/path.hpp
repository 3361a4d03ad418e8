// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/diffusion.hpp"
#include "epidiff/rng.hpp"
#include "epidiff/types.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace epidiff {

/// Number of grid steps summarized by one bounding box in SampledPath.
inline constexpr Index kPathChunk = 32;

/// A lazily extended path sampled on a uniform time grid, zeta(0) = 0.
/// Keeps per-chunk bounding boxes so geometric queries can skip far chunks.
class SampledPath {
 public:
  /// Points are generated in blocks of `granularity` steps.
  SampledPath(int dim, double dt, double max_time, Index granularity = 1);
  virtual ~SampledPath() = default;
  SampledPath(const SampledPath&) = default;
  SampledPath& operator=(const SampledPath&) = default;
  SampledPath(SampledPath&&) = default;
  SampledPath& operator=(SampledPath&&) = default;

  int dim() const { return dim_; }
  double dt() const { return dt_; }
  double max_time() const { return max_time_; }
  Index max_steps() const { return max_steps_; }

  /// Number of grid steps available (points 0..steps()).
  Index steps() const { return size_ - 1; }
  double horizon() const { return static_cast<double>(steps()) * dt_; }

  /// Extends to at least `steps` grid steps, capped at max_steps().
  void ensure_steps(Index steps);
  /// Extends so the grid covers [0, t] (capped at max_time()). Idempotent for t <= horizon.
  void ensure_time(double t);

  auto point(Index k) const { return points_.col(k); }
  const PointCloud& storage() const { return points_; }

  Index chunk_count() const { return (steps() + kPathChunk - 1) / kPathChunk; }
  auto chunk_lo(Index c) const { return lo_.col(c); }
  auto chunk_hi(Index c) const { return hi_.col(c); }

  /// Variance per unit time along the unit vector u during step k.
  virtual double variance_rate(Index k, const Point& u) const = 0;
  /// Largest per-coordinate variance rate seen on the generated grid.
  double max_variance_rate() const { return max_variance_rate_; }
  /// A bridge sample of the path at the midpoint of step k, consistent with
  /// one further level of grid refinement.
  virtual Point midpoint(Index k) = 0;
  /// Grid steps per step of the unrefined (coarse) grid.
  virtual Index coarse_stride() const { return 1; }

  /// Linear interpolation of the grid path at time t (t <= horizon()).
  Point interpolate(double t) const;

 protected:
  /// Writes points [from, to) into storage (capacity is guaranteed).
  virtual void generate(Index from, Index to) = 0;
  auto mutable_point(Index k) { return points_.col(k); }
  void note_variance_rate(double v) {
    if (v > max_variance_rate_) max_variance_rate_ = v;
  }

 private:
  void update_boxes(Index first_new_point);

  int dim_;
  double dt_;
  double max_time_;
  Index max_steps_;
  Index granularity_;
  Index size_ = 1;
  PointCloud points_;
  PointCloud lo_;
  PointCloud hi_;
  double max_variance_rate_ = 0.0;
};

/// Euler-Maruyama / exact-increment discretization of a diffusion started at
/// 0. The driving Wiener path is built from coarse increments at step dt and
/// `refine_levels` rounds of keyed Brownian-bridge midpoints, so the path at
/// refine level L+1 is an exact refinement of the path at level L.
class DiscretizedPath final : public SampledPath {
 public:
  DiscretizedPath(const DiffusionSpec& spec, int dim, double coarse_dt, int refine_levels, double max_time,
                  std::uint64_t master_seed, const StreamKey& key);

  const DiffusionSpec& spec() const { return *spec_; }
  int refine_levels() const { return levels_; }

  double variance_rate(Index k, const Point& u) const override;
  Point midpoint(Index k) override;
  Index coarse_stride() const override { return Index{1} << levels_; }

  /// Fine grid points of coarse interval `coarse` started from `start`;
  /// writes 2^L + 1 columns into `fine` (column 0 is `start`).
  void fill_coarse_interval(Index coarse, const Point& start, PointCloud& fine) const;

 protected:
  void generate(Index from, Index to) override;

 private:

  std::shared_ptr<const DiffusionSpec> spec_;
  bool exact_;
  int levels_;
  double coarse_dt_;
  std::uint64_t seed_;
  StreamKey key_;
  Stream coarse_noise_;
  std::vector<Stream> refine_noise_;  // index l - 1 for bridge level l
  PointCloud scratch_;
};

/// zeta - zeta' for two independent paths on the same grid.
class DifferencePath final : public SampledPath {
 public:
  DifferencePath(DiscretizedPath first, DiscretizedPath second);

  double variance_rate(Index k, const Point& u) const override;
  Point midpoint(Index k) override;
  Index coarse_stride() const override { return first_.coarse_stride(); }

 protected:
  void generate(Index from, Index to) override;

 private:
  DiscretizedPath first_;
  DiscretizedPath second_;
};

/// Streams the same values as DiscretizedPath without keeping history; used
/// by the time-stepped diffusion engine where every particle moves.
class PathCursor {
 public:
  PathCursor(const DiffusionSpec& spec, int dim, double coarse_dt, int refine_levels, std::uint64_t master_seed,
             const StreamKey& key);

  /// Position at grid step k (k must not decrease between calls).
  const Point& advance_to(Index k);
  Index step() const { return step_; }
  const Point& position() const { return current_; }

 private:
  DiscretizedPath path_;
  Index fine_per_coarse_;
  Index interval_ = 0;
  PointCloud buffer_;
  Index step_ = 0;
  Point current_;
};

/// Debug dump: one row per grid point, columns t, x_1..x_d.
void write_path_csv(const SampledPath& path, std::ostream& out);

}  // namespace epidiff
