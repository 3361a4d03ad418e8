// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/diffusion.hpp"
#include "epidiff/path.hpp"
#include "epidiff/rng.hpp"
#include "epidiff/types.hpp"

#include <optional>
#include <vector>

namespace epidiff {

// Geometry of the sausage zeta([0, t]) + B(0, radius) along a sampled path.
// The ball is closed: a target at distance exactly `radius` is covered.

struct HitOptions {
  /// Detect crossings between grid points through the Brownian-bridge
  /// boundary-crossing probability of the distance process. This is the
  /// half-space formula applied to a sphere, so it carries a small curvature
  /// bias of its own.
  bool bridge_correction = true;
  /// Uniforms for the sampled crossings, read at the step index. Without a
  /// stream only grid hits count.
  const Stream* bridge_uniforms = nullptr;
};

/// First time in [0, horizon] at which |target - zeta(t)| <= radius. A grid
/// hit is located by one bisection with a bridge midpoint and linear
/// interpolation; a bridge-detected crossing is placed mid-step.
std::optional<double> first_hitting_time(SampledPath& path, const Point& target, double radius, double horizon,
                                         const HitOptions& options = {});

/// P(target is covered by time `horizon` | grid path). Grid hits count as
/// certain and bridge crossings enter through their probability, so this is
/// the conditional expectation of the sampled hit indicator.
double hit_probability(SampledPath& path, const Point& target, double radius, double horizon,
                       bool bridge_correction = true);

/// hit_probability at each of the increasing times in `times`.
std::vector<double> hit_probability_profile(SampledPath& path, const Point& target, double radius,
                                            const std::vector<double>& times, bool bridge_correction = true);

/// Lebesgue measure of {s in [0, t] : |target - zeta(s)| <= radius} for the
/// piecewise-linear path.
double occupation_time(SampledPath& path, const Point& target, double radius, double t);

struct SausageOptions {
  double dt = 1e-3;
  int refine_levels = 0;
  double radius = 1.0;
  /// Hit-or-miss points per path.
  int samples_per_path = 64;
  bool bridge_correction = true;
  double max_time = 1e3;
  std::uint64_t seed = 0;
  /// Replicate r uses streams keyed by replicate_offset + r.
  std::uint64_t replicate_offset = 0;
  int threads = 0;
};

struct VolumeEstimate {
  double time = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  Index replicates = 0;
};

/// Monte Carlo E|sausage_t| at each time, on one shared set of paths and
/// sample points so the profile is non-decreasing in t.
std::vector<VolumeEstimate> sausage_volume_profile(const DiffusionSpec& diffusion, int dim,
                                                   const std::vector<double>& times, Index replicates,
                                                   const SausageOptions& options);
VolumeEstimate sausage_volume_estimate(const DiffusionSpec& diffusion, int dim, double t, Index replicates,
                                       const SausageOptions& options);

/// Same estimator on zeta - zeta' with zeta' an independent copy.
std::vector<VolumeEstimate> difference_sausage_volume_profile(const DiffusionSpec& diffusion, int dim,
                                                              const std::vector<double>& times, Index replicates,
                                                              const SausageOptions& options);
VolumeEstimate difference_sausage_volume_estimate(const DiffusionSpec& diffusion, int dim, double t,
                                                  Index replicates, const SausageOptions& options);

/// Hit-or-miss volume of the sausage of one path at each of `times`.
std::vector<double> sausage_volume_on_path(SampledPath& path, const std::vector<double>& times, double radius,
                                           int samples, const Stream& sampling, bool bridge_correction);

struct HitEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  Index replicates = 0;
};

/// P(target in sausage_T) with T ~ Exp(alpha) independent of the path, for
/// every (target, alpha) pair on shared paths. T = E / alpha with one
/// standard exponential E per path. Result is indexed [target][alpha].
std::vector<std::vector<HitEstimate>> exp_horizon_hit_probability(const DiffusionSpec& diffusion, int dim,
                                                                  const std::vector<Point>& targets,
                                                                  const std::vector<double>& alphas,
                                                                  Index replicates, const SausageOptions& options);

/// E|sausage_t| <= gamma * exp(sigma * t).
struct GrowthFit {
  double gamma = 0.0;
  double sigma = 0.0;

  double envelope(double t) const;
};

/// Least-squares fit of log(estimate) against t, with sigma clamped at 0 and
/// gamma raised until the envelope covers every estimate + 2 SE.
GrowthFit fit_growth_envelope(const std::vector<VolumeEstimate>& profile);
GrowthFit fit_growth_envelope(const DiffusionSpec& diffusion, int dim, const std::vector<double>& times,
                              Index replicates, const SausageOptions& options);

}  // namespace epidiff
