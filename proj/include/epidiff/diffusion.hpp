// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace epidiff {

/// d zeta = dW.
struct StandardBrownian {};

/// d zeta = v dt + dW.
struct BrownianWithDrift {
  Point drift;
};

/// d zeta = A zeta dt + dW.
struct OrnsteinUhlenbeck {
  Square matrix;
};

/// d zeta = a(zeta) dt + sigma(zeta) dW with time-independent coefficients.
/// Coefficients are assumed locally Lipschitz; that is not checked.
struct GeneralSDE {
  std::function<Point(const Point&)> drift;
  std::function<Square(const Point&)> sigma;
  /// Set when the SDE is affine, a(x) = A x + b with constant sigma, so that
  /// it can be written back to a scenario file.
  struct Affine {
    Square drift_matrix;
    Point drift_offset;
    Square sigma;
  };
  std::optional<Affine> affine;
};

struct DiffusionSpec {
  std::variant<StandardBrownian, BrownianWithDrift, OrnsteinUhlenbeck, GeneralSDE> variant;

  static DiffusionSpec brownian() { return {StandardBrownian{}}; }
  static DiffusionSpec brownian_with_drift(Point drift) { return {BrownianWithDrift{std::move(drift)}}; }
  static DiffusionSpec ornstein_uhlenbeck(Square matrix) { return {OrnsteinUhlenbeck{std::move(matrix)}}; }
  static DiffusionSpec affine(Square drift_matrix, Point drift_offset, Square sigma);
  /// a = 0, sigma = 0: particles never move.
  static DiffusionSpec zero_motion(int dim);
};

/// Brownian with or without constant drift: increments are exact Gaussians.
bool has_exact_increments(const DiffusionSpec& spec);

Point drift_at(const DiffusionSpec& spec, const Point& x);
Square sigma_at(const DiffusionSpec& spec, const Point& x, int dim);

/// Variance per unit time of the motion projected on the unit vector u at x,
/// |sigma(x)^T u|^2.
double variance_rate_along(const DiffusionSpec& spec, const Point& x, const Point& u);

/// Largest per-coordinate variance rate at x (max diagonal entry of sigma sigma^T).
double max_variance_rate(const DiffusionSpec& spec, const Point& x);

std::string diffusion_name(const DiffusionSpec& spec);

std::vector<std::string> validate_diffusion(const DiffusionSpec& spec, int dim,
                                            const std::string& path = "diffusion");

}  // namespace epidiff
