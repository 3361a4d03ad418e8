// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace epidiff {

/// mu = 1 on the closed unit ball.
struct UnitBallIndicator {};

/// mu = 1 on the closed ball of the given radius.
struct BallIndicator {
  double radius = 1.0;
};

/// mu(x) = exp(-|x|^2 / (2 scale^2)).
struct GaussianRadial {
  double scale = 1.0;
};

/// Piecewise-linear radial profile; zero beyond the last radius.
/// mu_max is caller-supplied and must dominate every tabulated value.
struct RadialTable {
  std::vector<double> radii;
  std::vector<double> values;
  double mu_max = 1.0;
  bool radially_decreasing = false;
};

/// Infection kernel mu : R^d -> [0, inf).
struct KernelSpec {
  std::variant<UnitBallIndicator, BallIndicator, GaussianRadial, RadialTable> variant;

  static KernelSpec unit_ball() { return {UnitBallIndicator{}}; }
  static KernelSpec ball(double radius) { return {BallIndicator{radius}}; }
  static KernelSpec gaussian(double scale) { return {GaussianRadial{scale}}; }
  static KernelSpec table(std::vector<double> radii, std::vector<double> values, double mu_max,
                          bool radially_decreasing = false) {
    return {RadialTable{std::move(radii), std::move(values), mu_max, radially_decreasing}};
  }
};

/// Volume of the closed r-ball in R^d.
double ball_volume(int dim, double radius);

/// Integral of mu over R^d. Exact for indicators and Gaussians, Gauss-Legendre
/// quadrature (exact for piecewise-polynomial integrands) for radial tables.
double kernel_mass(const KernelSpec& kernel, int dim);

/// mu as a function of the squared distance |x|^2.
double kernel_eval_sq(const KernelSpec& kernel, double squared_norm);

template <typename Derived>
double kernel_eval(const KernelSpec& kernel, const Eigen::MatrixBase<Derived>& x) {
  return kernel_eval_sq(kernel, x.squaredNorm());
}

/// Upper bound on mu used by the thinning sampler.
double kernel_max(const KernelSpec& kernel);

/// Radius outside which mu vanishes. For the Gaussian this is the truncation
/// radius where mu / mu_max drops below 1e-12.
double kernel_support_radius(const KernelSpec& kernel);

/// True for the compact indicators (unit ball or ball).
bool is_ball_indicator(const KernelSpec& kernel);

/// Radius of a ball indicator; throws for any other kernel.
double indicator_radius(const KernelSpec& kernel);

std::string kernel_name(const KernelSpec& kernel);

/// Invariant violations, each prefixed with its field path.
std::vector<std::string> validate_kernel(const KernelSpec& kernel, int dim, const std::string& path = "kernel");

/// Kernel dilated in space: mu_r(x) = mu(x / r).
KernelSpec dilate_kernel(const KernelSpec& kernel, double factor);

}  // namespace epidiff
