// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

namespace epidiff {

/// Modified Bessel function of the second kind K_order(x), order 0 or 1, x > 0.
/// Adaptive Gauss-Kronrod quadrature of
///   K_nu(x) = int_0^inf exp(-x cosh s) cosh(nu s) ds
/// for moderate x and the Hankel asymptotic series for large x.
double bessel_k(int order, double x);

/// exp(x) K_order(x); stays finite where K_order underflows.
double bessel_k_scaled(int order, double x);

/// pi + (2 pi / sqrt(2 alpha)) K_1(sqrt(2 alpha)) / K_0(sqrt(2 alpha)): the mean
/// volume of the unit Wiener sausage in the plane integrated against an
/// Exp(alpha) lifetime.
double z_alpha(double alpha);

/// Probability that planar Brownian motion started at distance `distance`
/// from the unit ball hits it before an independent Exp(alpha) time:
/// K_0(distance sqrt(2 alpha)) / K_0(sqrt(2 alpha)) for distance >= 1.
double planar_hit_probability(double distance, double alpha);

/// The removal rate at which lambda * z_alpha(alpha) == 1, by bisection.
/// Empty when lambda * pi >= 1 (no such rate exists).
std::optional<double> critical_alpha_planar(double lambda);

}  // namespace epidiff
