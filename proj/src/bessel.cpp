// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/bessel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epidiff {
namespace {

constexpr double kAsymptoticFrom = 30.0;

// exp(x) K_nu(x) = int_0^inf exp(-x (cosh s - 1)) cosh(nu s) ds. The
// integrand is below exp(-60) past s_max, where x (cosh s - 1) = 60.
double scaled_by_quadrature(int order, double x) {
  const double upper = std::acosh(1.0 + 60.0 / x);
  auto integrand = [x, order](double s) {
    const double e = std::exp(-x * (std::cosh(s) - 1.0));
    return order == 0 ? e : e * std::cosh(s);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, upper, 30, 1e-14);
}

// Hankel expansion sqrt(pi / 2x) sum_k a_k(nu) / x^k, summed until the terms
// stop shrinking.
double scaled_by_asymptotic(int order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * x)) * sum;
}

}  // namespace

double bessel_k_scaled(int order, double x) {
  if (order != 0 && order != 1) throw std::invalid_argument("bessel_k: order must be 0 or 1");
  if (!(x > 0.0)) throw std::domain_error("bessel_k: argument must be positive");
  return x < kAsymptoticFrom ? scaled_by_quadrature(order, x) : scaled_by_asymptotic(order, x);
}

double bessel_k(int order, double x) { return std::exp(-x) * bessel_k_scaled(order, x); }

double z_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("z_alpha: alpha must be positive");
  const double s = std::sqrt(2.0 * alpha);
  const double pi = std::numbers::pi;
  return pi + (2.0 * pi / s) * bessel_k_scaled(1, s) / bessel_k_scaled(0, s);
}

double planar_hit_probability(double distance, double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("planar_hit_probability: alpha must be positive");
  if (distance <= 1.0) return 1.0;
  const double s = std::sqrt(2.0 * alpha);
  return std::exp(-(distance - 1.0) * s) * bessel_k_scaled(0, distance * s) / bessel_k_scaled(0, s);
}

std::optional<double> critical_alpha_planar(double lambda) {
  if (!(lambda > 0.0) || lambda * std::numbers::pi >= 1.0) return std::nullopt;
  // lambda z_alpha decreases from +inf to lambda pi < 1.
  double lo = 1e-12;
  double hi = 1.0;
  while (lambda * z_alpha(hi) > 1.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lambda * z_alpha(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace epidiff
