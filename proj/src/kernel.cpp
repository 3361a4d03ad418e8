// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epidiff {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

double unit_sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double table_value(const RadialTable& t, double r) {
  if (t.radii.empty() || r > t.radii.back()) return 0.0;
  if (r <= t.radii.front()) return t.values.front();
  auto it = std::upper_bound(t.radii.begin(), t.radii.end(), r);
  const auto hi = static_cast<std::size_t>(it - t.radii.begin());
  const auto lo = hi - 1;
  const double w = (r - t.radii[lo]) / (t.radii[hi] - t.radii[lo]);
  return (1.0 - w) * t.values[lo] + w * t.values[hi];
}

constexpr double kGaussianTruncation = 1e-12;

}  // namespace

double ball_volume(int dim, double radius) {
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0) * std::pow(radius, dim);
}

double kernel_mass(const KernelSpec& kernel, int dim) {
  return std::visit(
      Overloaded{
          [&](const UnitBallIndicator&) { return ball_volume(dim, 1.0); },
          [&](const BallIndicator& b) { return ball_volume(dim, b.radius); },
          [&](const GaussianRadial& g) { return std::pow(2.0 * std::numbers::pi * g.scale * g.scale, 0.5 * dim); },
          [&](const RadialTable& t) {
            double total = 0.0;
            // The core [0, radii[0]] is constant.
            if (!t.radii.empty() && t.radii.front() > 0.0) total += t.values.front() * ball_volume(dim, t.radii.front());
            for (std::size_t s = 0; s + 1 < t.radii.size(); ++s) {
              const double a = t.radii[s];
              const double b = t.radii[s + 1];
              const double half = 0.5 * (b - a);
              const double mid = 0.5 * (a + b);
              double seg = 0.0;
              for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
                const double r = mid + half * kGlNodes[q];
                const double w = (r - a) / (b - a);
                const double v = (1.0 - w) * t.values[s] + w * t.values[s + 1];
                seg += kGlWeights[q] * v * std::pow(r, dim - 1);
              }
              total += unit_sphere_area(dim) * half * seg;
            }
            return total;
          },
      },
      kernel.variant);
}

double kernel_eval_sq(const KernelSpec& kernel, double squared_norm) {
  return std::visit(Overloaded{
                        [&](const UnitBallIndicator&) { return squared_norm <= 1.0 ? 1.0 : 0.0; },
                        [&](const BallIndicator& b) { return squared_norm <= b.radius * b.radius ? 1.0 : 0.0; },
                        [&](const GaussianRadial& g) { return std::exp(-0.5 * squared_norm / (g.scale * g.scale)); },
                        [&](const RadialTable& t) { return table_value(t, std::sqrt(squared_norm)); },
                    },
                    kernel.variant);
}

double kernel_max(const KernelSpec& kernel) {
  return std::visit(Overloaded{
                        [](const RadialTable& t) { return t.mu_max; },
                        [](const auto&) { return 1.0; },
                    },
                    kernel.variant);
}

double kernel_support_radius(const KernelSpec& kernel) {
  return std::visit(Overloaded{
                        [](const UnitBallIndicator&) { return 1.0; },
                        [](const BallIndicator& b) { return b.radius; },
                        [](const GaussianRadial& g) { return g.scale * std::sqrt(-2.0 * std::log(kGaussianTruncation)); },
                        [](const RadialTable& t) { return t.radii.empty() ? 0.0 : t.radii.back(); },
                    },
                    kernel.variant);
}

bool is_ball_indicator(const KernelSpec& kernel) {
  return std::holds_alternative<UnitBallIndicator>(kernel.variant) ||
         std::holds_alternative<BallIndicator>(kernel.variant);
}

double indicator_radius(const KernelSpec& kernel) {
  if (std::holds_alternative<UnitBallIndicator>(kernel.variant)) return 1.0;
  if (const auto* b = std::get_if<BallIndicator>(&kernel.variant)) return b->radius;
  throw std::invalid_argument("kernel is not a ball indicator");
}

std::string kernel_name(const KernelSpec& kernel) {
  return std::visit(Overloaded{
                        [](const UnitBallIndicator&) { return std::string("unit_ball"); },
                        [](const BallIndicator&) { return std::string("ball"); },
                        [](const GaussianRadial&) { return std::string("gaussian"); },
                        [](const RadialTable&) { return std::string("radial_table"); },
                    },
                    kernel.variant);
}

std::vector<std::string> validate_kernel(const KernelSpec& kernel, int dim, const std::string& path) {
  std::vector<std::string> errors;
  std::visit(Overloaded{
                 [](const UnitBallIndicator&) {},
                 [&](const BallIndicator& b) {
                   if (!(b.radius > 0.0) || !std::isfinite(b.radius))
                     errors.push_back(path + ".radius: ball radius must be positive and finite");
                 },
                 [&](const GaussianRadial& g) {
                   if (!(g.scale > 0.0) || !std::isfinite(g.scale))
                     errors.push_back(path + ".scale: gaussian scale must be positive and finite");
                 },
                 [&](const RadialTable& t) {
                   if (t.radii.size() < 2 || t.radii.size() != t.values.size()) {
                     errors.push_back(path + ".radii: radial table needs >= 2 radii matching values");
                     return;
                   }
                   if (t.radii.front() < 0.0) errors.push_back(path + ".radii: radii must be nonnegative");
                   for (std::size_t i = 0; i + 1 < t.radii.size(); ++i) {
                     if (!(t.radii[i + 1] > t.radii[i])) {
                       errors.push_back(path + ".radii: radii must be strictly increasing");
                       break;
                     }
                   }
                   for (std::size_t i = 0; i < t.values.size(); ++i) {
                     if (t.values[i] < 0.0) {
                       errors.push_back(path + ".values: kernel values must be >= 0");
                       break;
                     }
                   }
                   if (t.radially_decreasing) {
                     for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
                       if (t.values[i + 1] > t.values[i]) {
                         errors.push_back(path + ".values: radially-decreasing table must be non-increasing");
                         break;
                       }
                     }
                   }
                   const double vmax = *std::max_element(t.values.begin(), t.values.end());
                   if (!(t.mu_max >= vmax) || !std::isfinite(t.mu_max))
                     errors.push_back(path + ".mu_max: mu_max must be finite and dominate all table values");
                 },
             },
             kernel.variant);
  if (errors.empty()) {
    const double mass = kernel_mass(kernel, dim);
    if (!(mass > 0.0) || !std::isfinite(mass)) errors.push_back(path + ": kernel mass must lie in (0, inf)");
  }
  return errors;
}

KernelSpec dilate_kernel(const KernelSpec& kernel, double factor) {
  return std::visit(Overloaded{
                        [&](const UnitBallIndicator&) { return KernelSpec::ball(factor); },
                        [&](const BallIndicator& b) { return KernelSpec::ball(b.radius * factor); },
                        [&](const GaussianRadial& g) { return KernelSpec::gaussian(g.scale * factor); },
                        [&](const RadialTable& t) {
                          RadialTable out = t;
                          for (double& r : out.radii) r *= factor;
                          return KernelSpec{out};
                        },
                    },
                    kernel.variant);
}

}  // namespace epidiff
