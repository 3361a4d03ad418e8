// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/diffusion.hpp"

#include <cmath>

namespace epidiff {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

DiffusionSpec DiffusionSpec::affine(Square drift_matrix, Point drift_offset, Square sigma) {
  GeneralSDE sde;
  sde.affine = GeneralSDE::Affine{drift_matrix, drift_offset, sigma};
  sde.drift = [A = drift_matrix, b = drift_offset](const Point& x) -> Point { return A * x + b; };
  sde.sigma = [S = sigma](const Point&) -> Square { return S; };
  return {std::move(sde)};
}

DiffusionSpec DiffusionSpec::zero_motion(int dim) {
  return affine(Square::Zero(dim, dim), Point::Zero(dim), Square::Zero(dim, dim));
}

bool has_exact_increments(const DiffusionSpec& spec) {
  return std::holds_alternative<StandardBrownian>(spec.variant) ||
         std::holds_alternative<BrownianWithDrift>(spec.variant);
}

Point drift_at(const DiffusionSpec& spec, const Point& x) {
  return std::visit(Overloaded{
                        [&](const StandardBrownian&) -> Point { return Point::Zero(x.size()); },
                        [&](const BrownianWithDrift& b) -> Point { return b.drift; },
                        [&](const OrnsteinUhlenbeck& ou) -> Point { return ou.matrix * x; },
                        [&](const GeneralSDE& g) -> Point { return g.drift(x); },
                    },
                    spec.variant);
}

Square sigma_at(const DiffusionSpec& spec, const Point& x, int dim) {
  if (const auto* g = std::get_if<GeneralSDE>(&spec.variant)) return g->sigma(x);
  return Square::Identity(dim, dim);
}

double variance_rate_along(const DiffusionSpec& spec, const Point& x, const Point& u) {
  if (const auto* g = std::get_if<GeneralSDE>(&spec.variant)) {
    const Square s = g->sigma(x);
    return (s.transpose() * u).squaredNorm();
  }
  return u.squaredNorm();
}

double max_variance_rate(const DiffusionSpec& spec, const Point& x) {
  if (const auto* g = std::get_if<GeneralSDE>(&spec.variant)) {
    const Square s = g->sigma(x);
    return (s * s.transpose()).diagonal().maxCoeff();
  }
  return 1.0;
}

std::string diffusion_name(const DiffusionSpec& spec) {
  return std::visit(Overloaded{
                        [](const StandardBrownian&) { return std::string("brownian"); },
                        [](const BrownianWithDrift&) { return std::string("brownian_drift"); },
                        [](const OrnsteinUhlenbeck&) { return std::string("ou"); },
                        [](const GeneralSDE& g) { return std::string(g.affine ? "affine" : "general"); },
                    },
                    spec.variant);
}

std::vector<std::string> validate_diffusion(const DiffusionSpec& spec, int dim, const std::string& path) {
  std::vector<std::string> errors;
  std::visit(Overloaded{
                 [](const StandardBrownian&) {},
                 [&](const BrownianWithDrift& b) {
                   if (b.drift.size() != dim) errors.push_back(path + ".drift: drift vector must have length d");
                   else if (!b.drift.allFinite()) errors.push_back(path + ".drift: drift must be finite");
                 },
                 [&](const OrnsteinUhlenbeck& ou) {
                   if (ou.matrix.rows() != dim || ou.matrix.cols() != dim)
                     errors.push_back(path + ".matrix: OU matrix must be d x d");
                   else if (!ou.matrix.allFinite()) errors.push_back(path + ".matrix: OU matrix must be finite");
                 },
                 [&](const GeneralSDE& g) {
                   if (!g.drift || !g.sigma) {
                     errors.push_back(path + ": general SDE needs drift and sigma evaluators");
                     return;
                   }
                   if (g.affine) {
                     const auto& a = *g.affine;
                     if (a.drift_matrix.rows() != dim || a.drift_matrix.cols() != dim)
                       errors.push_back(path + ".drift_matrix: must be d x d");
                     if (a.drift_offset.size() != dim) errors.push_back(path + ".drift_offset: must have length d");
                     if (a.sigma.rows() != dim || a.sigma.cols() != dim) errors.push_back(path + ".sigma: must be d x d");
                   }
                 },
             },
             spec.variant);
  return errors;
}

}  // namespace epidiff
