// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/config.hpp"

#include <cmath>

namespace epidiff {
namespace {

std::string join(const std::vector<std::string>& errors) {
  std::string out = "invalid scenario:";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors) : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.dim < 1 || cfg.dim > kMaxDim) errors.push_back("d: dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) errors.push_back("lambda: intensity must be positive");
  if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) errors.push_back("alpha: removal rate must be >= 0");
  if (!(cfg.rho > 0.0)) errors.push_back("rho: infectivity must be positive or inf");
  if (!(cfg.box_half_width > 0.0) || !std::isfinite(cfg.box_half_width))
    errors.push_back("box_half_width: box half-width must be positive");
  if (!(cfg.numerics.dt > 0.0) || !std::isfinite(cfg.numerics.dt)) errors.push_back("numerics.dt: time step must be positive");
  if (cfg.numerics.refine_levels < 0 || cfg.numerics.refine_levels > 20)
    errors.push_back("numerics.refine_levels: must be in [0, 20]");
  if (!(cfg.numerics.max_time > 0.0)) errors.push_back("numerics.max_time: horizon must be positive");
  if (cfg.proxy.n_max < 1) errors.push_back("proxy.n_max: threshold must be >= 1");
  if (cfg.dim >= 1 && cfg.dim <= kMaxDim) {
    for (auto& e : validate_kernel(cfg.kernel, cfg.dim)) errors.push_back(std::move(e));
    for (auto& e : validate_diffusion(cfg.diffusion, cfg.dim)) errors.push_back(std::move(e));
  }
  if (cfg.infinite_rho() && !is_ball_indicator(cfg.kernel))
    errors.push_back("rho: infinite-rho requires compact indicator kernel");
  return errors;
}

const ScenarioConfig& checked(const ScenarioConfig& cfg) {
  auto errors = validate_config(cfg);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

double interaction_radius(const ScenarioConfig& cfg) { return kernel_support_radius(cfg.kernel); }

std::string model_name(Model model) { return model == Model::Delayed ? "delayed" : "diffusion"; }

}  // namespace epidiff
