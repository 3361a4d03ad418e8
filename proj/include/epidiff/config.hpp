// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/diffusion.hpp"
#include "epidiff/kernel.hpp"
#include "epidiff/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace epidiff {

enum class Model { Delayed, Diffusion };
enum class DelayedEngine { Percolation, Chronological };

struct NumericsConfig {
  /// Coarse time step. The effective step is dt / 2^refine_levels.
  double dt = 1e-2;
  /// Number of Brownian-bridge halvings applied to the coarse driving noise.
  int refine_levels = 0;
  /// Detect ball crossings between grid points via the bridge crossing probability.
  bool bridge_correction = true;
  /// Paths are never extended past this time; longer lifetimes censor the run.
  double max_time = 1e3;

  double effective_dt() const { return dt / static_cast<double>(1 << refine_levels); }
};

struct ProxyThresholds {
  Index n_max = 500;
  /// Generation cap; a negative value disables it.
  int g_max = 12;
};

/// Full parameter vector for one experiment. rho == kInf encodes the
/// infinite-infectivity regime.
struct ScenarioConfig {
  Model model = Model::Delayed;
  DelayedEngine engine = DelayedEngine::Percolation;
  int dim = 2;
  double lambda = 1.0;
  double rho = kInf;
  double alpha = 1.0;
  KernelSpec kernel = KernelSpec::unit_ball();
  DiffusionSpec diffusion = DiffusionSpec::brownian();
  double box_half_width = 10.0;
  NumericsConfig numerics;
  ProxyThresholds proxy;
  std::uint64_t seed = 0;
  /// When false the engine runs to extinction inside the box.
  bool stop_at_thresholds = true;
  bool record_events = false;

  bool infinite_rho() const { return rho == kInf; }
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Every violated invariant, reported with its field path. Empty iff valid.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

/// Returns cfg unchanged when valid; throws ConfigError otherwise.
const ScenarioConfig& checked(const ScenarioConfig& cfg);

/// Radius within which a source can infect: the kernel support radius.
double interaction_radius(const ScenarioConfig& cfg);

std::string model_name(Model model);

}  // namespace epidiff
