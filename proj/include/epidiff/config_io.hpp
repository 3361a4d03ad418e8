// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/config.hpp"

#include <json.hpp>

#include <string>

namespace epidiff {

// Scenario files are JSON objects whose keys mirror ScenarioConfig:
//   lambda -> "lambda", rho -> "rho" ("inf" for infinite), alpha -> "alpha",
//   d -> "d", L -> "box_half_width".

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

ScenarioConfig load_config(const std::string& path);

/// Applies "key=value" overrides where key is a dotted path into the JSON
/// form, e.g. "numerics.dt=0.001" or "rho=inf".
ScenarioConfig apply_overrides(const ScenarioConfig& cfg, const std::vector<std::string>& overrides);

nlohmann::json rho_to_json(double rho);
double rho_from_json(const nlohmann::json& j);

}  // namespace epidiff
