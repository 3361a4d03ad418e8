// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiff/config.hpp"
#include "epidiff/config_io.hpp"

#include <algorithm>

using namespace epidiff;

namespace {
bool has_error(const std::vector<std::string>& errs, const std::string& needle) {
  return std::any_of(errs.begin(), errs.end(), [&](const auto& e) { return e.find(needle) != std::string::npos; });
}
}  // namespace

TEST_CASE("default scenario is valid") { CHECK(validate_config(ScenarioConfig{}).empty()); }

TEST_CASE("invalid scenarios list every violation") {
  ScenarioConfig cfg;
  cfg.lambda = -1.0;
  cfg.alpha = -0.5;
  cfg.numerics.dt = 0.0;
  const auto errs = validate_config(cfg);
  CHECK(has_error(errs, "lambda: intensity must be positive"));
  CHECK(has_error(errs, "alpha:"));
  CHECK(has_error(errs, "numerics.dt:"));
  CHECK_THROWS_AS(checked(cfg), ConfigError);
}

TEST_CASE("infinite rho needs an indicator kernel") {
  ScenarioConfig cfg;
  cfg.kernel = KernelSpec::gaussian(1.0);
  CHECK(has_error(validate_config(cfg), "rho: infinite-rho requires compact indicator kernel"));
  cfg.rho = 3.0;
  CHECK(validate_config(cfg).empty());
}

TEST_CASE("json round trip") {
  ScenarioConfig cfg;
  cfg.model = Model::Diffusion;
  cfg.dim = 3;
  cfg.lambda = 0.7;
  cfg.rho = 2.5;
  cfg.alpha = 0.3;
  cfg.kernel = KernelSpec::table({0.0, 0.5, 1.0}, {1.0, 0.5, 0.0}, 1.0, true);
  Square a = Square::Identity(3, 3) * -0.5;
  cfg.diffusion = DiffusionSpec::ornstein_uhlenbeck(a);
  cfg.numerics.dt = 0.005;
  cfg.numerics.refine_levels = 2;
  cfg.proxy.n_max = 123;
  cfg.seed = 99;
  const auto j = config_to_json(cfg);
  const auto back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(back.rho == 2.5);
  CHECK(back.numerics.effective_dt() == doctest::Approx(0.005 / 4));

  ScenarioConfig inf;
  CHECK(config_to_json(inf).at("rho") == "inf");
  CHECK(config_from_json(config_to_json(inf)).rho == kInf);
}

TEST_CASE("overrides use dotted paths") {
  ScenarioConfig cfg;
  const auto out = apply_overrides(cfg, {"numerics.dt=0.001", "rho=4", "lambda=0.25"});
  CHECK(out.numerics.dt == 0.001);
  CHECK(out.rho == 4.0);
  CHECK(out.lambda == 0.25);
  CHECK(apply_overrides(out, {"rho=inf"}).rho == kInf);
}
