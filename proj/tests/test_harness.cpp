// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epidiff/harness.hpp"

#include <cmath>
#include <sstream>

using namespace epidiff;

namespace {

ScenarioConfig small_planar() {
  ScenarioConfig cfg;
  cfg.dim = 2;
  cfg.lambda = 0.5;
  cfg.alpha = 1.0;
  cfg.box_half_width = 6.0;
  cfg.numerics.dt = 0.02;
  cfg.seed = 11;
  return cfg;
}

std::string csv_of(const Table& t) {
  std::ostringstream os;
  write_csv(t, os);
  return os.str();
}

}  // namespace

TEST_CASE("csv writer formats numbers in shortest round-trip form") {
  Table t{{"a", "b", "c", "d"}, {{0.1, "inf", 3, true}, {1e-300, "x", std::uint64_t{18446744073709551615ull}, false}}};
  CHECK(csv_of(t) == "a,b,c,d\n0.1,inf,3,true\n1e-300,x,18446744073709551615,false\n");
  const auto j = table_to_json(t);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["a"] == 0.1);
  CHECK(j[1]["b"] == "x");
  std::ostringstream os;
  CHECK_THROWS(write_table(t, "xml", os));
  Table ragged{{"a"}, {{1, 2}}};
  CHECK_THROWS(write_csv(ragged, os));
}

TEST_CASE("cell statistics") {
  CellResult cell;
  cell.replicates = 10;
  cell.survived = 3;
  cell.censored = 3;
  cell.sizes = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(cell.survival_frequency() == doctest::Approx(0.3));
  CHECK(cell.std_error() == doctest::Approx(std::sqrt(0.3 * 0.7 / 10.0)));
  CHECK(cell.mean_size() == doctest::Approx(5.5));
  CHECK(cell.unreliable());
  cell.censored = 2;
  CHECK_FALSE(cell.unreliable());
}

TEST_CASE("cell results do not depend on the thread count") {
  const auto cfg = small_planar();
  const auto one = run_cell(cfg, 30, 1);
  const auto three = run_cell(cfg, 30, 3);
  CHECK(one.sizes == three.sizes);
  CHECK(one.survived == three.survived);
  CHECK(one.censored == three.censored);
}

TEST_CASE("row seeds ignore alpha and separate rows") {
  auto a = small_planar();
  auto b = a;
  b.alpha = 7.0;
  CHECK(row_seed(a, 5) == row_seed(b, 5));
  b.lambda = 0.6;
  CHECK(row_seed(a, 5) != row_seed(b, 5));
  CHECK(row_seed(a, 5) != row_seed(a, 6));
}

TEST_CASE("plan validation") {
  SweepPlan plan;
  plan.base = small_planar();
  CHECK_FALSE(validate_plan(plan).empty());
  plan.lambdas = {0.5};
  plan.alphas = {1.0};
  CHECK(validate_plan(plan).empty());
  plan.replicates = 0;
  CHECK_FALSE(validate_plan(plan).empty());
  plan.replicates = 10;
  plan.levels = {1.5};
  CHECK_FALSE(validate_plan(plan).empty());
  CHECK_THROWS_AS(run_sweep(plan), ConfigError);
}

TEST_CASE("sweep is deterministic and brackets alpha_c inside the grid") {
  SweepPlan plan;
  plan.base = small_planar();
  plan.base.stop_at_thresholds = true;
  plan.base.proxy.g_max = 4;
  plan.lambdas = {0.8};
  plan.alphas = {0.25, 64.0};
  plan.replicates = 40;
  plan.levels = {0.5};
  plan.bisection_steps = 4;
  plan.threads = 1;
  const auto a = run_sweep(plan);
  plan.threads = 3;
  const auto b = run_sweep(plan);
  CHECK(csv_of(sweep_table(a.rows)) == csv_of(sweep_table(b.rows)));
  CHECK(csv_of(critical_table(a.critical)) == csv_of(critical_table(b.critical)));
  REQUIRE(a.rows.size() == 2);
  REQUIRE(a.critical.size() == 1);
  const auto& c = a.critical.front();
  if (a.rows[0].cell.survival_frequency() > 0.5 && a.rows[1].cell.survival_frequency() <= 0.5) {
    CHECK(c.lo >= 0.25);
    CHECK(c.hi <= 64.0);
    CHECK(c.hi / c.lo == doctest::Approx(std::pow(256.0, 1.0 / 16.0)).epsilon(1e-9));
    CHECK(c.alpha_c == doctest::Approx(std::sqrt(c.lo * c.hi)));
  } else {
    CHECK(std::isnan(c.alpha_c));
  }
  const auto header = csv_of(sweep_table(a.rows)).substr(0, 90);
  CHECK(header.rfind("model,lambda,alpha,rho,survived_freq,stderr,mean_I,censored_frac,replicates,seed,flag\n", 0) ==
        0);
}

TEST_CASE("artifact schemas") {
  CHECK(csv_of(critical_table({})) == "model,lambda,rho,q,alpha_c,lo,hi,replicates,seed\n");
  CHECK(csv_of(sausage_table({{0.5, 7.0, 0.1, 10}}, "brownian", 2)) ==
        "t,estimate,stderr,replicates,diffusion,d\n0.5,7,0.1,10,brownian,2\n");
  CHECK(csv_of(percolation_table({{1.5, 8.0, 0.25, 0.01, 100}})) == "lambda,L,crossing,SE\n1.5,8,0.25,0.01\n");
  CHECK(csv_of(bounds_table({})) == "model,lambda,alpha,rho,d,closed_form,mc,mc_stderr,certified\n");
}

TEST_CASE("outcome summary is reproducible") {
  const auto cfg = small_planar();
  const auto a = outcome_summary(cfg, 3, run_scenario(cfg, 3)).dump();
  const auto b = outcome_summary(cfg, 3, run_scenario(cfg, 3)).dump();
  CHECK(a == b);
  CHECK(a.find("\"verdict\"") != std::string::npos);
}

TEST_CASE("tree comparison helpers") {
  auto cfg = small_planar();
  cfg.stop_at_thresholds = false;
  const auto a = run_delayed_percolation(cfg, 4).outcome;
  const auto b = run_delayed_chronological(cfg, 4);
  CHECK(same_infection_tree(a, b));
  CHECK(infected_subset(a, b));
  auto fast = cfg;
  fast.alpha = 50.0;
  const auto small = run_delayed_percolation(fast, 4).outcome;
  CHECK(infected_subset(small, a));
}

TEST_CASE("validation suites") {
  CHECK_THROWS_AS(run_validation("nope"), std::invalid_argument);
  const auto report = run_validation("percolation");
  CHECK(report.passed());
  CHECK(report.to_json()["passed"] == true);
  CHECK(report.to_json()["checks"].size() == report.checks.size());
}
