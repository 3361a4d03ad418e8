// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/bounds.hpp"
#include "epidiff/config.hpp"
#include "epidiff/engines.hpp"
#include "epidiff/percolation.hpp"
#include "epidiff/sausage.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace epidiff {

/// Column-named rows; the common form behind every CSV and JSON artifact.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

/// Numbers are written in shortest round-trip form, infinities as "inf".
void write_csv(const Table& table, std::ostream& out);
/// An array of objects keyed by column name.
nlohmann::json table_to_json(const Table& table);
/// Writes CSV or JSON ("csv" or "json") to `out`.
void write_table(const Table& table, const std::string& format, std::ostream& out);

/// Replicate outcomes of one parameter cell.
struct CellResult {
  Index replicates = 0;
  Index survived = 0;
  Index censored = 0;
  std::vector<Index> sizes;

  double survival_frequency() const;
  /// Binomial standard error of the survival frequency.
  double std_error() const;
  double mean_size() const;
  double censored_fraction() const;
  /// More than 20% of replicates were censored.
  bool unreliable() const;
};

/// Runs replicates 0..n-1 of `cfg` (replicate-level parallelism; the result
/// does not depend on the thread count).
CellResult run_cell(const ScenarioConfig& cfg, Index replicates, int threads = 0);

/// Seed used for every cell of a sweep row: derived from the master seed and
/// the row parameters (model, lambda, rho, d) but not alpha, so cells along a
/// row are coupled through shared particles, paths and lifetimes.
std::uint64_t row_seed(const ScenarioConfig& cfg, std::uint64_t master_seed);

struct SweepPlan {
  ScenarioConfig base;
  std::vector<double> lambdas;
  std::vector<double> alphas;
  Index replicates = 200;
  int threads = 0;
  /// Survival-frequency levels at which alpha_c is located.
  std::vector<double> levels{0.02, 0.05, 0.1};
  int bisection_steps = 6;
};

std::vector<std::string> validate_plan(const SweepPlan& plan);

struct SweepRow {
  Model model;
  double lambda;
  double alpha;
  double rho;
  CellResult cell;
  std::uint64_t seed;
};

/// Bracket [lo, hi] on alpha where the survival frequency falls to `level`;
/// lo = 0 or hi = inf when the grid does not bracket the crossing.
struct CriticalAlpha {
  Model model;
  double lambda;
  double rho;
  double level;
  double alpha_c;
  double lo;
  double hi;
  Index replicates;
  std::uint64_t seed;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<CriticalAlpha> critical;
};

SweepResult run_sweep(const SweepPlan& plan);

/// model, lambda, alpha, rho, survived_freq, stderr, mean_I, censored_frac,
/// replicates, seed, flag.
Table sweep_table(const std::vector<SweepRow>& rows);
/// model, lambda, rho, q, alpha_c, lo, hi, replicates, seed.
Table critical_table(const std::vector<CriticalAlpha>& rows);
/// t, estimate, stderr, replicates, diffusion, d.
Table sausage_table(const std::vector<VolumeEstimate>& profile, const std::string& diffusion, int dim);
/// lambda, L, crossing, SE.
Table percolation_table(const std::vector<CrossingEstimate>& rows);

/// One row of a closed-form versus Monte Carlo bound comparison.
struct BoundComparison {
  Model model;
  double lambda;
  double alpha;
  double rho;
  int dim;
  double closed_form;
  BoundReport mc;
};

/// model, lambda, alpha, rho, d, closed_form, mc, mc_stderr, certified.
Table bounds_table(const std::vector<BoundComparison>& rows);

/// Verdict, size and generation sizes of one run, with the parameters that
/// produced it. Contains nothing run-dependent beyond the outcome itself.
nlohmann::json outcome_summary(const ScenarioConfig& cfg, std::uint64_t replicate, const EpidemicOutcome& outcome);

/// Same infected set and same parent of every infected particle.
bool same_infection_tree(const EpidemicOutcome& a, const EpidemicOutcome& b);
/// Every particle infected in `inner` is infected in `outer`.
bool infected_subset(const EpidemicOutcome& inner, const EpidemicOutcome& outer);

struct ValidationCheck {
  std::string suite;
  std::string name;
  double observed;
  double expected;
  double tolerance;
  bool passed;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

/// coupling, bounds, sausage, percolation, all.
const std::vector<std::string>& validation_suites();

/// Runs a named suite with fixed seeds; throws std::invalid_argument for an
/// unknown name.
ValidationReport run_validation(const std::string& suite, int threads = 0);

}  // namespace epidiff
