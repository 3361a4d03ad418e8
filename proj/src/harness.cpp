// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/harness.hpp"

#include "epidiff/bessel.hpp"
#include "epidiff/config_io.hpp"
#include "epidiff/parallel.hpp"
#include "epidiff/rng.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

namespace epidiff {
namespace {

using nlohmann::json;

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string format_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return std::string(buf, res.ptr);
  }
  if (v.is_null()) return "";
  return v.dump();
}

std::uint64_t fold(std::uint64_t h, double x) { return mix64(h ^ std::bit_cast<std::uint64_t>(x)); }

std::set<Index> infected_set(const EpidemicOutcome& o) { return {o.infected.begin(), o.infected.end()}; }

ValidationCheck check(std::string suite, std::string name, double observed, double expected, double tolerance) {
  const bool passed = std::abs(observed - expected) <= tolerance;
  return {std::move(suite), std::move(name), observed, expected, tolerance, passed};
}

// observed <= expected + tolerance.
ValidationCheck check_at_most(std::string suite, std::string name, double observed, double expected,
                              double tolerance) {
  const bool passed = observed <= expected + tolerance;
  return {std::move(suite), std::move(name), observed, expected, tolerance, passed};
}

json config_summary(const ScenarioConfig& cfg) {
  return {{"model", model_name(cfg.model)},
          {"engine", cfg.model == Model::Diffusion                   ? "diffusion"
                     : cfg.engine == DelayedEngine::Chronological ? "chronological"
                                                                  : "percolation"},
          {"d", cfg.dim},
          {"lambda", cfg.lambda},
          {"rho", rho_to_json(cfg.rho)},
          {"alpha", cfg.alpha},
          {"L", cfg.box_half_width},
          {"kernel", kernel_name(cfg.kernel)},
          {"diffusion", diffusion_name(cfg.diffusion)},
          {"dt", cfg.numerics.effective_dt()},
          {"seed", cfg.seed}};
}

std::string fmt(double x) { return format_cell(json(x)); }

ScenarioConfig planar_delayed(double lambda, double rho, double alpha, double half_width, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.dim = 2;
  cfg.lambda = lambda;
  cfg.rho = rho;
  cfg.alpha = alpha;
  cfg.box_half_width = half_width;
  cfg.seed = seed;
  return cfg;
}

void coupling_suite(int threads, std::vector<ValidationCheck>& out) {
  for (double rho : {kInf, 2.0}) {
    const auto cfg = planar_delayed(0.5, rho, 1.0, 12.0, 101);
    const Index reps = rho == kInf ? 1000 : 200;
    std::vector<char> mismatch(static_cast<std::size_t>(reps));
    parallel_for(reps, threads, [&](Index r) {
      const auto a = run_delayed_percolation(cfg, static_cast<std::uint64_t>(r)).outcome;
      const auto b = run_delayed_chronological(cfg, static_cast<std::uint64_t>(r));
      mismatch[static_cast<std::size_t>(r)] = !same_infection_tree(a, b);
    });
    const double failures = static_cast<double>(std::count(mismatch.begin(), mismatch.end(), 1));
    out.push_back(check("coupling", "engine equality, rho=" + fmt(rho) + ", " + std::to_string(reps) + " replicates",
                        failures, 0.0, 0.0));
  }
  // Inclusion holds for complete epidemics, so runs are not cut at the proxy
  // thresholds or at the boundary.
  auto slow = planar_delayed(0.5, kInf, 1.0, 10.0, 102);
  slow.stop_at_thresholds = false;
  auto fast = slow;
  fast.alpha = 2.0;
  auto weak = planar_delayed(0.5, 1.0, 1.0, 10.0, 103);
  weak.stop_at_thresholds = false;
  auto strong = weak;
  strong.rho = 4.0;
  const Index reps = 200;
  std::vector<char> alpha_bad(static_cast<std::size_t>(reps)), rho_bad(static_cast<std::size_t>(reps));
  parallel_for(reps, threads, [&](Index r) {
    const auto rep = static_cast<std::uint64_t>(r);
    alpha_bad[static_cast<std::size_t>(r)] =
        !infected_subset(run_delayed_percolation(fast, rep).outcome, run_delayed_percolation(slow, rep).outcome);
    rho_bad[static_cast<std::size_t>(r)] =
        !infected_subset(run_delayed_percolation(weak, rep).outcome, run_delayed_percolation(strong, rep).outcome);
  });
  out.push_back(check("coupling", "alpha monotone coupling violations", std::count(alpha_bad.begin(), alpha_bad.end(), 1),
                      0.0, 0.0));
  out.push_back(
      check("coupling", "rho monotone coupling violations", std::count(rho_bad.begin(), rho_bad.end(), 1), 0.0, 0.0));
}

void bounds_suite(int threads, std::vector<ValidationCheck>& out) {
  SausageOptions o;
  o.dt = 1e-3;
  o.samples_per_path = 64;
  o.seed = 201;
  o.threads = threads;
  for (double alpha : {1.0, 4.0, 16.0}) {
    const auto mc = r_infinity_mc(Model::Delayed, DiffusionSpec::brownian(), 2, 1.0, alpha, 20000, o);
    for (double lambda : {0.1, 0.2, 0.3}) {
      const auto exact = r_infinity_closed_form_2d(lambda, alpha);
      out.push_back(check("bounds", "closed form vs Monte Carlo, lambda=" + fmt(lambda) + " alpha=" + fmt(alpha),
                          lambda * mc.value, exact.value, 3.0 * lambda * mc.std_error));
    }
  }
  o.dt = 1e-2;
  o.samples_per_path = 32;
  const auto still = r_rho_mc(Model::Delayed, DiffusionSpec::zero_motion(2), 2, 1.0, 2.0, KernelSpec::unit_ball(), 1.0,
                              20000, o);
  out.push_back(check("bounds", "static finite-rate oracle", still.value, std::numbers::pi * 2.0 / 3.0,
                      3.0 * still.std_error));
  const auto moving =
      r_rho_mc(Model::Delayed, DiffusionSpec::brownian(), 2, 1.0, 1.0, KernelSpec::unit_ball(), 2.0, 2000, o);
  out.push_back(check_at_most("bounds", "finite-rate value below crude bound", moving.value,
                              crude_bound_delayed(1.0, 1.0, KernelSpec::unit_ball(), 2, 2.0).value,
                              3.0 * moving.std_error));
}

void sausage_suite(int threads, std::vector<ValidationCheck>& out) {
  SausageOptions o;
  o.dt = 1e-3;
  o.seed = 301;
  o.threads = threads;
  std::vector<Point> targets;
  const std::vector<double> distances{1.5, 2.0, 3.0};
  for (double r : distances) {
    Point x(2);
    x << r, 0.0;
    targets.push_back(x);
  }
  const std::vector<double> alphas{0.5, 1.0, 2.0};
  const auto grid = exp_horizon_hit_probability(DiffusionSpec::brownian(), 2, targets, alphas, 4000, o);
  for (std::size_t i = 0; i < distances.size(); ++i)
    for (std::size_t j = 0; j < alphas.size(); ++j)
      out.push_back(check("sausage", "hitting probability, |x|=" + fmt(distances[i]) + " alpha=" + fmt(alphas[j]),
                          grid[i][j].mean, planar_hit_probability(distances[i], alphas[j]),
                          3.0 * grid[i][j].std_error));

  o.dt = 1e-3;
  o.samples_per_path = 64;
  const auto difference = difference_sausage_volume_estimate(DiffusionSpec::brownian(), 2, 1.0, 2000, o);
  auto shifted = o;
  shifted.replicate_offset = 1u << 20;
  const auto doubled = sausage_volume_estimate(DiffusionSpec::brownian(), 2, 2.0, 2000, shifted);
  out.push_back(check("sausage", "difference sausage vs doubled time, t=1", difference.mean, doubled.mean,
                      3.0 * std::hypot(difference.std_error, doubled.std_error)));

  const double t = 0.01;
  const auto small = sausage_volume_estimate(DiffusionSpec::brownian(), 2, t, 2000, o);
  const double pi = std::numbers::pi;
  out.push_back(check("sausage", "small-time expansion, t=0.01", small.mean,
                      pi + std::sqrt(8.0 * pi * t) + pi * t / 2.0, 3.0 * small.std_error + 0.01));
}

void percolation_suite(int threads, std::vector<ValidationCheck>& out) {
  const Stream stream(401, {0, 0, Purpose::PointProcess, 0});
  Index disagreements = 0;
  for (Index trial = 0; trial < 50; ++trial) {
    const Index n = 200;
    PointCloud cloud(2, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < 2; ++j)
        cloud(j, i) = 10.0 * stream.uniform_at(static_cast<std::uint64_t>((trial * n + i) * 2 + j));
    std::vector<Index> brute{0};
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    seen[0] = true;
    for (std::size_t head = 0; head < brute.size(); ++head)
      for (Index j = 0; j < n; ++j)
        if (!seen[static_cast<std::size_t>(j)] && (cloud.col(brute[head]) - cloud.col(j)).norm() <= 1.0) {
          seen[static_cast<std::size_t>(j)] = true;
          brute.push_back(j);
        }
    std::sort(brute.begin(), brute.end());
    if (brute != origin_cluster(cloud, 1.0)) ++disagreements;
  }
  out.push_back(check("percolation", "grid cluster vs brute force, 50 clouds", static_cast<double>(disagreements), 0.0,
                      0.0));

  PercolationOptions opts;
  opts.seed = 402;
  opts.threads = threads;
  std::vector<std::vector<bool>> indicators;
  const auto est = coupled_crossing_probability({0.8, 1.2, 1.6, 2.4}, 2, 8.0, 400, opts, &indicators);
  Index violations = 0;
  for (const auto& row : indicators)
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k - 1] && !row[k]) ++violations;
  out.push_back(check("percolation", "coupled crossing monotone in lambda", static_cast<double>(violations), 0.0, 0.0));
  out.push_back(check_at_most("percolation", "crossing rare well below threshold", est.front().probability, 0.0,
                              0.1));
  out.push_back(check("percolation", "crossing likely well above threshold", est.back().probability, 1.0, 0.3));
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::logic_error("row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
    out << '\n';
  }
}

json table_to_json(const Table& table) {
  json out = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
    out.push_back(std::move(obj));
  }
  return out;
}

void write_table(const Table& table, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    write_csv(table, out);
  } else if (format == "json") {
    out << table_to_json(table).dump(2) << '\n';
  } else {
    throw std::invalid_argument("unknown format '" + format + "' (expected csv or json)");
  }
}

double CellResult::survival_frequency() const {
  return replicates > 0 ? static_cast<double>(survived) / static_cast<double>(replicates) : 0.0;
}

double CellResult::std_error() const {
  if (replicates < 1) return 0.0;
  const double p = survival_frequency();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(replicates));
}

double CellResult::mean_size() const {
  if (sizes.empty()) return 0.0;
  double total = 0.0;
  for (Index s : sizes) total += static_cast<double>(s);
  return total / static_cast<double>(sizes.size());
}

double CellResult::censored_fraction() const {
  return replicates > 0 ? static_cast<double>(censored) / static_cast<double>(replicates) : 0.0;
}

bool CellResult::unreliable() const { return censored_fraction() > 0.2; }

CellResult run_cell(const ScenarioConfig& cfg, Index replicates, int threads) {
  checked(cfg);
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  std::vector<Verdict> verdicts(static_cast<std::size_t>(replicates));
  parallel_for(replicates, threads, [&](Index r) {
    verdicts[static_cast<std::size_t>(r)] = run_scenario(cfg, static_cast<std::uint64_t>(r)).verdict;
  });
  CellResult cell;
  cell.replicates = replicates;
  for (const auto& v : verdicts) {
    cell.sizes.push_back(v.size);
    if (v.kind == VerdictKind::SurvivedProxy) ++cell.survived;
    if (v.kind == VerdictKind::BoundaryCensored) ++cell.censored;
  }
  return cell;
}

std::uint64_t row_seed(const ScenarioConfig& cfg, std::uint64_t master_seed) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ static_cast<std::uint64_t>(cfg.model));
  h = fold(h, cfg.lambda);
  h = fold(h, cfg.rho);
  return mix64(h ^ static_cast<std::uint64_t>(cfg.dim));
}

std::vector<std::string> validate_plan(const SweepPlan& plan) {
  std::vector<std::string> errors;
  if (plan.lambdas.empty()) errors.push_back("lambda grid is empty");
  if (plan.alphas.empty()) errors.push_back("alpha grid is empty");
  if (plan.replicates < 1) errors.push_back("replicates must be >= 1");
  for (double l : plan.lambdas)
    if (!(l > 0.0) || !std::isfinite(l)) errors.push_back("lambda grid values must be positive and finite");
  for (double a : plan.alphas)
    if (!(a > 0.0) || !std::isfinite(a)) errors.push_back("alpha grid values must be positive and finite");
  for (double q : plan.levels)
    if (!(q > 0.0 && q < 1.0)) errors.push_back("bisection levels must lie in (0, 1)");
  if (plan.bisection_steps < 0) errors.push_back("bisection steps must be >= 0");
  auto cfg = plan.base;
  cfg.lambda = plan.lambdas.empty() ? cfg.lambda : plan.lambdas.front();
  cfg.alpha = plan.alphas.empty() ? cfg.alpha : plan.alphas.front();
  for (auto& e : validate_config(cfg)) errors.push_back(std::move(e));
  return errors;
}

SweepResult run_sweep(const SweepPlan& plan) {
  if (auto errors = validate_plan(plan); !errors.empty()) throw ConfigError(std::move(errors));
  SweepResult result;
  auto lambdas = plan.lambdas;
  auto alphas = plan.alphas;
  std::sort(lambdas.begin(), lambdas.end());
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  for (double lambda : lambdas) {
    auto row_cfg = plan.base;
    row_cfg.lambda = lambda;
    row_cfg.seed = row_seed(row_cfg, plan.base.seed);
    std::map<double, CellResult> cache;
    auto cell_at = [&](double alpha) -> const CellResult& {
      auto it = cache.find(alpha);
      if (it == cache.end()) {
        auto cfg = row_cfg;
        cfg.alpha = alpha;
        it = cache.emplace(alpha, run_cell(cfg, plan.replicates, plan.threads)).first;
      }
      return it->second;
    };
    for (double alpha : alphas)
      result.rows.push_back({plan.base.model, lambda, alpha, plan.base.rho, cell_at(alpha), plan.base.seed});

    for (double level : plan.levels) {
      // Survival decreases in alpha: lo is the largest grid alpha above the
      // level, hi the next grid alpha.
      double lo = 0.0;
      double hi = kInf;
      for (double alpha : alphas) {
        if (cell_at(alpha).survival_frequency() > level) {
          lo = alpha;
        } else {
          hi = alpha;
          break;
        }
      }
      const bool bracketed = lo > 0.0 && std::isfinite(hi);
      if (bracketed) {
        for (int step = 0; step < plan.bisection_steps; ++step) {
          const double mid = std::sqrt(lo * hi);
          (cell_at(mid).survival_frequency() > level ? lo : hi) = mid;
        }
      }
      const double estimate = bracketed ? std::sqrt(lo * hi) : std::numeric_limits<double>::quiet_NaN();
      result.critical.push_back(
          {plan.base.model, lambda, plan.base.rho, level, estimate, lo, hi, plan.replicates, plan.base.seed});
    }
  }
  return result;
}

Table sweep_table(const std::vector<SweepRow>& rows) {
  Table t{{"model", "lambda", "alpha", "rho", "survived_freq", "stderr", "mean_I", "censored_frac", "replicates", "seed",
           "flag"},
          {}};
  for (const auto& r : rows)
    t.rows.push_back({model_name(r.model), number(r.lambda), number(r.alpha), number(r.rho),
                      number(r.cell.survival_frequency()), number(r.cell.std_error()), number(r.cell.mean_size()),
                      number(r.cell.censored_fraction()), r.cell.replicates, r.seed,
                      r.cell.unreliable() ? "UNRELIABLE" : ""});
  return t;
}

Table critical_table(const std::vector<CriticalAlpha>& rows) {
  Table t{{"model", "lambda", "rho", "q", "alpha_c", "lo", "hi", "replicates", "seed"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({model_name(r.model), number(r.lambda), number(r.rho), number(r.level), number(r.alpha_c),
                      number(r.lo), number(r.hi), r.replicates, r.seed});
  return t;
}

Table sausage_table(const std::vector<VolumeEstimate>& profile, const std::string& diffusion, int dim) {
  Table t{{"t", "estimate", "stderr", "replicates", "diffusion", "d"}, {}};
  for (const auto& v : profile)
    t.rows.push_back({number(v.time), number(v.mean), number(v.std_error), v.replicates, diffusion, dim});
  return t;
}

Table percolation_table(const std::vector<CrossingEstimate>& rows) {
  Table t{{"lambda", "L", "crossing", "SE"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({number(r.lambda), number(r.half_width), number(r.probability), number(r.std_error)});
  return t;
}

Table bounds_table(const std::vector<BoundComparison>& rows) {
  Table t{{"model", "lambda", "alpha", "rho", "d", "closed_form", "mc", "mc_stderr", "certified"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({model_name(r.model), number(r.lambda), number(r.alpha), number(r.rho), r.dim,
                      number(r.closed_form), number(r.mc.value), number(r.mc.std_error), r.mc.certified()});
  return t;
}

json outcome_summary(const ScenarioConfig& cfg, std::uint64_t replicate, const EpidemicOutcome& outcome) {
  json j = config_summary(cfg);
  j["replicate"] = replicate;
  j["verdict"] = outcome.verdict.describe();
  j["size"] = outcome.size();
  j["particles"] = outcome.particle_count;
  j["censored"] = outcome.censored;
  j["generation_sizes"] = outcome.generation_sizes();
  j["max_generation"] = outcome.max_generation();
  return j;
}

bool same_infection_tree(const EpidemicOutcome& a, const EpidemicOutcome& b) {
  if (infected_set(a) != infected_set(b)) return false;
  for (Index i : a.infected)
    if (a.parent[static_cast<std::size_t>(i)] != b.parent[static_cast<std::size_t>(i)]) return false;
  return true;
}

bool infected_subset(const EpidemicOutcome& inner, const EpidemicOutcome& outer) {
  for (Index i : inner.infected)
    if (static_cast<std::size_t>(i) >= outer.generation.size() || !outer.is_infected(i)) return false;
  return true;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

json ValidationReport::to_json() const {
  json list = json::array();
  for (const auto& c : checks)
    list.push_back({{"suite", c.suite},
                    {"name", c.name},
                    {"observed", number(c.observed)},
                    {"expected", number(c.expected)},
                    {"tolerance", number(c.tolerance)},
                    {"passed", c.passed}});
  return {{"passed", passed()}, {"checks", list}};
}

const std::vector<std::string>& validation_suites() {
  static const std::vector<std::string> names{"coupling", "bounds", "sausage", "percolation", "all"};
  return names;
}

ValidationReport run_validation(const std::string& suite, int threads) {
  const auto& names = validation_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw std::invalid_argument("unknown validation suite '" + suite + "'");
  ValidationReport report;
  const bool all = suite == "all";
  if (all || suite == "coupling") coupling_suite(threads, report.checks);
  if (all || suite == "bounds") bounds_suite(threads, report.checks);
  if (all || suite == "sausage") sausage_suite(threads, report.checks);
  if (all || suite == "percolation") percolation_suite(threads, report.checks);
  return report;
}

}  // namespace epidiff
