// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/bessel.hpp"
#include "epidiff/bounds.hpp"
#include "epidiff/config_io.hpp"
#include "epidiff/harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace epidiff;
using nlohmann::json;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* app, Common& c, const std::string& default_format) {
  c.format = default_format;
  app->add_option("--config", c.config_path, "Scenario JSON file")->check(CLI::ExistingFile);
  app->add_option("--set", c.overrides, "Override a scenario field, e.g. --set numerics.dt=0.001");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--threads", c.threads, "Worker threads (default: EPIDIFF_THREADS or all cores)");
  app->add_option("--out", c.out, "Output file (default: stdout)");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

ScenarioConfig scenario(const Common& c) {
  ScenarioConfig cfg = c.config_path.empty() ? ScenarioConfig{} : load_config(c.config_path);
  cfg = apply_overrides(cfg, c.overrides);
  if (c.seed) cfg.seed = *c.seed;
  return checked(cfg);
}

// Runs `write` against the --out file or stdout.
template <typename Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  write(file);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sibling_path(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  const auto ext = p.extension().string();
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

SausageOptions sausage_options(const ScenarioConfig& cfg, int samples, int threads) {
  SausageOptions o;
  o.dt = cfg.numerics.dt;
  o.refine_levels = cfg.numerics.refine_levels;
  o.bridge_correction = cfg.numerics.bridge_correction;
  o.max_time = cfg.numerics.max_time;
  o.samples_per_path = samples;
  o.seed = cfg.seed;
  o.threads = threads;
  return o;
}

int cmd_simulate(const Common& c, std::uint64_t replicate, Index replicates, const std::string& events_path) {
  auto cfg = scenario(c);
  const Stopwatch clock;
  if (replicates > 1) {
    const auto cell = run_cell(cfg, replicates, c.threads);
    SweepRow row{cfg.model, cfg.lambda, cfg.alpha, cfg.rho, cell, cfg.seed};
    emit(c.out, [&](std::ostream& os) { write_table(sweep_table({row}), c.format, os); });
  } else {
    cfg.record_events = !events_path.empty();
    const auto outcome = run_scenario(cfg, replicate);
    const auto summary = outcome_summary(cfg, replicate, outcome);
    emit(c.out, [&](std::ostream& os) {
      if (c.format == "json") {
        os << summary.dump(2) << '\n';
        return;
      }
      Table t;
      std::vector<json> row;
      for (const auto& [key, value] : summary.items()) {
        t.columns.push_back(key);
        if (value.is_array()) {
          std::string joined;
          for (const auto& v : value) joined += (joined.empty() ? "" : ";") + v.dump();
          row.push_back(joined);
        } else {
          row.push_back(value);
        }
      }
      t.rows.push_back(row);
      write_csv(t, os);
    });
    if (!events_path.empty()) emit(events_path, [&](std::ostream& os) { write_event_log(outcome, os); });
  }
  std::cerr << "elapsed_seconds " << clock.seconds() << '\n';
  return 0;
}

struct SweepArgs {
  std::vector<double> lambdas;
  std::vector<double> alphas;
  Index replicates = 200;
  std::vector<double> levels{0.02, 0.05, 0.1};
  int bisection_steps = 6;
  std::string critical_out;
};

int cmd_sweep(const Common& c, const SweepArgs& a) {
  SweepPlan plan;
  plan.base = scenario(c);
  plan.lambdas = a.lambdas;
  plan.alphas = a.alphas;
  plan.replicates = a.replicates;
  plan.threads = c.threads;
  plan.levels = a.levels;
  plan.bisection_steps = a.bisection_steps;
  const Stopwatch clock;
  const auto result = run_sweep(plan);
  emit(c.out, [&](std::ostream& os) { write_table(sweep_table(result.rows), c.format, os); });
  std::string critical_path = a.critical_out;
  if (critical_path.empty() && !c.out.empty()) critical_path = sibling_path(c.out, "_alpha_c");
  if (!critical_path.empty())
    emit(critical_path, [&](std::ostream& os) { write_table(critical_table(result.critical), c.format, os); });
  for (const auto& r : result.rows)
    if (r.cell.unreliable())
      std::cerr << "UNRELIABLE cell lambda=" << r.lambda << " alpha=" << r.alpha
                << " censored_frac=" << r.cell.censored_fraction() << '\n';
  std::cerr << "elapsed_seconds " << clock.seconds() << '\n';
  return 0;
}

struct BoundsArgs {
  std::string method = "auto";
  Index replicates = 2000;
  int samples = 64;
  double cap = -1.0;
  std::vector<double> lambdas;
  std::vector<double> alphas;
  std::vector<double> growth_times{0.5, 1.0, 2.0, 4.0};
};

int cmd_bounds(const Common& c, const BoundsArgs& a) {
  const auto cfg = scenario(c);
  const auto opts = sausage_options(cfg, a.samples, c.threads);
  if (!a.lambdas.empty() || !a.alphas.empty()) {
    if (!cfg.infinite_rho()) throw std::invalid_argument("comparison tables need rho = inf");
    const auto lambdas = a.lambdas.empty() ? std::vector<double>{cfg.lambda} : a.lambdas;
    const auto alphas = a.alphas.empty() ? std::vector<double>{cfg.alpha} : a.alphas;
    std::vector<BoundComparison> rows;
    for (double alpha : alphas) {
      const auto unit = r_infinity_mc(cfg.model, cfg.diffusion, cfg.dim, 1.0, alpha, a.replicates, opts);
      for (double lambda : lambdas) {
        auto mc = unit;
        mc.value *= lambda;
        mc.std_error *= lambda;
        mc.certificate = certify(mc.value, mc.std_error);
        mc.inputs["lambda"] = lambda;
        double closed = std::numeric_limits<double>::quiet_NaN();
        if (cfg.model == Model::Delayed) {
          try {
            closed = r_infinity_closed_form_2d(lambda, alpha, cfg.dim, cfg.diffusion, cfg.kernel).value;
          } catch (const std::invalid_argument&) {
          }
        }
        rows.push_back({cfg.model, lambda, alpha, cfg.rho, cfg.dim, closed, mc});
      }
    }
    emit(c.out, [&](std::ostream& os) { write_table(bounds_table(rows), c.format, os); });
    return 0;
  }

  std::vector<BoundReport> reports;
  const auto& m = a.method;
  const double radius = interaction_radius(cfg);
  if (m == "crude" || (m == "auto" && !cfg.infinite_rho()))
    reports.push_back(crude_bound_delayed(cfg.lambda, cfg.rho, cfg.kernel, cfg.dim, cfg.alpha));
  if (m == "closed-form" || (m == "auto" && cfg.infinite_rho() && cfg.model == Model::Delayed && cfg.dim == 2)) {
    try {
      reports.push_back(r_infinity_closed_form_2d(cfg.lambda, cfg.alpha, cfg.dim, cfg.diffusion, cfg.kernel));
    } catch (const std::invalid_argument&) {
      if (m == "closed-form") throw;
    }
  }
  if (m == "mc" || m == "auto") {
    if (cfg.infinite_rho()) {
      auto o = opts;
      o.radius = radius;
      reports.push_back(r_infinity_mc(cfg.model, cfg.diffusion, cfg.dim, cfg.lambda, cfg.alpha, a.replicates, o));
    } else {
      reports.push_back(
          r_rho_mc(cfg.model, cfg.diffusion, cfg.dim, cfg.lambda, cfg.rho, cfg.kernel, cfg.alpha, a.replicates, opts));
    }
  }
  if (m == "bounded" || (m == "auto" && a.cap >= 0.0)) {
    if (a.cap < 0.0) throw std::invalid_argument("--cap is required for the bounded-motion bound");
    reports.push_back(bounded_motion_bound(cfg.model, cfg.lambda, cfg.dim, a.cap, radius));
  }
  if (m == "growth") {
    auto o = opts;
    o.radius = radius;
    const auto fit = cfg.model == Model::Diffusion
                         ? fit_growth_envelope(difference_sausage_volume_profile(cfg.diffusion, cfg.dim,
                                                                                 a.growth_times, a.replicates, o))
                         : fit_growth_envelope(sausage_volume_profile(cfg.diffusion, cfg.dim, a.growth_times,
                                                                      a.replicates, o));
    reports.push_back(growth_envelope_certificate(cfg.lambda, cfg.alpha, fit, cfg.model));
  }
  emit(c.out, [&](std::ostream& os) {
    if (c.format == "json") {
      json list = json::array();
      for (const auto& r : reports) list.push_back(to_json(r));
      os << list.dump(2) << '\n';
      return;
    }
    Table t{{"model", "method", "value", "stderr", "certified", "lambda", "alpha", "rho", "d"}, {}};
    for (const auto& r : reports)
      t.rows.push_back({model_name(r.model), method_name(r.method), r.value, r.std_error, r.certified(), cfg.lambda,
                        cfg.alpha, rho_to_json(cfg.rho), cfg.dim});
    write_csv(t, os);
  });
  return 0;
}

struct SausageArgs {
  std::vector<double> times{0.5, 1.0, 2.0};
  Index replicates = 1000;
  int samples = 64;
  bool difference = false;
  bool fit = false;
};

int cmd_sausage(const Common& c, const SausageArgs& a) {
  const auto cfg = scenario(c);
  const auto opts = sausage_options(cfg, a.samples, c.threads);
  const auto profile = a.difference
                           ? difference_sausage_volume_profile(cfg.diffusion, cfg.dim, a.times, a.replicates, opts)
                           : sausage_volume_profile(cfg.diffusion, cfg.dim, a.times, a.replicates, opts);
  const std::string name = diffusion_name(cfg.diffusion) + (a.difference ? "-difference" : "");
  emit(c.out, [&](std::ostream& os) { write_table(sausage_table(profile, name, cfg.dim), c.format, os); });
  if (a.fit) {
    const auto fit = fit_growth_envelope(profile);
    std::cerr << json{{"gamma_growth", fit.gamma}, {"sigma_growth", fit.sigma}}.dump() << '\n';
  }
  return 0;
}

struct PercolationArgs {
  int dim = 2;
  double half_width = 10.0;
  std::vector<double> lambdas{1.0, 1.5, 2.0};
  Index replicates = 1000;
  double radius = 1.0;
  bool critical = false;
};

int cmd_percolation(const Common& c, const PercolationArgs& a) {
  PercolationOptions opts;
  opts.radius = a.radius;
  opts.seed = c.seed.value_or(0);
  opts.threads = c.threads;
  std::vector<CrossingEstimate> rows;
  for (double lambda : a.lambdas)
    rows.push_back(crossing_probability(lambda, a.dim, a.half_width, a.replicates, opts));
  emit(c.out, [&](std::ostream& os) { write_table(percolation_table(rows), c.format, os); });
  if (a.critical) {
    const double estimate = critical_intensity_estimate(a.dim, a.half_width, a.replicates, opts);
    std::cerr << json{{"lambda_c_hat", estimate}, {"L", a.half_width}, {"d", a.dim}, {"level", 0.5}}.dump() << '\n';
  }
  return 0;
}

int cmd_validate(const Common& c, const std::string& suite) {
  const auto report = run_validation(suite, c.threads);
  for (const auto& check : report.checks)
    std::cerr << (check.passed ? "PASS " : "FAIL ") << check.suite << ": " << check.name << " observed="
              << check.observed << " expected=" << check.expected << " tol=" << check.tolerance << '\n';
  emit(c.out, [&](std::ostream& os) { os << report.to_json().dump(2) << '\n'; });
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epidemics among diffusing particles: simulation, bounds and validation"};
  app.require_subcommand(1);

  Common simulate_common, sweep_common, bounds_common, sausage_common, percolation_common, validate_common;

  auto* simulate = app.add_subcommand("simulate", "Run one scenario (or a replicate cell)");
  add_common(simulate, simulate_common, "json");
  std::uint64_t replicate = 0;
  Index replicates = 1;
  std::string events_path;
  simulate->add_option("--replicate", replicate, "Replicate index of a single run");
  simulate->add_option("--replicates", replicates, "Summarize replicates 0..n-1 as a sweep row")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--events", events_path, "Write a JSON-lines event log of the single run");

  auto* sweep = app.add_subcommand("sweep", "Survival-proxy frequencies over a (lambda, alpha) grid");
  add_common(sweep, sweep_common, "csv");
  SweepArgs sweep_args;
  sweep->add_option("--lambdas", sweep_args.lambdas, "Lambda grid")->delimiter(',')->required();
  sweep->add_option("--alphas", sweep_args.alphas, "Alpha grid")->delimiter(',')->required();
  sweep->add_option("--replicates", sweep_args.replicates, "Replicates per cell")->check(CLI::PositiveNumber);
  sweep->add_option("--levels", sweep_args.levels, "Survival levels q for alpha_c")->delimiter(',');
  sweep->add_option("--bisection-steps", sweep_args.bisection_steps, "Bisection steps between grid brackets");
  sweep->add_option("--alpha-c-out", sweep_args.critical_out, "alpha_c table (default: <out>_alpha_c)");

  auto* bounds = app.add_subcommand("bounds", "Reproduction-number bounds and extinction certificates");
  add_common(bounds, bounds_common, "json");
  BoundsArgs bounds_args;
  bounds->add_option("--method", bounds_args.method, "Bound to compute")
      ->check(CLI::IsMember({"auto", "crude", "closed-form", "mc", "bounded", "growth"}));
  bounds->add_option("--replicates", bounds_args.replicates, "Monte Carlo replicates")->check(CLI::PositiveNumber);
  bounds->add_option("--samples", bounds_args.samples, "Hit-or-miss samples per path")->check(CLI::PositiveNumber);
  bounds->add_option("--cap", bounds_args.cap, "Motion confinement radius for the bounded-motion bound");
  bounds->add_option("--lambdas", bounds_args.lambdas, "Comparison table lambda grid")->delimiter(',');
  bounds->add_option("--alphas", bounds_args.alphas, "Comparison table alpha grid")->delimiter(',');
  bounds->add_option("--growth-times", bounds_args.growth_times, "Times for the growth-envelope fit")->delimiter(',');

  auto* sausage = app.add_subcommand("sausage", "Mean sausage volume profile");
  add_common(sausage, sausage_common, "csv");
  SausageArgs sausage_args;
  sausage->add_option("--times", sausage_args.times, "Times")->delimiter(',');
  sausage->add_option("--replicates", sausage_args.replicates, "Paths")->check(CLI::PositiveNumber);
  sausage->add_option("--samples", sausage_args.samples, "Hit-or-miss samples per path")->check(CLI::PositiveNumber);
  sausage->add_flag("--difference", sausage_args.difference, "Sausage of the difference of two independent paths");
  sausage->add_flag("--fit", sausage_args.fit, "Print the fitted growth envelope on stderr");

  auto* percolation = app.add_subcommand("percolation", "Boolean-model crossing probabilities");
  add_common(percolation, percolation_common, "csv");
  PercolationArgs percolation_args;
  percolation->add_option("--d", percolation_args.dim, "Dimension")->check(CLI::Range(1, 3));
  percolation->add_option("--L", percolation_args.half_width, "Box half-width")->check(CLI::PositiveNumber);
  percolation->add_option("--lambdas", percolation_args.lambdas, "Intensities")->delimiter(',');
  percolation->add_option("--replicates", percolation_args.replicates, "Clouds per intensity")
      ->check(CLI::PositiveNumber);
  percolation->add_option("--radius", percolation_args.radius, "Connection radius")->check(CLI::PositiveNumber);
  percolation->add_flag("--critical", percolation_args.critical, "Also bisect for the 50% crossing intensity");

  auto* validate = app.add_subcommand("validate", "Run a property suite; nonzero exit on failure");
  add_common(validate, validate_common, "json");
  std::string suite;
  validate->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(validation_suites()));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(simulate_common, replicate, replicates, events_path);
    if (*sweep) return cmd_sweep(sweep_common, sweep_args);
    if (*bounds) return cmd_bounds(bounds_common, bounds_args);
    if (*sausage) return cmd_sausage(sausage_common, sausage_args);
    if (*percolation) return cmd_percolation(percolation_common, percolation_args);
    if (*validate) return cmd_validate(validate_common, suite);
  } catch (const ConfigError& e) {
    for (const auto& msg : e.errors()) std::cerr << "config error: " << msg << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
