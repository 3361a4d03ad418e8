// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/bounds.hpp"

#include "epidiff/bessel.hpp"
#include "epidiff/kernel.hpp"
#include "epidiff/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epidiff {
namespace {

using nlohmann::json;

json rho_json(double rho) { return rho == kInf ? json("inf") : json(rho); }

BoundReport make_report(Model model, BoundMethod method, double value, double std_error, json inputs) {
  BoundReport r;
  r.model = model;
  r.method = method;
  r.value = value;
  r.std_error = std_error;
  r.certificate = certify(value, std_error);
  r.inputs = std::move(inputs);
  return r;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

std::unique_ptr<SampledPath> replicate_path(Model model, const DiffusionSpec& diffusion, int dim,
                                            const SausageOptions& options, std::uint64_t replicate) {
  auto make = [&](std::uint64_t copy) {
    return DiscretizedPath(diffusion, dim, options.dt, options.refine_levels, options.max_time, options.seed,
                           StreamKey{replicate, 0, Purpose::Path, copy});
  };
  if (model == Model::Diffusion) return std::make_unique<DifferencePath>(make(0), make(1));
  return std::make_unique<DiscretizedPath>(make(0));
}

double replicate_lifetime(const SausageOptions& options, std::uint64_t replicate, double alpha) {
  return Stream(options.seed, {replicate, 0, Purpose::Lifetime, 0}).exponential_at(0) / alpha;
}

struct MeanSe {
  double mean;
  double std_error;
};

MeanSe mean_and_se(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, n > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

json sausage_inputs(const SausageOptions& o) {
  return {{"dt", o.dt}, {"refine_levels", o.refine_levels}, {"samples_per_path", o.samples_per_path},
          {"bridge_correction", o.bridge_correction}, {"seed", o.seed}};
}

}  // namespace

Certificate certify(double value, double std_error) {
  return value + 3.0 * std_error < 1.0 ? Certificate::ExtinctionCertified : Certificate::Inconclusive;
}

std::string method_name(BoundMethod method) {
  switch (method) {
    case BoundMethod::ClosedFormBessel:
      return "ClosedFormBessel";
    case BoundMethod::CrudeKernelBound:
      return "CrudeKernelBound";
    case BoundMethod::MonteCarloIntegral:
      return "MonteCarloIntegral";
    case BoundMethod::BoundedMotion:
      return "BoundedMotion";
    case BoundMethod::GrowthEnvelope:
      return "GrowthEnvelope";
  }
  return "?";
}

json to_json(const BoundReport& report) {
  return {{"model", model_name(report.model)},
          {"method", method_name(report.method)},
          {"value", std::isfinite(report.value) ? json(report.value) : json("inf")},
          {"stderr", report.std_error},
          {"certified", report.certified()},
          {"certificate", report.certified() ? "ExtinctionCertified" : "Inconclusive"},
          {"inputs", report.inputs}};
}

BoundReport crude_bound_delayed(double lambda, double rho, const KernelSpec& kernel, int dim, double alpha) {
  require_positive(lambda, "lambda");
  require_positive(rho, "rho (finite)");
  require_positive(alpha, "alpha");
  const double mass = kernel_mass(kernel, dim);
  return make_report(Model::Delayed, BoundMethod::CrudeKernelBound, lambda * rho * mass / alpha, 0.0,
                     {{"lambda", lambda}, {"rho", rho}, {"alpha", alpha}, {"d", dim},
                      {"kernel", kernel_name(kernel)}, {"kernel_mass", mass}});
}

BoundReport r_infinity_closed_form_2d(double lambda, double alpha, int dim, const DiffusionSpec& diffusion,
                                      const KernelSpec& kernel) {
  if (dim != 2) throw std::invalid_argument("closed form needs d = 2");
  if (!std::holds_alternative<StandardBrownian>(diffusion.variant))
    throw std::invalid_argument("closed form needs standard Brownian motion");
  if (!is_ball_indicator(kernel) || indicator_radius(kernel) != 1.0)
    throw std::invalid_argument("closed form needs the unit-ball kernel");
  require_positive(lambda, "lambda");
  require_positive(alpha, "alpha");
  return make_report(Model::Delayed, BoundMethod::ClosedFormBessel, lambda * z_alpha(alpha), 0.0,
                     {{"lambda", lambda}, {"alpha", alpha}, {"d", 2}, {"rho", "inf"}});
}

BoundReport r_infinity_mc(Model model, const DiffusionSpec& diffusion, int dim, double lambda, double alpha,
                          Index replicates, const SausageOptions& options) {
  require_positive(lambda, "lambda");
  require_positive(alpha, "alpha");
  if (replicates < 2) throw std::invalid_argument("need at least two replicates");
  std::vector<double> volumes(static_cast<std::size_t>(replicates));
  parallel_for(replicates, options.threads, [&](Index r) {
    const std::uint64_t rep = options.replicate_offset + static_cast<std::uint64_t>(r);
    auto path = replicate_path(model, diffusion, dim, options, rep);
    const double horizon = replicate_lifetime(options, rep, alpha);
    const Stream sampling(options.seed, {rep, 0, Purpose::Sampling, 0});
    volumes[static_cast<std::size_t>(r)] =
        horizon > 0.0 ? sausage_volume_on_path(*path, {horizon}, options.radius, options.samples_per_path, sampling,
                                               options.bridge_correction)[0]
                      : ball_volume(dim, options.radius);
  });
  const auto [mean, se] = mean_and_se(volumes);
  auto inputs = sausage_inputs(options);
  inputs.update({{"lambda", lambda}, {"alpha", alpha}, {"d", dim}, {"rho", "inf"}, {"radius", options.radius},
                 {"diffusion", diffusion_name(diffusion)}, {"replicates", replicates}});
  return make_report(model, BoundMethod::MonteCarloIntegral, lambda * mean, lambda * se, std::move(inputs));
}

double kernel_exposure(SampledPath& path, const Point& x, const KernelSpec& kernel, double horizon) {
  if (!(horizon > 0.0)) return 0.0;
  if (is_ball_indicator(kernel)) return occupation_time(path, x, indicator_radius(kernel), horizon);
  path.ensure_time(horizon);
  const double dt = path.dt();
  const double support = kernel_support_radius(kernel);
  const double raw = std::ceil(horizon / dt - 1e-9);
  const Index last = std::min<Index>(path.steps(), static_cast<Index>(raw));
  double total = 0.0;
  for (Index c = 0; c < path.chunk_count() && c * kPathChunk < last; ++c) {
    double gap = 0.0;
    for (Index j = 0; j < x.size(); ++j) {
      const double g = std::max({path.chunk_lo(c)(j) - x(j), 0.0, x(j) - path.chunk_hi(c)(j)});
      gap += g * g;
    }
    if (gap > support * support) continue;
    const Index end = std::min((c + 1) * kPathChunk, last);
    double left = kernel_eval_sq(kernel, (x - path.point(c * kPathChunk)).squaredNorm());
    for (Index k = c * kPathChunk; k < end; ++k) {
      const double t0 = static_cast<double>(k) * dt;
      const double extent = std::min(dt, horizon - t0);
      double right = kernel_eval_sq(kernel, (x - path.point(k + 1)).squaredNorm());
      if (extent < dt) {
        const double partial = kernel_eval_sq(kernel, (x - path.interpolate(horizon)).squaredNorm());
        total += 0.5 * extent * (left + partial);
      } else {
        total += 0.5 * dt * (left + right);
      }
      left = right;
    }
  }
  return total;
}

BoundReport r_rho_mc(Model model, const DiffusionSpec& diffusion, int dim, double lambda, double rho,
                     const KernelSpec& kernel, double alpha, Index replicates, const SausageOptions& options) {
  require_positive(lambda, "lambda");
  require_positive(rho, "rho (finite)");
  require_positive(alpha, "alpha");
  if (replicates < 2) throw std::invalid_argument("need at least two replicates");
  const double support = kernel_support_radius(kernel);
  std::vector<double> values(static_cast<std::size_t>(replicates));
  parallel_for(replicates, options.threads, [&](Index r) {
    const std::uint64_t rep = options.replicate_offset + static_cast<std::uint64_t>(r);
    auto path = replicate_path(model, diffusion, dim, options, rep);
    const double horizon = replicate_lifetime(options, rep, alpha);
    path->ensure_time(horizon);
    const double raw = std::ceil(horizon / path->dt() - 1e-9);
    const Index last = std::min<Index>(path->steps(), static_cast<Index>(raw));
    Point lo = path->point(0), hi = path->point(0);
    for (Index k = 1; k <= last; ++k) {
      lo = lo.cwiseMin(Point(path->point(k)));
      hi = hi.cwiseMax(Point(path->point(k)));
    }
    lo.array() -= support;
    hi.array() += support;
    const double volume = (hi - lo).prod();
    const Stream sampling(options.seed, {rep, 0, Purpose::Sampling, 0});
    double sum = 0.0;
    Point y(dim);
    for (int s = 0; s < options.samples_per_path; ++s) {
      for (int j = 0; j < dim; ++j)
        y(j) = lo(j) + (hi(j) - lo(j)) * sampling.uniform_at(static_cast<std::uint64_t>(s) * dim + j);
      sum += -std::expm1(-rho * kernel_exposure(*path, y, kernel, horizon));
    }
    values[static_cast<std::size_t>(r)] = volume * sum / options.samples_per_path;
  });
  const auto [mean, se] = mean_and_se(values);
  auto inputs = sausage_inputs(options);
  inputs.update({{"lambda", lambda}, {"alpha", alpha}, {"d", dim}, {"rho", rho_json(rho)},
                 {"kernel", kernel_name(kernel)}, {"diffusion", diffusion_name(diffusion)},
                 {"replicates", replicates}});
  return make_report(model, BoundMethod::MonteCarloIntegral, lambda * mean, lambda * se, std::move(inputs));
}

BoundReport bounded_motion_bound(Model model, double lambda, int dim, double cap, double radius) {
  require_positive(lambda, "lambda");
  if (!(cap >= 0.0)) throw std::invalid_argument("motion cap must be >= 0");
  return make_report(model, BoundMethod::BoundedMotion, lambda * ball_volume(dim, cap + radius), 0.0,
                     {{"lambda", lambda}, {"d", dim}, {"cap", cap}, {"radius", radius}});
}

BoundReport growth_envelope_certificate(double lambda, double alpha, const GrowthFit& fit, Model model) {
  require_positive(lambda, "lambda");
  require_positive(alpha, "alpha");
  json inputs = {{"lambda", lambda}, {"alpha", alpha}, {"gamma_growth", fit.gamma}, {"sigma_growth", fit.sigma}};
  const double value = alpha > fit.sigma ? lambda * alpha * fit.gamma / (alpha - fit.sigma) : kInf;
  BoundReport r = make_report(model, BoundMethod::GrowthEnvelope, value, 0.0, std::move(inputs));
  const bool hypothesis = lambda * fit.gamma < 1.0 && alpha > fit.sigma / (1.0 - lambda * fit.gamma);
  if (!hypothesis) r.certificate = Certificate::Inconclusive;
  return r;
}

}  // namespace epidiff
