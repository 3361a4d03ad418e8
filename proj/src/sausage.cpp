// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/sausage.hpp"

#include "epidiff/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace epidiff {
namespace {

struct HitEvent {
  Index step;
  double time;
  double miss;  // probability the step does not hit; 0 for a grid hit
};

// Last grid step index (exclusive) needed to cover [0, horizon].
Index steps_for(const SampledPath& path, double horizon) {
  const double raw = std::ceil(horizon / path.dt() - 1e-9);
  return std::min<Index>(path.steps(), raw > 0.0 ? static_cast<Index>(raw) : 0);
}

template <typename Box>
double squared_distance_to_box(const Point& x, const Box& lo, const Box& hi) {
  double total = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    const double gap = std::max({lo(j) - x(j), 0.0, x(j) - hi(j)});
    total += gap * gap;
  }
  return total;
}

// Beyond this distance from both step endpoints the bridge crossing
// probability is below exp(-36 / d) times the worst directional rate ratio.
double bridge_margin(const SampledPath& path, double dt) {
  return 6.0 * std::sqrt(dt * path.dim() * std::max(path.max_variance_rate(), 0.0));
}

// Time of a grid hit inside step k: bisect once with the bridge midpoint,
// then interpolate the signed distance linearly.
double locate_hit(SampledPath& path, const Point& target, double radius, Index k, double d0, double d1) {
  const double dt = path.dt();
  const double dm = (target - path.midpoint(k)).norm() - radius;
  const double start = static_cast<double>(k) * dt;
  if (dm <= 0.0) return start + 0.5 * dt * d0 / (d0 - dm);
  return start + 0.5 * dt + 0.5 * dt * dm / (dm - d1);
}

// Visits candidate hit events in time order until `visit` returns true.
template <typename Visit>
void scan_hits(SampledPath& path, const Point& target, double radius, double horizon, bool bridge, Visit&& visit) {
  if (within_closed_ball(path.point(0), target, radius)) {
    visit(HitEvent{0, 0.0, 0.0});
    return;
  }
  path.ensure_time(horizon);
  const double dt = path.dt();
  const Index last = steps_for(path, horizon);
  const double margin = bridge ? bridge_margin(path, dt) : 0.0;
  const double reach = radius + margin;
  const Index chunks = path.chunk_count();
  for (Index c = 0; c < chunks && c * kPathChunk < last; ++c) {
    if (squared_distance_to_box(target, path.chunk_lo(c), path.chunk_hi(c)) > reach * reach) continue;
    const Index end = std::min((c + 1) * kPathChunk, last);
    double d0 = (target - path.point(c * kPathChunk)).norm() - radius;
    for (Index k = c * kPathChunk; k < end; ++k) {
      const double d1 = (target - path.point(k + 1)).norm() - radius;
      if (d1 <= 0.0) {
        const double t = locate_hit(path, target, radius, k, d0, d1);
        if (t <= horizon) visit(HitEvent{k, t, 0.0});
        return;
      }
      if (bridge && d0 < margin && d1 < margin) {
        const Point direction = (target - path.point(k)) / (d0 + radius);
        const double rate = path.variance_rate(k, direction);
        if (rate > 0.0) {
          const double p = std::exp(-2.0 * d0 * d1 / (rate * dt));
          if (p > 0.0) {
            const double t = (static_cast<double>(k) + 0.5) * dt;
            if (t > horizon) return;
            if (visit(HitEvent{k, t, 1.0 - p})) return;
          }
        }
      }
      d0 = d1;
    }
  }
}

// Fraction of [0, extent] on which d0 + (d1 - d0) s <= 0.
double covered_fraction(double d0, double d1, double extent) {
  if (d0 <= 0.0 && d1 <= 0.0) return extent;
  if (d0 > 0.0 && d1 > 0.0) return 0.0;
  const double root = d0 / (d0 - d1);
  return d0 <= 0.0 ? std::min(root, extent) : std::max(0.0, extent - root);
}

struct Box {
  Point lo;
  Point hi;
  double volume() const { return (hi - lo).prod(); }
};

// Sampling box for the sausage on [0, horizon]. It is the coarse-grid
// bounding box dilated by radius plus a bridge margin at the coarse step, so
// refining the grid does not move it unless the refined path escapes it.
Box sampling_box(SampledPath& path, double horizon, double radius) {
  path.ensure_time(horizon);
  const Index stride = path.coarse_stride();
  const Index last = steps_for(path, horizon);
  const Index coarse_last = std::min(((last + stride - 1) / stride) * stride, path.steps());
  Box box{path.point(0), path.point(0)};
  for (Index k = stride; k <= coarse_last; k += stride) {
    box.lo = box.lo.cwiseMin(Point(path.point(k)));
    box.hi = box.hi.cwiseMax(Point(path.point(k)));
  }
  const double coarse_margin = bridge_margin(path, path.dt() * static_cast<double>(stride));
  Point fine_lo = path.point(0);
  Point fine_hi = path.point(0);
  for (Index k = 1; k <= coarse_last; ++k) {
    fine_lo = fine_lo.cwiseMin(Point(path.point(k)));
    fine_hi = fine_hi.cwiseMax(Point(path.point(k)));
  }
  const double fine_margin = bridge_margin(path, path.dt());
  const Point slack = Point::Constant(path.dim(), coarse_margin - fine_margin);
  box.lo = box.lo.cwiseMin(Point(fine_lo + slack)) - Point::Constant(path.dim(), radius + coarse_margin);
  box.hi = box.hi.cwiseMax(Point(fine_hi - slack)) + Point::Constant(path.dim(), radius + coarse_margin);
  return box;
}

std::vector<double> sorted_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("need at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw std::invalid_argument("sausage times must be positive");
    if (i > 0 && times[i] < times[i - 1]) throw std::invalid_argument("sausage times must be increasing");
  }
  return times;
}

DiscretizedPath replicate_path(const DiffusionSpec& diffusion, int dim, const SausageOptions& options,
                               std::uint64_t replicate, std::uint64_t copy) {
  return DiscretizedPath(diffusion, dim, options.dt, options.refine_levels, options.max_time, options.seed,
                         StreamKey{replicate, 0, Purpose::Path, copy});
}

template <typename MakePath>
std::vector<VolumeEstimate> volume_profile(const std::vector<double>& times, Index replicates,
                                           const SausageOptions& options, MakePath&& make_path) {
  const auto grid = sorted_times(times);
  if (replicates < 2) throw std::invalid_argument("need at least two replicates");
  std::vector<std::vector<double>> per_path(static_cast<std::size_t>(replicates));
  parallel_for(replicates, options.threads, [&](Index r) {
    const std::uint64_t replicate = options.replicate_offset + static_cast<std::uint64_t>(r);
    auto path = make_path(replicate);
    const Stream sampling(options.seed, StreamKey{replicate, 0, Purpose::Sampling, 0});
    per_path[static_cast<std::size_t>(r)] =
        sausage_volume_on_path(path, grid, options.radius, options.samples_per_path, sampling,
                               options.bridge_correction);
  });
  std::vector<VolumeEstimate> out;
  const auto n = static_cast<double>(replicates);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double sum = 0.0;
    for (const auto& v : per_path) sum += v[j];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& v : per_path) ss += (v[j] - mean) * (v[j] - mean);
    out.push_back({grid[j], mean, std::sqrt(ss / (n - 1.0) / n), replicates});
  }
  return out;
}

}  // namespace

std::optional<double> first_hitting_time(SampledPath& path, const Point& target, double radius, double horizon,
                                         const HitOptions& options) {
  std::optional<double> hit;
  const Stream* uniforms = options.bridge_uniforms;
  scan_hits(path, target, radius, horizon, options.bridge_correction && uniforms != nullptr,
            [&](const HitEvent& e) {
              if (e.miss == 0.0 || uniforms->uniform_at(static_cast<std::uint64_t>(e.step)) < 1.0 - e.miss) {
                hit = e.time;
                return true;
              }
              return false;
            });
  return hit;
}

double hit_probability(SampledPath& path, const Point& target, double radius, double horizon,
                       bool bridge_correction) {
  double survival = 1.0;
  scan_hits(path, target, radius, horizon, bridge_correction, [&](const HitEvent& e) {
    survival *= e.miss;
    return survival == 0.0;
  });
  return 1.0 - survival;
}

std::vector<double> hit_probability_profile(SampledPath& path, const Point& target, double radius,
                                            const std::vector<double>& times, bool bridge_correction) {
  std::vector<double> out(times.size());
  if (times.empty()) return out;
  double survival = 1.0;
  std::size_t next = 0;
  scan_hits(path, target, radius, times.back(), bridge_correction, [&](const HitEvent& e) {
    while (next < times.size() && times[next] < e.time) out[next++] = 1.0 - survival;
    survival *= e.miss;
    return survival == 0.0;
  });
  while (next < times.size()) out[next++] = 1.0 - survival;
  return out;
}

double occupation_time(SampledPath& path, const Point& target, double radius, double t) {
  if (!(t > 0.0)) return 0.0;
  path.ensure_time(t);
  const double dt = path.dt();
  const Index last = steps_for(path, t);
  double covered = 0.0;
  for (Index c = 0; c < path.chunk_count() && c * kPathChunk < last; ++c) {
    if (squared_distance_to_box(target, path.chunk_lo(c), path.chunk_hi(c)) > radius * radius) continue;
    const Index end = std::min((c + 1) * kPathChunk, last);
    double d0 = (target - path.point(c * kPathChunk)).norm() - radius;
    for (Index k = c * kPathChunk; k < end; ++k) {
      const double d1 = (target - path.point(k + 1)).norm() - radius;
      const double extent = std::min(1.0, (t - static_cast<double>(k) * dt) / dt);
      covered += dt * covered_fraction(d0, d1, extent);
      d0 = d1;
    }
  }
  return covered;
}

std::vector<double> sausage_volume_on_path(SampledPath& path, const std::vector<double>& times, double radius,
                                           int samples, const Stream& sampling, bool bridge_correction) {
  if (samples < 1) throw std::invalid_argument("samples_per_path must be positive");
  const Box box = sampling_box(path, times.back(), radius);
  const double volume = box.volume();
  const int dim = path.dim();
  std::vector<double> hits(times.size(), 0.0);
  Point y(dim);
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < dim; ++j) {
      const double u = sampling.uniform_at(static_cast<std::uint64_t>(s) * dim + j);
      y(j) = box.lo(j) + (box.hi(j) - box.lo(j)) * u;
    }
    const auto p = hit_probability_profile(path, y, radius, times, bridge_correction);
    for (std::size_t i = 0; i < times.size(); ++i) hits[i] += p[i];
  }
  for (auto& h : hits) h *= volume / samples;
  return hits;
}

std::vector<VolumeEstimate> sausage_volume_profile(const DiffusionSpec& diffusion, int dim,
                                                   const std::vector<double>& times, Index replicates,
                                                   const SausageOptions& options) {
  return volume_profile(times, replicates, options,
                        [&](std::uint64_t rep) { return replicate_path(diffusion, dim, options, rep, 0); });
}

VolumeEstimate sausage_volume_estimate(const DiffusionSpec& diffusion, int dim, double t, Index replicates,
                                       const SausageOptions& options) {
  return sausage_volume_profile(diffusion, dim, {t}, replicates, options).front();
}

std::vector<VolumeEstimate> difference_sausage_volume_profile(const DiffusionSpec& diffusion, int dim,
                                                              const std::vector<double>& times, Index replicates,
                                                              const SausageOptions& options) {
  return volume_profile(times, replicates, options, [&](std::uint64_t rep) {
    return DifferencePath(replicate_path(diffusion, dim, options, rep, 0),
                          replicate_path(diffusion, dim, options, rep, 1));
  });
}

VolumeEstimate difference_sausage_volume_estimate(const DiffusionSpec& diffusion, int dim, double t,
                                                  Index replicates, const SausageOptions& options) {
  return difference_sausage_volume_profile(diffusion, dim, {t}, replicates, options).front();
}

std::vector<std::vector<HitEstimate>> exp_horizon_hit_probability(const DiffusionSpec& diffusion, int dim,
                                                                  const std::vector<Point>& targets,
                                                                  const std::vector<double>& alphas,
                                                                  Index replicates, const SausageOptions& options) {
  if (replicates < 2) throw std::invalid_argument("need at least two replicates");
  for (double a : alphas)
    if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
  // Horizons E / alpha are increasing in decreasing alpha.
  std::vector<std::size_t> order(alphas.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return alphas[a] > alphas[b]; });

  const std::size_t cells = targets.size() * alphas.size();
  std::vector<double> values(static_cast<std::size_t>(replicates) * cells);
  parallel_for(replicates, options.threads, [&](Index r) {
    const std::uint64_t replicate = options.replicate_offset + static_cast<std::uint64_t>(r);
    const double exponential = Stream(options.seed, {replicate, 0, Purpose::Lifetime, 0}).exponential_at(0);
    std::vector<double> horizons;
    for (auto a : order) horizons.push_back(exponential / alphas[a]);
    auto path = replicate_path(diffusion, dim, options, replicate, 0);
    for (std::size_t x = 0; x < targets.size(); ++x) {
      const auto p = hit_probability_profile(path, targets[x], options.radius, horizons, options.bridge_correction);
      for (std::size_t i = 0; i < order.size(); ++i)
        values[static_cast<std::size_t>(r) * cells + x * alphas.size() + order[i]] = p[i];
    }
  });

  std::vector<std::vector<HitEstimate>> out(targets.size(), std::vector<HitEstimate>(alphas.size()));
  const auto n = static_cast<double>(replicates);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double sum = 0.0;
    for (Index r = 0; r < replicates; ++r) sum += values[static_cast<std::size_t>(r) * cells + cell];
    const double mean = sum / n;
    double ss = 0.0;
    for (Index r = 0; r < replicates; ++r) {
      const double v = values[static_cast<std::size_t>(r) * cells + cell] - mean;
      ss += v * v;
    }
    out[cell / alphas.size()][cell % alphas.size()] = {mean, std::sqrt(ss / (n - 1.0) / n), replicates};
  }
  return out;
}

double GrowthFit::envelope(double t) const { return gamma * std::exp(sigma * t); }

GrowthFit fit_growth_envelope(const std::vector<VolumeEstimate>& profile) {
  if (profile.empty()) throw std::invalid_argument("growth fit needs a nonempty grid");
  const auto n = static_cast<double>(profile.size());
  double mean_t = 0.0, mean_y = 0.0;
  for (const auto& e : profile) {
    if (!(e.mean > 0.0)) throw std::invalid_argument("growth fit needs positive volume estimates");
    mean_t += e.time / n;
    mean_y += std::log(e.mean) / n;
  }
  double stt = 0.0, sty = 0.0;
  for (const auto& e : profile) {
    stt += (e.time - mean_t) * (e.time - mean_t);
    sty += (e.time - mean_t) * (std::log(e.mean) - mean_y);
  }
  GrowthFit fit;
  fit.sigma = stt > 0.0 ? std::max(0.0, sty / stt) : 0.0;
  fit.gamma = std::exp(mean_y - fit.sigma * mean_t);
  for (const auto& e : profile) {
    fit.gamma = std::max(fit.gamma, (e.mean + 2.0 * e.std_error) * std::exp(-fit.sigma * e.time));
  }
  return fit;
}

GrowthFit fit_growth_envelope(const DiffusionSpec& diffusion, int dim, const std::vector<double>& times,
                              Index replicates, const SausageOptions& options) {
  return fit_growth_envelope(sausage_volume_profile(diffusion, dim, times, replicates, options));
}

}  // namespace epidiff
