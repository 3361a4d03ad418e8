// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/engines.hpp"

#include "epidiff/kernel.hpp"
#include "epidiff/sampling.hpp"
#include "epidiff/sausage.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace epidiff {
namespace {

using EventKey = std::tuple<double, Index, Index>;
using EventQueue = std::priority_queue<EventKey, std::vector<EventKey>, std::greater<>>;

// Outcome bookkeeping shared by the engines.
class Recorder {
 public:
  Recorder(const ScenarioConfig& cfg, Index n) : cfg_(cfg) {
    outcome_.particle_count = n;
    outcome_.parent.assign(static_cast<std::size_t>(n), -1);
    outcome_.generation.assign(static_cast<std::size_t>(n), -1);
    outcome_.infection_time.assign(static_cast<std::size_t>(n), kInf);
  }

  bool infected(Index i) const { return outcome_.generation[static_cast<std::size_t>(i)] >= 0; }
  double infection_time(Index i) const { return outcome_.infection_time[static_cast<std::size_t>(i)]; }

  void infect(Index j, double t, Index parent, const Point& position) {
    const auto js = static_cast<std::size_t>(j);
    const int generation = parent < 0 ? 0 : outcome_.generation[static_cast<std::size_t>(parent)] + 1;
    outcome_.generation[js] = generation;
    outcome_.parent[js] = parent;
    outcome_.infection_time[js] = t;
    outcome_.infected.push_back(j);
    log({EventType::Infection, t, parent, j, position, 0});
    if (outcome_.threshold == ProxyReason::None) {
      if (outcome_.size() >= cfg_.proxy.n_max) outcome_.threshold = ProxyReason::InfectionCount;
      else if (cfg_.proxy.g_max >= 0 && generation >= cfg_.proxy.g_max) outcome_.threshold = ProxyReason::Generation;
    }
  }

  void remove(Index i, double t, const Point& position) { log({EventType::Removal, t, i, i, position, 0}); }

  void cascade(Index source, Index target, double t, const Point& position, Index count) {
    log({EventType::Cascade, t, source, target, position, count});
  }

  void censor(Index i, double t, const Point& position) {
    if (!outcome_.censored) log({EventType::Censored, t, i, i, position, 0});
    outcome_.censored = true;
  }

  bool should_stop() const {
    return cfg_.stop_at_thresholds && (outcome_.censored || outcome_.threshold != ProxyReason::None);
  }

  EpidemicOutcome finish() {
    outcome_.verdict = survival_proxy(outcome_, cfg_.proxy);
    return std::move(outcome_);
  }

  EpidemicOutcome& outcome() { return outcome_; }

 private:
  void log(Event e) {
    if (cfg_.record_events) outcome_.events.push_back(std::move(e));
  }

  const ScenarioConfig& cfg_;
  EpidemicOutcome outcome_;
};

double tube_margin(const SampledPath& path) {
  return 6.0 * std::sqrt(path.dt() * path.dim() * std::max(path.max_variance_rate(), 0.0));
}

Index steps_covering(const SampledPath& path, double horizon) {
  const double raw = std::ceil(horizon / path.dt() - 1e-9);
  if (!(raw < static_cast<double>(path.steps()))) return path.steps();
  return std::max<Index>(static_cast<Index>(raw), 0);
}

PointCloud sample_cloud(const ScenarioConfig& cfg, std::uint64_t replicate) {
  Stream stream(cfg.seed, {replicate, 0, Purpose::PointProcess, 0});
  return sample_poisson_cloud(cfg.lambda, cfg.box_half_width, cfg.dim, stream);
}

void check_cloud(const ScenarioConfig& cfg, const PointCloud& cloud) {
  if (cloud.rows() != cfg.dim || cloud.cols() < 1) throw std::invalid_argument("cloud must be d x n with n >= 1");
}

}  // namespace

std::string Verdict::describe() const {
  switch (kind) {
    case VerdictKind::ExtinctWithSize:
      return "ExtinctWithSize(" + std::to_string(size) + ")";
    case VerdictKind::SurvivedProxy:
      return std::string("SurvivedProxy(") + (reason == ProxyReason::Generation ? "generation" : "infections") + ")";
    case VerdictKind::BoundaryCensored:
      return "BoundaryCensored";
  }
  return "?";
}

int EpidemicOutcome::max_generation() const {
  int best = -1;
  for (Index i : infected) best = std::max(best, generation[static_cast<std::size_t>(i)]);
  return best;
}

std::vector<Index> EpidemicOutcome::generation_sizes(bool use_graph_depth) const {
  if (use_graph_depth && graph_depth.empty()) throw std::logic_error("graph depth not available for this engine");
  const auto& level = use_graph_depth ? graph_depth : generation;
  std::vector<Index> sizes;
  for (Index i : infected) {
    const int g = level[static_cast<std::size_t>(i)];
    if (g < 0) continue;
    if (static_cast<std::size_t>(g) >= sizes.size()) sizes.resize(static_cast<std::size_t>(g) + 1, 0);
    ++sizes[static_cast<std::size_t>(g)];
  }
  return sizes;
}

Verdict survival_proxy(const EpidemicOutcome& outcome, const ProxyThresholds& thresholds) {
  Verdict v;
  v.size = outcome.size();
  if (outcome.censored) {
    v.kind = VerdictKind::BoundaryCensored;
  } else if (outcome.size() >= thresholds.n_max) {
    v.kind = VerdictKind::SurvivedProxy;
    v.reason = ProxyReason::InfectionCount;
  } else if (thresholds.g_max >= 0 && outcome.max_generation() >= thresholds.g_max) {
    v.kind = VerdictKind::SurvivedProxy;
    v.reason = ProxyReason::Generation;
  }
  return v;
}

DelayedWorld::DelayedWorld(const ScenarioConfig& cfg, std::uint64_t replicate)
    : DelayedWorld(cfg, replicate, sample_cloud(checked(cfg), replicate)) {}

DelayedWorld::DelayedWorld(const ScenarioConfig& cfg, std::uint64_t replicate, PointCloud cloud)
    : cfg_(checked(cfg)), replicate_(replicate), cloud_(std::move(cloud)), reach_(interaction_radius(cfg)) {
  check_cloud(cfg_, cloud_);
  grid_ = std::make_unique<SpatialGrid>(cloud_, reach_);
  paths_.resize(static_cast<std::size_t>(cloud_.cols()));
}

double DelayedWorld::lifetime(Index i) const {
  return sample_lifetime(cfg_.alpha, Stream(cfg_.seed, {replicate_, static_cast<std::uint64_t>(i), Purpose::Lifetime, 0}));
}

DiscretizedPath& DelayedWorld::path(Index i) {
  auto& slot = paths_[static_cast<std::size_t>(i)];
  if (!slot) {
    slot = std::make_unique<DiscretizedPath>(cfg_.diffusion, cfg_.dim, cfg_.numerics.dt, cfg_.numerics.refine_levels,
                                             cfg_.numerics.max_time, cfg_.seed,
                                             StreamKey{replicate_, static_cast<std::uint64_t>(i), Purpose::Path, 0});
  }
  return *slot;
}

std::optional<double> DelayedWorld::contact_delay(Index i, Index j) {
  const double horizon = lifetime(i);
  auto& zeta = path(i);
  const Point target = cloud_.col(j) - cloud_.col(i);
  const auto pair = static_cast<std::uint64_t>(j);
  if (cfg_.infinite_rho()) {
    const Stream bridge(cfg_.seed, {replicate_, static_cast<std::uint64_t>(i), Purpose::Bridge, pair});
    const auto tau = first_hitting_time(zeta, target, indicator_radius(cfg_.kernel), horizon,
                                       {cfg_.numerics.bridge_correction, &bridge});
    if (tau && *tau < horizon) return tau;
    return std::nullopt;
  }
  const double mu_max = kernel_max(cfg_.kernel);
  const auto& kernel = cfg_.kernel;
  auto rate = [&](double s) { return cfg_.rho * kernel_eval_sq(kernel, (target - zeta.interpolate(s)).squaredNorm()); };
  auto band = [&](std::uint64_t b) {
    if (b >= (1u << 16)) throw std::invalid_argument("rho / mu_max too large for banded thinning");
    return Stream(cfg_.seed, {replicate_, static_cast<std::uint64_t>(i), Purpose::Thinning, (pair << 16) | b});
  };
  const auto tau = sample_first_contact_banded(rate, cfg_.rho * mu_max, mu_max, horizon, band);
  if (tau && *tau < horizon) return tau;
  return std::nullopt;
}

std::vector<Contact> DelayedWorld::infection_set_for(Index i, const std::function<bool(Index)>& include) {
  const double horizon = lifetime(i);
  auto& zeta = path(i);
  zeta.ensure_time(horizon);
  const Index last = steps_covering(zeta, horizon);
  // Bounding box of the trajectory over the lifetime, from chunk boxes.
  Point lo = zeta.point(0);
  Point hi = zeta.point(0);
  for (Index c = 0; c < zeta.chunk_count() && c * kPathChunk < last; ++c) {
    lo = lo.cwiseMin(Point(zeta.chunk_lo(c)));
    hi = hi.cwiseMax(Point(zeta.chunk_hi(c)));
  }
  const double pad = reach_ + (cfg_.infinite_rho() ? tube_margin(zeta) : 0.0);
  const Point origin = cloud_.col(i);
  lo = (origin + lo).array() - pad;
  hi = (origin + hi).array() + pad;
  std::vector<Index> candidates;
  grid_->for_each_in_box(lo, hi, [&](Index j) {
    if (j != i && include(j)) candidates.push_back(j);
  });
  std::sort(candidates.begin(), candidates.end());
  std::vector<Contact> out;
  for (Index j : candidates) {
    if (auto tau = contact_delay(i, j)) out.push_back({j, *tau});
  }
  return out;
}

bool DelayedWorld::touches_boundary(Index i) {
  const double horizon = lifetime(i);
  auto& zeta = path(i);
  if (horizon > zeta.max_time()) return true;
  zeta.ensure_time(horizon);
  const Index last = steps_covering(zeta, horizon);
  const double limit = cfg_.box_half_width - reach_;
  for (Index k = 0; k <= last; ++k) {
    if ((cloud_.col(i) + zeta.point(k)).cwiseAbs().maxCoeff() >= limit) return true;
  }
  return false;
}

DelayedRun run_delayed_percolation(const ScenarioConfig& cfg, std::uint64_t replicate) {
  DelayedWorld world(cfg, replicate);
  return run_delayed_percolation(world);
}

DelayedRun run_delayed_percolation(DelayedWorld& world) {
  const auto& cfg = world.config();
  const Index n = world.size();
  Recorder rec(cfg, n);
  InfectionGraph graph;
  graph.lifetime.assign(static_cast<std::size_t>(n), std::nan(""));
  graph.out_edges.resize(static_cast<std::size_t>(n));
  graph.revealed.assign(static_cast<std::size_t>(n), false);
  EventQueue queue;

  auto reach = [&](Index j, double t, Index parent) {
    rec.infect(j, t, parent, world.cloud().col(j));
    if (world.touches_boundary(j)) rec.censor(j, t, world.cloud().col(j));
    if (rec.should_stop()) return false;
    const auto js = static_cast<std::size_t>(j);
    graph.lifetime[js] = world.lifetime(j);
    graph.revealed[js] = true;
    for (const auto& c : world.infection_set_for(j, [j](Index k) { return k != j; })) {
      graph.out_edges[js].push_back({c.target, c.delay});
      if (!rec.infected(c.target)) queue.emplace(t + c.delay, j, c.target);
    }
    return true;
  };

  if (reach(0, 0.0, -1)) {
    while (!queue.empty()) {
      const auto [t, source, target] = queue.top();
      queue.pop();
      if (rec.infected(target)) continue;
      if (!reach(target, t, source)) break;
    }
  }

  // Graph distance from the origin over revealed edges.
  auto& outcome = rec.outcome();
  outcome.graph_depth.assign(static_cast<std::size_t>(n), -1);
  outcome.graph_depth[0] = 0;
  std::deque<Index> frontier{0};
  while (!frontier.empty()) {
    const Index i = frontier.front();
    frontier.pop_front();
    for (const auto& e : graph.out_edges[static_cast<std::size_t>(i)]) {
      auto& depth = outcome.graph_depth[static_cast<std::size_t>(e.target)];
      if (depth < 0 && rec.infected(e.target)) {
        depth = outcome.graph_depth[static_cast<std::size_t>(i)] + 1;
        frontier.push_back(e.target);
      }
    }
  }
  return {rec.finish(), std::move(graph)};
}

EpidemicOutcome run_delayed_chronological(const ScenarioConfig& cfg, std::uint64_t replicate) {
  DelayedWorld world(cfg, replicate);
  return run_delayed_chronological(world);
}

EpidemicOutcome run_delayed_chronological(DelayedWorld& world) {
  const auto& cfg = world.config();
  const Index n = world.size();
  Recorder rec(cfg, n);
  std::vector<bool> removed(static_cast<std::size_t>(n), false);
  // (time, source, target); target kRemoval marks the removal of source and
  // sorts after any same-instant infection by that source.
  constexpr Index kRemoval = std::numeric_limits<Index>::max();
  EventQueue queue;
  double cascade_time = -1.0;

  auto infect = [&](Index j, double t, Index parent) {
    rec.infect(j, t, parent, world.cloud().col(j));
    if (world.touches_boundary(j)) rec.censor(j, t, world.cloud().col(j));
    if (rec.should_stop()) return false;
    for (const auto& c : world.infection_set_for(j, [&](Index k) { return !rec.infected(k); })) {
      queue.emplace(t + c.delay, j, c.target);
    }
    queue.emplace(t + world.lifetime(j), j, kRemoval);
    return true;
  };

  if (infect(0, 0.0, -1)) {
    while (!queue.empty()) {
      const auto [t, source, target] = queue.top();
      queue.pop();
      if (target == kRemoval) {
        removed[static_cast<std::size_t>(source)] = true;
        rec.remove(source, t, world.cloud().col(source));
        continue;
      }
      if (rec.infected(target) || removed[static_cast<std::size_t>(source)]) continue;
      if (cfg.infinite_rho() && cfg.record_events && t != cascade_time) {
        // Stationary susceptibles chained to the target through overlapping
        // balls are all infected at this same instant.
        std::vector<bool> susceptible(static_cast<std::size_t>(n));
        for (Index k = 0; k < n; ++k) susceptible[static_cast<std::size_t>(k)] = !rec.infected(k);
        const auto closure = instant_closure(world.cloud(), target, susceptible, indicator_radius(cfg.kernel));
        if (!closure.empty())
          rec.cascade(source, target, t, world.cloud().col(target), static_cast<Index>(closure.size()) + 1);
        cascade_time = t;
      }
      if (!infect(target, t, source)) break;
    }
  }
  return rec.finish();
}

EpidemicOutcome run_diffusion(const ScenarioConfig& cfg, std::uint64_t replicate) {
  return run_diffusion(cfg, replicate, sample_cloud(checked(cfg), replicate));
}

EpidemicOutcome run_diffusion(const ScenarioConfig& config, std::uint64_t replicate, PointCloud cloud) {
  const ScenarioConfig& cfg = checked(config);
  check_cloud(cfg, cloud);
  const Index n = cloud.cols();
  const int d = cfg.dim;
  Recorder rec(cfg, n);
  const double dt = cfg.numerics.effective_dt();
  const double reach = interaction_radius(cfg);
  const double limit = cfg.box_half_width - reach;

  std::vector<PathCursor> cursors;
  cursors.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    cursors.emplace_back(cfg.diffusion, d, cfg.numerics.dt, cfg.numerics.refine_levels, cfg.seed,
                         StreamKey{replicate, static_cast<std::uint64_t>(i), Purpose::Path, 0});
  }
  enum class State : char { Susceptible, Infected, Removed };
  std::vector<State> state(static_cast<std::size_t>(n), State::Susceptible);
  std::vector<double> removal_time(static_cast<std::size_t>(n), kInf);
  std::vector<Index> active;
  PointCloud position = cloud;

  auto infect = [&](Index j, double t, Index parent) {
    const auto js = static_cast<std::size_t>(j);
    state[js] = State::Infected;
    removal_time[js] = t + sample_lifetime(cfg.alpha, Stream(cfg.seed, {replicate, static_cast<std::uint64_t>(j),
                                                                        Purpose::Lifetime, 0}));
    active.push_back(j);
    rec.infect(j, t, parent, position.col(j));
    if (position.col(j).cwiseAbs().maxCoeff() >= limit) rec.censor(j, t, position.col(j));
  };

  infect(0, 0.0, -1);
  const auto max_steps = static_cast<Index>(std::ceil(cfg.numerics.max_time / dt));
  for (Index k = 0; !rec.should_stop(); ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k > max_steps) {
      rec.censor(active.front(), t, position.col(active.front()));
      break;
    }
    if (k > 0) {
      for (Index i = 0; i < n; ++i) {
        if (state[static_cast<std::size_t>(i)] == State::Removed) continue;
        position.col(i) = cloud.col(i) + cursors[static_cast<std::size_t>(i)].advance_to(k);
      }
    }
    std::erase_if(active, [&](Index i) {
      const auto is = static_cast<std::size_t>(i);
      if (removal_time[is] > t) return false;
      state[is] = State::Removed;
      rec.remove(i, t, position.col(i));
      return true;
    });
    if (active.empty()) break;
    std::sort(active.begin(), active.end());
    for (Index i : active) {
      if (position.col(i).cwiseAbs().maxCoeff() >= limit) rec.censor(i, t, position.col(i));
    }
    if (rec.should_stop()) break;

    std::vector<Index> susceptible;
    for (Index i = 0; i < n; ++i)
      if (state[static_cast<std::size_t>(i)] == State::Susceptible) susceptible.push_back(i);
    if (susceptible.empty()) continue;
    const SpatialGrid grid(position, reach, susceptible);

    if (cfg.infinite_rho()) {
      // Contacts at the current positions, closed under chains of newly
      // infected particles, processed in (source, target) order.
      const double radius = indicator_radius(cfg.kernel);
      std::priority_queue<std::pair<Index, Index>, std::vector<std::pair<Index, Index>>, std::greater<>> pending;
      auto collect = [&](Index i) {
        grid.for_each_within(position.col(i), radius, [&](Index j) {
          if (state[static_cast<std::size_t>(j)] == State::Susceptible) pending.emplace(i, j);
        });
      };
      for (Index i : active) collect(i);
      while (!pending.empty() && !rec.should_stop()) {
        const auto [source, target] = pending.top();
        pending.pop();
        if (state[static_cast<std::size_t>(target)] != State::Susceptible) continue;
        infect(target, t, source);
        collect(target);
      }
    } else {
      std::vector<Index> winner(static_cast<std::size_t>(n), -1);
      for (Index i : active) {
        const Point here = position.col(i);
        grid.for_each_within(here, reach, [&](Index j) {
          if (winner[static_cast<std::size_t>(j)] >= 0) return;
          const double exponent =
              dt * cfg.rho * kernel_eval_sq(cfg.kernel, (position.col(j) - here).squaredNorm());
          if (exponent <= 0.0) return;
          const Stream trial(cfg.seed, {replicate, static_cast<std::uint64_t>(i), Purpose::Infection,
                                        static_cast<std::uint64_t>(j)});
          if (trial.uniform_at(static_cast<std::uint64_t>(k)) < -std::expm1(-exponent))
            winner[static_cast<std::size_t>(j)] = i;
        });
      }
      for (Index j : susceptible) {
        const Index source = winner[static_cast<std::size_t>(j)];
        if (source >= 0 && !rec.should_stop()) infect(j, t + dt, source);
      }
    }
  }
  return rec.finish();
}

EpidemicOutcome run_scenario(const ScenarioConfig& cfg, std::uint64_t replicate) {
  if (cfg.model == Model::Diffusion) return run_diffusion(cfg, replicate);
  if (cfg.engine == DelayedEngine::Chronological) return run_delayed_chronological(cfg, replicate);
  return run_delayed_percolation(cfg, replicate).outcome;
}

std::string event_type_name(EventType type) {
  switch (type) {
    case EventType::Infection:
      return "infection";
    case EventType::Removal:
      return "removal";
    case EventType::Cascade:
      return "cascade";
    case EventType::Censored:
      return "censored";
  }
  return "?";
}

void write_event_log(const EpidemicOutcome& outcome, std::ostream& out) {
  for (const auto& e : outcome.events) {
    nlohmann::json j;
    j["event"] = event_type_name(e.type);
    j["time"] = e.time;
    j["source"] = e.source;
    j["target"] = e.target;
    j["position"] = std::vector<double>(e.position.data(), e.position.data() + e.position.size());
    if (e.type == EventType::Cascade) j["count"] = e.count;
    out << j.dump() << '\n';
  }
}

}  // namespace epidiff
