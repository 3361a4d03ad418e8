// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epidiff/config.hpp"
#include "epidiff/path.hpp"
#include "epidiff/percolation.hpp"
#include "epidiff/types.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace epidiff {

enum class VerdictKind { ExtinctWithSize, SurvivedProxy, BoundaryCensored };
enum class ProxyReason { None, InfectionCount, Generation };

struct Verdict {
  VerdictKind kind = VerdictKind::ExtinctWithSize;
  Index size = 0;
  ProxyReason reason = ProxyReason::None;

  std::string describe() const;
  bool operator==(const Verdict&) const = default;
};

enum class EventType { Infection, Removal, Cascade, Censored };

struct Event {
  EventType type = EventType::Infection;
  double time = 0.0;
  Index source = -1;
  Index target = -1;
  Point position;
  /// Cascade size for Cascade events.
  Index count = 0;
};

/// Result of one run. Per-particle vectors are indexed by particle; -1 / inf
/// mark particles that were never infected.
struct EpidemicOutcome {
  Index particle_count = 0;
  /// Infected particles in infection order; starts with the origin 0.
  std::vector<Index> infected;
  std::vector<Index> parent;
  /// Parent's generation + 1; the origin is generation 0.
  std::vector<int> generation;
  std::vector<double> infection_time;
  /// Graph distance from the origin in the revealed infection graph
  /// (percolation engine only; empty otherwise).
  std::vector<int> graph_depth;
  bool censored = false;
  ProxyReason threshold = ProxyReason::None;
  Verdict verdict;
  std::vector<Event> events;

  Index size() const { return static_cast<Index>(infected.size()); }
  bool is_infected(Index i) const { return generation[static_cast<std::size_t>(i)] >= 0; }
  int max_generation() const;
  /// |I_n| for n = 0..max, by parent generation, or by graph depth when
  /// `use_graph_depth` is set.
  std::vector<Index> generation_sizes(bool use_graph_depth = false) const;
};

/// Directed graph of revealed infection sets: edge i -> j with label tau_ij
/// exists iff tau_ij < T_i. Only particles whose set was revealed have rows.
struct InfectionGraph {
  struct Edge {
    Index target;
    double delay;
  };
  std::vector<double> lifetime;
  std::vector<std::vector<Edge>> out_edges;
  std::vector<bool> revealed;
};

struct DelayedRun {
  EpidemicOutcome outcome;
  InfectionGraph graph;
};

struct Contact {
  Index target;
  double delay;
  bool operator==(const Contact&) const = default;
};

/// Randomness and geometry of the delayed model for one replicate: the
/// particle cloud, and per particle its lifetime, lazily built path and
/// keyed contact streams. Both delayed engines read everything from here,
/// which is what couples them.
class DelayedWorld {
 public:
  DelayedWorld(const ScenarioConfig& cfg, std::uint64_t replicate);
  /// Uses the given positions (column 0 is the initial infective).
  DelayedWorld(const ScenarioConfig& cfg, std::uint64_t replicate, PointCloud cloud);

  const ScenarioConfig& config() const { return cfg_; }
  std::uint64_t replicate() const { return replicate_; }
  const PointCloud& cloud() const { return cloud_; }
  Index size() const { return cloud_.cols(); }

  double lifetime(Index i) const;
  DiscretizedPath& path(Index i);

  /// {(j, tau_ij) : include(j), tau_ij < T_i}, sorted by target.
  std::vector<Contact> infection_set_for(Index i, const std::function<bool(Index)>& include);

  /// True if i's trajectory over its lifetime comes within one interaction
  /// radius of the box boundary, or its lifetime runs past the path horizon.
  bool touches_boundary(Index i);

 private:
  std::optional<double> contact_delay(Index i, Index j);

  ScenarioConfig cfg_;
  std::uint64_t replicate_;
  PointCloud cloud_;
  double reach_;
  std::unique_ptr<SpatialGrid> grid_;
  std::vector<std::unique_ptr<DiscretizedPath>> paths_;
};

/// Lazy Dijkstra over the infection graph: J_i is revealed when i is reached,
/// ties in arrival time broken by (source, target).
DelayedRun run_delayed_percolation(const ScenarioConfig& cfg, std::uint64_t replicate);
DelayedRun run_delayed_percolation(DelayedWorld& world);

/// Event-driven simulation in time order with infection and removal events.
EpidemicOutcome run_delayed_chronological(const ScenarioConfig& cfg, std::uint64_t replicate);
EpidemicOutcome run_delayed_chronological(DelayedWorld& world);

/// Time-stepped simulation where every particle moves from time 0.
EpidemicOutcome run_diffusion(const ScenarioConfig& cfg, std::uint64_t replicate);
EpidemicOutcome run_diffusion(const ScenarioConfig& cfg, std::uint64_t replicate, PointCloud cloud);

/// Dispatches on cfg.model and cfg.engine.
EpidemicOutcome run_scenario(const ScenarioConfig& cfg, std::uint64_t replicate);

Verdict survival_proxy(const EpidemicOutcome& outcome, const ProxyThresholds& thresholds);

std::string event_type_name(EventType type);
/// One JSON object per line: event, time, source, target, position.
void write_event_log(const EpidemicOutcome& outcome, std::ostream& out);

}  // namespace epidiff
