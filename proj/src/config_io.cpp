// Copyright 2026 The epidiff Authors.
// SPDX-License-Identifier: Apache-2.0
#include "epidiff/config_io.hpp"

#include <fstream>
#include <sstream>

namespace epidiff {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Point point_from_json(const json& j) {
  Point p(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p(static_cast<Index>(i)) = j.at(i).get<double>();
  return p;
}

json point_to_json(const Point& p) {
  json out = json::array();
  for (Index i = 0; i < p.size(); ++i) out.push_back(p(i));
  return out;
}

Square square_from_json(const json& j) {
  const auto n = static_cast<Index>(j.size());
  Square m(n, n);
  for (Index r = 0; r < n; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Index>(row.size()) != n) throw std::invalid_argument("matrix rows must be square");
    for (Index c = 0; c < n; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

json square_to_json(const Square& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

KernelSpec kernel_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "unit_ball") return KernelSpec::unit_ball();
  if (type == "ball") return KernelSpec::ball(j.at("radius").get<double>());
  if (type == "gaussian") return KernelSpec::gaussian(j.at("scale").get<double>());
  if (type == "radial_table") {
    return KernelSpec::table(j.at("radii").get<std::vector<double>>(), j.at("values").get<std::vector<double>>(),
                             j.at("mu_max").get<double>(), j.value("radially_decreasing", false));
  }
  throw std::invalid_argument("kernel.type: unknown kernel '" + type + "'");
}

json kernel_to_json(const KernelSpec& k) {
  return std::visit(Overloaded{
                        [](const UnitBallIndicator&) { return json{{"type", "unit_ball"}}; },
                        [](const BallIndicator& b) { return json{{"type", "ball"}, {"radius", b.radius}}; },
                        [](const GaussianRadial& g) { return json{{"type", "gaussian"}, {"scale", g.scale}}; },
                        [](const RadialTable& t) {
                          return json{{"type", "radial_table"},
                                      {"radii", t.radii},
                                      {"values", t.values},
                                      {"mu_max", t.mu_max},
                                      {"radially_decreasing", t.radially_decreasing}};
                        },
                    },
                    k.variant);
}

DiffusionSpec diffusion_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "brownian") return DiffusionSpec::brownian();
  if (type == "brownian_drift") return DiffusionSpec::brownian_with_drift(point_from_json(j.at("drift")));
  if (type == "ou") return DiffusionSpec::ornstein_uhlenbeck(square_from_json(j.at("matrix")));
  if (type == "affine") {
    return DiffusionSpec::affine(square_from_json(j.at("drift_matrix")), point_from_json(j.at("drift_offset")),
                                 square_from_json(j.at("sigma")));
  }
  throw std::invalid_argument("diffusion.type: unknown diffusion '" + type + "'");
}

json diffusion_to_json(const DiffusionSpec& d) {
  return std::visit(Overloaded{
                        [](const StandardBrownian&) { return json{{"type", "brownian"}}; },
                        [](const BrownianWithDrift& b) {
                          return json{{"type", "brownian_drift"}, {"drift", point_to_json(b.drift)}};
                        },
                        [](const OrnsteinUhlenbeck& ou) {
                          return json{{"type", "ou"}, {"matrix", square_to_json(ou.matrix)}};
                        },
                        [](const GeneralSDE& g) {
                          if (!g.affine) return json{{"type", "general"}};
                          return json{{"type", "affine"},
                                      {"drift_matrix", square_to_json(g.affine->drift_matrix)},
                                      {"drift_offset", point_to_json(g.affine->drift_offset)},
                                      {"sigma", square_to_json(g.affine->sigma)}};
                        },
                    },
                    d.variant);
}

json parse_scalar(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json(text);
  }
}

}  // namespace

json rho_to_json(double rho) { return rho == kInf ? json("inf") : json(rho); }

double rho_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "INFINITE" || s == "infinity") return kInf;
    throw std::invalid_argument("rho: expected a number or \"inf\", got '" + s + "'");
  }
  return j.get<double>();
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig cfg;
  if (j.contains("model")) {
    const auto m = j.at("model").get<std::string>();
    if (m == "delayed") cfg.model = Model::Delayed;
    else if (m == "diffusion") cfg.model = Model::Diffusion;
    else throw std::invalid_argument("model: expected \"delayed\" or \"diffusion\"");
  }
  if (j.contains("engine")) {
    const auto e = j.at("engine").get<std::string>();
    if (e == "percolation") cfg.engine = DelayedEngine::Percolation;
    else if (e == "chronological") cfg.engine = DelayedEngine::Chronological;
    else throw std::invalid_argument("engine: expected \"percolation\" or \"chronological\"");
  }
  cfg.dim = j.value("d", cfg.dim);
  cfg.lambda = j.value("lambda", cfg.lambda);
  if (j.contains("rho")) cfg.rho = rho_from_json(j.at("rho"));
  cfg.alpha = j.value("alpha", cfg.alpha);
  if (j.contains("kernel")) cfg.kernel = kernel_from_json(j.at("kernel"));
  if (j.contains("diffusion")) cfg.diffusion = diffusion_from_json(j.at("diffusion"));
  cfg.box_half_width = j.value("box_half_width", cfg.box_half_width);
  if (j.contains("numerics")) {
    const auto& n = j.at("numerics");
    cfg.numerics.dt = n.value("dt", cfg.numerics.dt);
    cfg.numerics.refine_levels = n.value("refine_levels", cfg.numerics.refine_levels);
    cfg.numerics.bridge_correction = n.value("bridge_correction", cfg.numerics.bridge_correction);
    cfg.numerics.max_time = n.value("max_time", cfg.numerics.max_time);
  }
  if (j.contains("proxy")) {
    const auto& p = j.at("proxy");
    cfg.proxy.n_max = p.value("n_max", cfg.proxy.n_max);
    cfg.proxy.g_max = p.value("g_max", cfg.proxy.g_max);
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.stop_at_thresholds = j.value("stop_at_thresholds", cfg.stop_at_thresholds);
  cfg.record_events = j.value("record_events", cfg.record_events);
  return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
  return json{
      {"model", model_name(cfg.model)},
      {"engine", cfg.engine == DelayedEngine::Percolation ? "percolation" : "chronological"},
      {"d", cfg.dim},
      {"lambda", cfg.lambda},
      {"rho", rho_to_json(cfg.rho)},
      {"alpha", cfg.alpha},
      {"kernel", kernel_to_json(cfg.kernel)},
      {"diffusion", diffusion_to_json(cfg.diffusion)},
      {"box_half_width", cfg.box_half_width},
      {"numerics",
       {{"dt", cfg.numerics.dt},
        {"refine_levels", cfg.numerics.refine_levels},
        {"bridge_correction", cfg.numerics.bridge_correction},
        {"max_time", cfg.numerics.max_time}}},
      {"proxy", {{"n_max", cfg.proxy.n_max}, {"g_max", cfg.proxy.g_max}}},
      {"seed", cfg.seed},
      {"stop_at_thresholds", cfg.stop_at_thresholds},
      {"record_events", cfg.record_events},
  };
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
  return config_from_json(json::parse(in));
}

ScenarioConfig apply_overrides(const ScenarioConfig& cfg, const std::vector<std::string>& overrides) {
  json j = config_to_json(cfg);
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override '" + item + "' is not key=value");
    std::string pointer = "/" + item.substr(0, eq);
    for (auto& c : pointer) {
      if (c == '.') c = '/';
    }
    j[json::json_pointer(pointer)] = parse_scalar(item.substr(eq + 1));
  }
  return config_from_json(j);
}

}  // namespace epidiff
