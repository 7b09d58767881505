/*
 * Copyright (C) 2026 The feller-toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "feller/config.hpp"

#include <fstream>
#include <set>

namespace feller {

namespace {

using nlohmann::json;

/* Reads the keys of one object and rejects anything it did not ask for. */
class Section {
public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError(name_ + " must be an object");
  }

  template <typename T> void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(name_ + "." + key + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    if (!j_.contains(key)) return nullptr;
    seen_.insert(key);
    return &j_.at(key);
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw ConfigError("unknown key " + name_ + "." + item.key());
  }

private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void read_model(const json& j, ModelConfig& m) {
  Section s(j, "model");
  s.get("kind", m.kind);
  s.get("dimension", m.dimension);
  s.get("alpha", m.alpha);
  s.get("alpha_expr", m.alpha_expr);
  s.get("alpha_min", m.alpha_min);
  s.get("alpha_max", m.alpha_max);
  s.get("smooth", m.smooth);
  s.get("rate", m.rate);
  s.get("jump_scale", m.jump_scale);
  s.get("drift", m.drift);
  s.get("diffusion", m.diffusion);
  s.get("stable_scale", m.stable_scale);
  s.get("stable_index", m.stable_index);
  s.get("re", m.re_expr);
  s.get("im", m.im_expr);
  s.get("symmetrize", m.symmetrize);
  s.finish();
  static const std::set<std::string> kinds{"brownian", "alpha_stable", "cauchy", "compound_poisson",
                                           "levy", "stable_like", "closed_form"};
  require(kinds.count(m.kind) > 0, "model.kind '" + m.kind + "' is not supported");
  require(m.dimension >= 1 && m.dimension <= 3, "model.dimension must be 1, 2 or 3");
  if (m.kind == "alpha_stable") require(m.alpha > 0.0 && m.alpha <= 2.0, "model.alpha must lie in (0, 2]");
  if (m.kind == "compound_poisson") require(m.rate >= 0.0 && m.jump_scale >= 0.0, "model.rate and model.jump_scale must be >= 0");
  if (m.kind == "stable_like") {
    require(!m.alpha_expr.empty(), "model.alpha_expr is required for stable_like");
    require(m.alpha_min > 0.0 && m.alpha_min <= m.alpha_max && m.alpha_max <= 2.0,
            "stable_like needs 0 < alpha_min <= alpha_max <= 2");
  }
  if (m.kind == "levy") {
    require(m.drift.empty() || static_cast<int>(m.drift.size()) == m.dimension, "model.drift has the wrong length");
    require(m.diffusion >= 0.0 && m.stable_scale >= 0.0 && m.rate >= 0.0 && m.jump_scale >= 0.0,
            "levy coefficients must be nonnegative");
    require(m.stable_index > 0.0 && m.stable_index <= 2.0, "model.stable_index must lie in (0, 2]");
  }
  if (m.kind == "closed_form") require(!m.re_expr.empty(), "model.re is required for closed_form");
}

void read_envelope(const json& j, EnvelopeConfig& e, int d) {
  Section s(j, "envelope");
  s.get("x_lower", e.x_lower);
  s.get("x_upper", e.x_upper);
  s.get("resolution", e.resolution);
  s.get("tail", e.tail);
  s.get("force_grid", e.force_grid);
  s.finish();
  require(e.x_lower.size() == e.x_upper.size(), "envelope.x_lower and envelope.x_upper must have the same length");
  require(e.x_lower.empty() || static_cast<int>(e.x_lower.size()) == d, "envelope box has the wrong dimension");
  for (std::size_t i = 0; i < e.x_lower.size(); ++i) require(e.x_lower[i] < e.x_upper[i], "envelope box is empty");
  require(e.resolution == 0 || (e.resolution >= 3 && e.resolution <= 4096), "envelope.resolution must be 0 or in [3, 4096]");
  tail_flag_from_string(e.tail);
}

void read_criteria(const json& j, CriteriaConfig& c) {
  Section s(j, "criteria");
  s.get("model_checks", c.model_checks);
  s.get("ultracontractivity", c.ultracontractivity);
  s.get("transience", c.transience);
  s.get("local_times", c.local_times);
  s.get("heat_curve", c.heat_curve);
  s.get("exponent_fit", c.exponent_fit);
  s.get("occupation_bound", c.occupation_bound);
  s.get("transience_radius", c.transience_radius);
  s.get("occupation_radius", c.occupation_radius);
  s.get("ultracontractivity_radii", c.ultracontractivity_radii);
  s.get("heat_t", c.heat_t);
  s.get("rel_tol", c.rel_tol);
  s.get("abs_tol", c.abs_tol);
  s.finish();
  require(c.rel_tol > 0.0 && c.abs_tol > 0.0, "criteria.rel_tol and criteria.abs_tol must be positive");
  require(c.transience_radius > 0.0 && c.occupation_radius > 0.0, "criteria radii must be positive");
  for (double r : c.ultracontractivity_radii) require(r > 0.0, "ultracontractivity radii must be positive");
  for (double t : c.heat_t) require(t > 0.0, "criteria.heat_t values must be positive");
}

void read_simulation(const json& j, SimulationConfig& sim) {
  Section s(j, "simulation");
  s.get("x0", sim.x0);
  s.get("horizon", sim.horizon);
  s.get("h", sim.h);
  s.get("n_paths", sim.n_paths);
  if (const json* seed = s.child("seed"); seed && !seed->is_null()) {
    require(seed->is_number_unsigned() || (seed->is_number_integer() && seed->get<long long>() >= 0),
            "simulation.seed must be a nonnegative integer");
    sim.seed = seed->get<std::uint64_t>();
  }
  s.get("stream_id", sim.stream_id);
  s.get("decimation", sim.decimation);
  s.get("h_max", sim.h_max);
  s.get("csv", sim.csv);
  s.finish();
  require(sim.horizon > 0.0, "simulation.horizon must be positive");
  require(sim.h > 0.0 && sim.h <= sim.horizon, "simulation.h must lie in (0, horizon]");
  require(sim.n_paths >= 1 && sim.n_paths <= 100000000, "simulation.n_paths must lie in [1, 1e8]");
  require(sim.decimation >= 1, "simulation.decimation must be at least 1");
  require(sim.h_max > 0.0, "simulation.h_max must be positive");
}

void read_validation(const json& j, ValidationConfig& v) {
  Section s(j, "validation");
  s.get("ensemble", v.ensemble);
  s.get("t_set", v.t_set);
  s.get("xi_set", v.xi_set);
  s.get("char_bound", v.char_bound);
  s.get("symmetrization", v.symmetrization);
  s.get("generator", v.generator);
  s.get("generator_h", v.generator_h);
  s.get("generator_xi", v.generator_xi);
  s.get("generator_tolerance", v.generator_tolerance);
  s.get("occupation", v.occupation);
  s.get("occupation_horizon", v.occupation_horizon);
  s.get("occupation_h", v.occupation_h);
  s.get("occupation_paths", v.occupation_paths);
  s.get("occupation_xi", v.occupation_xi);
  if (const json* pts = s.child("exit_points")) {
    v.exit_points.clear();
    require(pts->is_array(), "validation.exit_points must be an array of [r, t] pairs");
    for (const auto& p : *pts) {
      require(p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number(),
              "validation.exit_points must be an array of [r, t] pairs");
      v.exit_points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  }
  s.finish();
  for (double t : v.t_set) require(t >= 0.0, "validation.t_set values must be >= 0");
  for (double h : v.generator_h) require(h > 0.0, "validation.generator_h values must be positive");
  require(v.generator_tolerance > 0.0, "validation.generator_tolerance must be positive");
  require(v.occupation_horizon > 0.0 && v.occupation_h > 0.0, "occupation horizon and step must be positive");
  require(v.occupation_paths >= 1, "validation.occupation_paths must be positive");
  for (const auto& [r, t] : v.exit_points) require(r > 0.0 && t >= 0.0, "exit points need r > 0 and t >= 0");
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c;
  Section s(doc, "config");
  if (const json* j = s.child("model")) read_model(*j, c.model);
  else throw ConfigError("config.model is required");
  if (const json* j = s.child("envelope")) read_envelope(*j, c.envelope, c.model.dimension);
  if (const json* j = s.child("criteria")) read_criteria(*j, c.criteria);
  if (const json* j = s.child("simulation")) read_simulation(*j, c.simulation);
  if (const json* j = s.child("validation")) read_validation(*j, c.validation);
  if (const json* j = s.child("output")) {
    Section o(*j, "output");
    o.get("directory", c.output_dir);
    o.finish();
  }
  s.get("threads", c.threads);
  s.finish();
  require(c.simulation.x0.empty() || static_cast<int>(c.simulation.x0.size()) == c.model.dimension,
          "simulation.x0 has the wrong dimension");
  c.echo = doc;
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::exception& ex) {
    throw ConfigError("config file " + file.string() + " is not valid JSON: " + ex.what());
  }
  return parse_config(doc);
}

SymbolModel build_model(const ModelConfig& m) {
  const int d = m.dimension;
  SymbolModel model = [&] {
    if (m.kind == "brownian") return brownian(d);
    if (m.kind == "alpha_stable") return alpha_stable(m.alpha, d);
    if (m.kind == "cauchy") return cauchy(d);
    if (m.kind == "compound_poisson") return compound_poisson(m.rate, m.jump_scale, d);
    if (m.kind == "levy") {
      LevyExponent e;
      e.dimension = d;
      if (!m.drift.empty()) e.drift = Eigen::Map<const Vector>(m.drift.data(), d);
      e.diffusion = m.diffusion;
      e.stable_scale = m.stable_scale;
      e.stable_index = m.stable_index;
      e.jump_rate = m.rate;
      e.jump_scale = m.jump_scale;
      return levy_symbol(e);
    }
    if (m.kind == "stable_like")
      return stable_like_symbol(stable_like_from_expression(d, m.alpha_expr, m.alpha_min, m.alpha_max, m.smooth));
    return closed_form_symbol(d, m.re_expr, m.im_expr);
  }();
  return m.symmetrize ? symmetrize(model) : model;
}

XDomain build_domain(const ExperimentConfig& c) {
  const int d = c.model.dimension;
  XDomain dom;
  if (c.envelope.x_lower.empty()) {
    dom.lower = Vector::Constant(d, -1.0);
    dom.upper = Vector::Constant(d, 1.0);
  } else {
    dom.lower = Eigen::Map<const Vector>(c.envelope.x_lower.data(), d);
    dom.upper = Eigen::Map<const Vector>(c.envelope.x_upper.data(), d);
  }
  dom.resolution = c.envelope.resolution;
  dom.tail = tail_flag_from_string(c.envelope.tail);
  return dom;
}

Vector start_point(const ExperimentConfig& c) {
  if (c.simulation.x0.empty()) return Vector::Zero(c.model.dimension);
  return Eigen::Map<const Vector>(c.simulation.x0.data(), c.model.dimension);
}

SimulationOptions simulation_options(const ExperimentConfig& c) {
  if (!c.simulation.seed) throw ConfigError("simulation.seed is required whenever paths are simulated");
  SimulationOptions o;
  o.n_paths = c.simulation.n_paths;
  o.seed = *c.simulation.seed;
  o.stream_id = c.simulation.stream_id;
  o.decimation = c.simulation.decimation;
  o.h_max = c.simulation.h_max;
  o.threads = c.threads;
  return o;
}

}  // namespace feller
