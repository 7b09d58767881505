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
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "feller/envelope.hpp"
#include "feller/paths.hpp"
#include "feller/symbol.hpp"

namespace feller {

/* Symbol declaration. `kind` selects which of the other fields are read. */
struct ModelConfig {
  std::string kind = "brownian";  // brownian, alpha_stable, cauchy, compound_poisson, levy, stable_like, closed_form
  int dimension = 1;
  double alpha = 1.5;
  std::string alpha_expr;  // stable_like
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  bool smooth = true;
  double rate = 1.0;  // compound_poisson and levy jumps
  double jump_scale = 1.0;
  std::vector<double> drift;  // levy
  double diffusion = 0.0;
  double stable_scale = 0.0;
  double stable_index = 2.0;
  std::string re_expr;  // closed_form
  std::string im_expr = "0";
  bool symmetrize = false;
};

struct EnvelopeConfig {
  std::vector<double> x_lower;  // empty: [-1, 1]^d
  std::vector<double> x_upper;
  int resolution = 0;
  std::string tail = "none";
  bool force_grid = false;
};

struct CriteriaConfig {
  bool model_checks = true;
  bool ultracontractivity = true;
  bool transience = true;
  bool local_times = true;
  bool heat_curve = true;
  bool exponent_fit = true;
  bool occupation_bound = true;
  double transience_radius = 1.0;
  double occupation_radius = 1.0;
  std::vector<double> ultracontractivity_radii;  // empty: 10^1 .. 10^8
  std::vector<double> heat_t;  // empty: logspace(-4, 4, 33)
  double rel_tol = 1e-8;   // quadrature tolerances for the improper integrals
  double abs_tol = 1e-12;
};

struct SimulationConfig {
  std::vector<double> x0;  // empty: origin
  double horizon = 1.0;
  double h = 1e-3;
  std::size_t n_paths = 1000;
  std::optional<std::uint64_t> seed;
  std::uint32_t stream_id = 0;
  int decimation = 1;
  double h_max = 1e-3;
  bool csv = false;
};

struct ValidationConfig {
  std::string ensemble;  // FLPE file; empty: simulate inline
  std::vector<double> t_set{0.0, 0.25, 0.5, 1.0};
  std::vector<double> xi_set{0.5, 1.0, 2.0, 4.0};
  bool char_bound = true;
  bool symmetrization = true;
  bool generator = true;
  std::vector<double> generator_h{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  std::vector<double> generator_xi{1.0, 2.0};
  double generator_tolerance = 0.05;
  bool occupation = true;
  double occupation_horizon = 14.0;
  double occupation_h = 0.01;
  std::size_t occupation_paths = 2000;
  std::vector<double> occupation_xi{0.0, 1.0, 2.0, 4.0};
  std::vector<std::pair<double, double>> exit_points{{0.5, 0.01}, {1.0, 0.01}, {1.0, 0.1}};
};

struct ExperimentConfig {
  ModelConfig model;
  EnvelopeConfig envelope;
  CriteriaConfig criteria;
  SimulationConfig simulation;
  ValidationConfig validation;
  std::string output_dir = "out";
  unsigned threads = 0;
  nlohmann::json echo;  // the document as read, for reports
};

/* Throws ConfigError on unknown keys, wrong types and out-of-range values. */
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& file);

SymbolModel build_model(const ModelConfig& m);
XDomain build_domain(const ExperimentConfig& c);
Vector start_point(const ExperimentConfig& c);
SimulationOptions simulation_options(const ExperimentConfig& c);

}  // namespace feller
