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
#include <string>
#include <vector>

#include "feller/symbol.hpp"
#include "feller/types.hpp"

namespace feller {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Scheme { exact_levy, euler_frozen };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SeedLineage {
  std::uint64_t root_seed = 0;
  std::uint32_t stream_id = 0;  // random stream; path ids are the row indices
};

/**
 * Simulated trajectories on a common time grid. Row p of `positions` holds
 * path p as (t_0 coordinates, t_1 coordinates, ...).
 */
struct PathEnsemble {
  int dimension = 1;
  std::vector<double> time_grid;  // stored times, time_grid[0] = 0
  Vector start;
  RowMatrix positions;
  Scheme scheme = Scheme::exact_levy;
  SeedLineage lineage;
  int decimation = 1;       // simulation steps per stored time
  double step = 0.0;        // largest simulation step
  bool symmetrized = false;  // built by symmetrize_paths
  std::uint32_t mirror_stream_id = 0;
  std::string model;

  std::size_t n_paths() const { return static_cast<std::size_t>(positions.rows()); }
  std::size_t n_times() const { return time_grid.size(); }

  /* Index of time t on the stored grid; PreconditionError if t is not a grid point. */
  std::size_t time_index(double t) const;

  double coordinate(std::size_t path, std::size_t k, int i) const {
    return positions(static_cast<Eigen::Index>(path), static_cast<Eigen::Index>(k) * dimension + i);
  }

  Vector state(std::size_t path, std::size_t k) const {
    return positions.row(static_cast<Eigen::Index>(path)).segment(static_cast<Eigen::Index>(k) * dimension, dimension)
        .transpose();
  }
};

struct SimulationOptions {
  std::size_t n_paths = 1000;
  std::uint64_t seed = 0;
  std::uint32_t stream_id = 0;
  int decimation = 1;
  double h_max = 1e-3;  // largest admissible Euler step
  unsigned threads = 0;  // 0: hardware concurrency
};

/* 0, h, 2h, ..., T (T must be a whole number of steps up to 1e-9 relative). */
std::vector<double> uniform_grid(double horizon, double h);

/* Exact increments of an x-independent exponent; ConfigError if the model has no samplable exponent. */
PathEnsemble simulate_levy(const SymbolModel& model, const Vector& x0, const std::vector<double>& time_grid,
                           const SimulationOptions& opts);

/* Frozen-coefficient Euler scheme X + h^(1/alpha(X)) S on a uniform grid with h <= h_max. */
PathEnsemble simulate_stable_like(const StableLikeSpec& spec, const Vector& x0, const std::vector<double>& time_grid,
                                  const SimulationOptions& opts);

/* Dispatches on the model: samplable exponents go to simulate_levy, stable-like models to the Euler scheme. */
PathEnsemble simulate(const SymbolModel& model, const Vector& x0, const std::vector<double>& time_grid,
                      const SimulationOptions& opts);

/**
 * Local symmetrization (X + 2 x0 - X*) / 2 of a base ensemble and an
 * independent mirror. Grids, starts and path counts must agree; unless
 * `allow_shared_streams`, the two ensembles must come from different random
 * streams.
 */
PathEnsemble symmetrize_paths(const PathEnsemble& base, const PathEnsemble& mirror,
                              bool allow_shared_streams = false);

}  // namespace feller
