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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feller/symbol.hpp"

namespace feller {

enum class Verdict { holds, fails, inconclusive };

std::string to_string(Verdict v);

/* Sampling grid: explicit points, one per column. */
using PointGrid = Matrix;

/* n^d points of the box [-half_width, half_width]^d, one per column. */
PointGrid box_grid(int d, double half_width, int n);

/* Points along each axis and the diagonal direction at the given radii. */
PointGrid radial_grid(int d, const std::vector<double>& radii);

struct BoundedCoefficientsResult {
  double c_est = 0.0;          // sup |p(x, xi)| / (1 + |xi|^2) over the grid
  double max_at_zero = 0.0;    // sup |p(x, 0)|
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::pair<double, double>> growth_trace;  // (grid radius, c_est restricted to that radius)
  std::string note;
};

/**
 * Bounded-coefficient check: c_est must stay finite and stop growing as the
 * xi-grid is restricted to nested radii; p(x, 0) must vanish when the model is
 * declared conservative.
 */
BoundedCoefficientsResult check_bounded_coefficients(const SymbolModel& model, const PointGrid& x_grid,
                                                     const PointGrid& xi_grid);

struct SectorResult {
  double c = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::optional<Vector> witness;  // xi where the ratio is maximal, or where inf Re p = 0 with Im != 0
  std::string note;
};

SectorResult check_sector_condition(const SymbolModel& model, const PointGrid& x_grid, const PointGrid& xi_grid);

struct FellerDecayResult {
  std::vector<double> radii;
  std::vector<double> s;  // sup_{|x|<=r_k} sup_{|xi|<=1/r_k} |p(x, xi)|
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

/* `points_per_axis` controls the grids of the x-ball and the xi-ball. */
FellerDecayResult check_feller_decay(const SymbolModel& model, const std::vector<double>& radii,
                                     double tol = 1e-3, int points_per_axis = 41);

struct SubadditivityResult {
  Verdict verdict = Verdict::inconclusive;
  std::size_t samples = 0;
  std::optional<std::array<Vector, 3>> counterexample;  // x, xi1, xi2
  double worst_excess = 0.0;  // largest sqrt(p(xi1+xi2)) - sqrt(p(xi1)) - sqrt(p(xi2)), relative
  std::string note;
};

/**
 * Random test of sqrt(Re p(x, xi1 + xi2)) <= sqrt(Re p(x, xi1)) + sqrt(Re p(x, xi2)).
 * Frequencies have log-uniform magnitudes in [1e-3, 1e3]; states uniform in [-x_box, x_box]^d.
 * Includes the doubling case xi1 = xi2 in every fourth sample.
 */
SubadditivityResult check_sqrt_subadditivity(const SymbolModel& model, std::size_t sample_count, std::uint64_t seed,
                                             double x_box = 5.0, double rel_tol = 1e-9);

}  // namespace feller
