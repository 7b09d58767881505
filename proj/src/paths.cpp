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

#include "feller/paths.hpp"

#include <cmath>
#include <sstream>

#include "feller/parallel.hpp"
#include "feller/rng.hpp"
#include "feller/stable.hpp"

namespace feller {

std::string to_string(Scheme s) { return s == Scheme::exact_levy ? "exact_levy" : "euler_frozen"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "exact_levy") return Scheme::exact_levy;
  if (s == "euler_frozen") return Scheme::euler_frozen;
  throw ConfigError("unknown scheme '" + s + "'");
}

std::size_t PathEnsemble::time_index(double t) const {
  for (std::size_t k = 0; k < time_grid.size(); ++k)
    if (std::abs(time_grid[k] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return k;
  std::ostringstream msg;
  msg << "time " << t << " is not on the ensemble grid";
  throw PreconditionError(msg.str());
}

std::vector<double> uniform_grid(double horizon, double h) {
  if (!(horizon >= 0.0) || !(h > 0.0)) throw ConfigError("uniform_grid needs T >= 0 and h > 0");
  const double steps = horizon / h;
  const auto m = static_cast<std::size_t>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(m)) > 1e-9 * std::max(1.0, steps))
    throw ConfigError("horizon is not a whole number of steps");
  std::vector<double> grid(m + 1);
  for (std::size_t k = 0; k <= m; ++k) grid[k] = static_cast<double>(k) * h;
  grid[m] = horizon;
  return grid;
}

namespace {

void validate_grid(const std::vector<double>& grid, int decimation) {
  if (grid.empty() || grid.front() != 0.0) throw ConfigError("time grid must start at 0");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw ConfigError("time grid must be strictly increasing");
  if (decimation < 1) throw ConfigError("decimation must be at least 1");
  if ((grid.size() - 1) % static_cast<std::size_t>(decimation) != 0)
    throw ConfigError("number of steps must be a multiple of the decimation factor");
}

PathEnsemble allocate(int d, const Vector& x0, const std::vector<double>& grid, const SimulationOptions& opts) {
  if (x0.size() != d) throw ConfigError("start point has the wrong dimension");
  if (opts.n_paths == 0) throw ConfigError("n_paths must be positive");
  validate_grid(grid, opts.decimation);
  PathEnsemble e;
  e.dimension = d;
  e.start = x0;
  e.decimation = opts.decimation;
  for (std::size_t k = 0; k < grid.size(); k += static_cast<std::size_t>(opts.decimation)) e.time_grid.push_back(grid[k]);
  e.positions.resize(static_cast<Eigen::Index>(opts.n_paths), static_cast<Eigen::Index>(e.time_grid.size()) * d);
  e.lineage = {opts.seed, opts.stream_id};
  for (std::size_t k = 1; k < grid.size(); ++k) e.step = std::max(e.step, grid[k] - grid[k - 1]);
  return e;
}

/* Drives one path per index; `advance` maps (state, step index, step length, rng) to the next state. */
template <typename Advance>
void run_paths(PathEnsemble& e, const std::vector<double>& grid, const SimulationOptions& opts, Advance advance) {
  const int d = e.dimension;
  parallel_for(opts.n_paths, opts.threads, [&](std::size_t begin, std::size_t end) {
    Vector x(d);
    for (std::size_t p = begin; p < end; ++p) {
      x = e.start;
      auto row = e.positions.row(static_cast<Eigen::Index>(p));
      row.segment(0, d) = x.transpose();
      std::size_t stored = 1;
      for (std::size_t k = 1; k < grid.size(); ++k) {
        CounterRng rng(opts.seed, opts.stream_id, static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(k));
        advance(x, grid[k] - grid[k - 1], rng);
        if (k % static_cast<std::size_t>(opts.decimation) == 0) {
          row.segment(static_cast<Eigen::Index>(stored) * d, d) = x.transpose();
          ++stored;
        }
      }
    }
  });
}

}  // namespace

PathEnsemble simulate_levy(const SymbolModel& model, const Vector& x0, const std::vector<double>& time_grid,
                           const SimulationOptions& opts) {
  const auto& ex = model.levy_exponent();
  if (!ex) throw ConfigError("model '" + model.name() + "' is not in the exactly samplable Levy family");
  const LevyExponent e = *ex;
  const int d = model.dimension();
  PathEnsemble out = allocate(d, x0, time_grid, opts);
  out.scheme = Scheme::exact_levy;
  out.model = model.name();
  const bool has_drift = e.drift.size() == d && !e.drift.isZero(0.0);
  run_paths(out, time_grid, opts, [&](Vector& x, double h, CounterRng& rng) {
    if (has_drift) x += h * e.drift;
    if (e.diffusion > 0.0) {
      const double s = std::sqrt(2.0 * e.diffusion * h);
      for (int i = 0; i < d; ++i) x(i) += s * rng.normal();
    }
    if (e.stable_scale > 0.0) x += std::pow(e.stable_scale * h, 1.0 / e.stable_index) * stable_vector(e.stable_index, d, rng);
    if (e.jump_rate > 0.0) {
      const auto jumps = rng.poisson(e.jump_rate * h);
      if (jumps > 0) {
        const double s = e.jump_scale * std::sqrt(static_cast<double>(jumps));
        for (int i = 0; i < d; ++i) x(i) += s * rng.normal();
      }
    }
  });
  return out;
}

PathEnsemble simulate_stable_like(const StableLikeSpec& spec, const Vector& x0, const std::vector<double>& time_grid,
                                  const SimulationOptions& opts) {
  if (!spec.alpha) throw ConfigError("stable-like model needs alpha(x)");
  const int d = spec.dimension;
  PathEnsemble out = allocate(d, x0, time_grid, opts);
  const double h0 = time_grid.size() > 1 ? time_grid[1] - time_grid[0] : 0.0;
  for (std::size_t k = 1; k < time_grid.size(); ++k)
    if (std::abs((time_grid[k] - time_grid[k - 1]) - h0) > 1e-9 * h0)
      throw ConfigError("stable-like simulation needs a uniform time grid");
  if (h0 > opts.h_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "step " << h0 << " exceeds h_max = " << opts.h_max;
    throw ConfigError(msg.str());
  }
  out.scheme = Scheme::euler_frozen;
  out.model = "stable_like";
  const double lo = spec.alpha_min, hi = spec.alpha_max;
  run_paths(out, time_grid, opts, [&](Vector& x, double h, CounterRng& rng) {
    const double a = spec.alpha(x);
    if (!(a >= lo - 1e-12 && a <= hi + 1e-12)) throw DomainError("alpha(x) left its declared range during simulation");
    x += std::pow(h, 1.0 / a) * stable_vector(a, d, rng);
  });
  return out;
}

PathEnsemble simulate(const SymbolModel& model, const Vector& x0, const std::vector<double>& time_grid,
                      const SimulationOptions& opts) {
  if (model.levy_exponent()) return simulate_levy(model, x0, time_grid, opts);
  if (const auto& s = model.stable_like()) return simulate_stable_like(*s, x0, time_grid, opts);
  throw ConfigError("model '" + model.name() + "' has no simulation scheme (Levy exponent or stable-like index)");
}

PathEnsemble symmetrize_paths(const PathEnsemble& base, const PathEnsemble& mirror, bool allow_shared_streams) {
  if (base.dimension != mirror.dimension) throw PreconditionError("symmetrize_paths: dimension mismatch");
  if (base.time_grid != mirror.time_grid) throw PreconditionError("symmetrize_paths: mismatched time grids");
  if (base.n_paths() != mirror.n_paths()) throw PreconditionError("symmetrize_paths: mismatched path counts");
  if (base.start != mirror.start) throw PreconditionError("symmetrize_paths: mismatched start points");
  if (!allow_shared_streams && base.lineage.root_seed == mirror.lineage.root_seed &&
      base.lineage.stream_id == mirror.lineage.stream_id)
    throw PreconditionError("symmetrize_paths: base and mirror share a random stream");
  PathEnsemble out = base;
  out.symmetrized = true;
  out.mirror_stream_id = mirror.lineage.stream_id;
  out.model = "symmetrized(" + base.model + ")";
  const int d = base.dimension;
  RowMatrix shift(1, out.positions.cols());
  for (Eigen::Index c = 0; c < shift.cols(); ++c) shift(0, c) = base.start(c % d);
  out.positions = 0.5 * (base.positions - mirror.positions);
  out.positions.rowwise() += shift.row(0);
  // Time zero holds x0 exactly.
  for (Eigen::Index p = 0; p < out.positions.rows(); ++p) out.positions.row(p).head(d) = base.start.transpose();
  return out;
}

}  // namespace feller
