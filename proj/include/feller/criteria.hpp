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

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feller/envelope.hpp"
#include "feller/quadrature.hpp"
#include "feller/symbol.hpp"
#include "feller/symbol_checks.hpp"

namespace feller {

/* A bound that may be +infinity (flagged, never stored as an overflow value). */
struct BoundValue {
  double value = 0.0;
  bool infinite = false;
  std::optional<IntegralResult> evidence;
};

struct CriterionReport {
  std::string id;
  Verdict verdict = Verdict::inconclusive;
  std::optional<IntegralResult> integral;
  std::vector<std::pair<double, double>> trace;  // limit trace, e.g. (R_k, m_k)
  std::vector<std::pair<std::string, double>> parameters;  // configuration echo
  std::vector<std::string> notes;
  bool optimistic_caveat = false;
  double wall_seconds = 0.0;
};

/* exp(-(t / 16) q_inf(2 xi)). */
double char_fn_bound(const Envelope& env, double t, const Vector& xi);

/* (4 pi)^-d int exp(-(t / 16) q_inf(xi)) dxi. */
BoundValue heat_kernel_sup_bound(const Envelope& env, double t, const ShellOptions& opts = {});

struct UltracontractivityOptions {
  std::vector<double> radii;  // empty: 10^1 .. 10^8
  double threshold = 10.0;
  int trend_length = 3;
};

CriterionReport test_ultracontractivity(const Envelope& env, const UltracontractivityOptions& opts = {});

/**
 * Finiteness of int_{|xi| <= r} dxi / q_inf(xi). With `radial_shortcut` the
 * radial-envelope hypotheses are taken as declared and one r suffices.
 */
CriterionReport test_transience(const Envelope& env, double r, bool radial_shortcut = false,
                                const ShellOptions& opts = {});

/* Finiteness of int dxi / (1 + q_inf(xi)) over R^d. */
CriterionReport test_local_times(const Envelope& env, const ShellOptions& opts = {});

/* 4^(d+2) / (pi r)^d int_{|xi| <= 2 r sqrt(d)} dxi / q_inf(2 xi). */
BoundValue occupation_bound(const Envelope& env, double r, const ShellOptions& opts = {});

/* 16 / (16 + q_inf(xi)). */
double local_time_fourier_bound(const Envelope& env, const Vector& xi);

struct SmallTimeHorizon {
  double g1 = 0.0;
  double g2 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double c1 = 0.0;              // constant used for the exit-time estimate
  double guaranteed_rate = 0.0;  // (1 - c - eps) q_inf(xi): |lambda_t| <= exp(-rate t) for t <= t2
};

/**
 * Horizons g1, g2, t1, t2 at frequency xi for tolerance eps in (0, 1 - c),
 * c the sector constant. The exit-time constant defaults to c_u of the
 * default bump in dimension d.
 */
SmallTimeHorizon small_time_horizon(const SymbolModel& model, const Envelope& env, const Vector& xi, double eps,
                                    double sector_constant, std::optional<double> c1 = std::nullopt);

/* Radial cutoff u(|y|) with u(0) = 1, 0 <= u <= 1 and support in the unit ball. */
struct BumpSpec {
  std::string name = "exp(1 - 1/(1 - r^2))";
  std::function<double(double)> profile;
};

BumpSpec default_bump();

/* c_u = int (1 + |xi|^2) |u^(xi)| dxi; computed once per (bump name, d) and cached. */
double bump_constant(int d, const BumpSpec& bump = default_bump());

struct ExitTimeBound {
  double raw = 0.0;      // c_u t sup_{|y-x|<=r} sup_{|xi|<=1/r} |p(y, xi)|
  double clipped = 0.0;  // raw clipped to [0, 1]
  double c_u = 0.0;
  double local_sup = 0.0;
};

ExitTimeBound exit_time_bound(const SymbolModel& model, const Vector& x, double r, double t,
                              const BumpSpec& bump = default_bump());

struct HeatExponentFit {
  double small_t_slope = 0.0;
  double large_t_slope = 0.0;
  std::vector<std::pair<double, double>> curve;  // (t, bound)
};

/* Least-squares slopes of log bound against log t on t <= 0.01 and t >= 100; empty grid means logspace(-4, 4, 33). */
HeatExponentFit heat_exponent_fit(const Envelope& env, std::vector<double> t_grid = {},
                                  const ShellOptions& opts = {});

/**
 * Transience diagnostic for stable-like models whose index stays below 1
 * outside a compact set (d = 1): evaluates the transience integral for the
 * exponent sup_{|x| >= K} alpha(x). It leans on a compact-modification
 * argument that is not implemented here, and the report says so.
 */
CriterionReport stable_like_outer_transience(const StableLikeSpec& spec, double K, double outer_box = 100.0,
                                             const ShellOptions& opts = {});

}  // namespace feller
