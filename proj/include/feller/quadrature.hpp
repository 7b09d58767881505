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
#include <limits>
#include <string>
#include <vector>

#include "feller/types.hpp"

namespace feller {

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
};

/* Result of a one-dimensional adaptive rule. */
struct QuadratureValue {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = true;
  int evaluations = 0;
};

using ScalarFunction = std::function<double(double)>;

/* Adaptive 21-point Gauss-Kronrod on a finite interval. */
QuadratureValue integrate_interval(const ScalarFunction& f, double a, double b, const QuadratureConfig& cfg = {});

/* Nodes and weights of the 21-point Kronrod rule repeated on `panels` equal pieces of [a, b]. */
void composite_kronrod(double a, double b, int panels, std::vector<double>& nodes, std::vector<double>& weights);

enum class Trig { cos, sin };

/**
 * Integral of f(z) * trig(omega z) over [a, inf), omega > 0.
 *
 * Panels end at consecutive zeros of the trigonometric factor; the partial
 * sums form an (asymptotically) alternating series which is accelerated with
 * Wynn's epsilon algorithm.
 */
QuadratureValue integrate_fourier_tail(const ScalarFunction& f, double a, double omega, Trig trig,
                                       const QuadratureConfig& cfg = {});

/**
 * Integral of an already oscillating g over [a, inf), split into panels at
 * first_boundary + j * spacing (j = 0, 1, ...) and accelerated like
 * integrate_fourier_tail. Used when the zeros are only asymptotically
 * equispaced (Bessel kernels).
 */
QuadratureValue integrate_panel_series(const ScalarFunction& g, double a, double first_boundary, double spacing,
                                       const QuadratureConfig& cfg = {});

/* Limit of a slowly converging sequence by Wynn's epsilon algorithm; abs_error from the last two estimates. */
QuadratureValue wynn_epsilon(const std::vector<double>& partial_sums);

enum class Convergence { convergent, divergent_at_zero, divergent_at_infinity, undetermined };

std::string to_string(Convergence c);

struct ShellEntry {
  int index;       // shell [base * 2^index, base * 2^(index+1)]
  double partial;  // integral over the shell (sphere measure included)
};

struct IntegralResult {
  double value = 0.0;
  bool infinite = false;  // +inf is flagged here, never stored in value
  double abs_error_estimate = 0.0;
  Convergence classification = Convergence::undetermined;
  double shell_base = 1.0;
  std::vector<ShellEntry> annulus_trace;

  bool convergent() const { return classification == Convergence::convergent; }
};

struct ShellOptions {
  int min_shells = 40;        // shells examined before any verdict
  int max_shells = 300;       // extension budget while a convergent tail is still too inaccurate
  int window = 8;             // trailing shells inspected by the ratio test
  double flat_tolerance = 0.01;  // "nondecreasing within 1%"
  QuadratureConfig quad{1e-10, 1e-300, 400};
  double rel_tol = 1e-8;      // tolerance for the extrapolated tail
  double abs_tol = 1e-12;
};

/* int_a^inf f(z) dz for a > 0 by outward dyadic shells with geometric tail extrapolation. */
IntegralResult integrate_to_infinity(const ScalarFunction& f, double a, const ShellOptions& opts = {});

/* Surface measure of the unit sphere in R^d (2 for d = 1). */
double unit_sphere_area(int d);

/**
 * Integral over the annulus a <= |xi| <= b of a radial function,
 * i.e. surface(d) * int_a^b f(r) r^(d-1) dr. Either end may be singular
 * (a = 0) or infinite (b = inf); those ends are handled by dyadic shells
 * with geometric tail extrapolation.
 */
IntegralResult integrate_radial(const ScalarFunction& f, double a, double b, int d,
                                const ShellOptions& opts = {});

/**
 * Classifies the improper integral of a nonnegative integrand over the ball
 * |xi| <= outer_radius (all of R^d when outer_radius is infinite).
 * `sphere_mean(r)` is the average of the integrand over the sphere |xi| = r.
 */
IntegralResult classify_improper(const ScalarFunction& sphere_mean, int d,
                                 double outer_radius = std::numeric_limits<double>::infinity(),
                                 const ShellOptions& opts = {});

/* Deterministic unit directions (one per column): +-1 in d = 1, equispaced angles in d = 2,
   a spherical Fibonacci lattice in d = 3. */
Matrix direction_set(int d, int count);

/* Default direction count used when averaging non-radial integrands over spheres. */
inline constexpr int kSphereDirections = 1024;

/* r -> mean over the direction set of f(r u). */
ScalarFunction spherical_mean(std::function<double(const Vector&)> f, int d, int count = kSphereDirections);

}  // namespace feller
