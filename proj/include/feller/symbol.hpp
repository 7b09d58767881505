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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "feller/expression.hpp"
#include "feller/quadrature.hpp"
#include "feller/types.hpp"

namespace feller {

enum class SymbolKind { closed_form, levy_characteristics, stable_like, subordinated, symmetrized };

std::string to_string(SymbolKind kind);

struct SymbolTraits {
  bool conservative = true;   // no killing term
  bool real_valued = false;   // Im p == 0 identically
  bool x_independent = false;  // a Levy exponent
  bool radial = false;        // p(x, xi) depends on |xi| only
  double tolerance = 1e-8;    // accuracy of one evaluation
};

using SymbolFunction = std::function<Complex(const Vector& x, const Vector& xi)>;
using StateFunction = std::function<double(const Vector& x)>;

/**
 * Exponent index of a stable-like model, alpha(x) in [alpha_min, alpha_max],
 * 0 < alpha_min <= alpha_max <= 2. `smooth` records the user's claim that
 * alpha is C^1 with bounded derivative; it is carried along, not verified.
 */
struct StableLikeSpec {
  int dimension = 1;
  StateFunction alpha;
  double alpha_min = 1.0;
  double alpha_max = 1.0;
  bool smooth = true;
  std::string source;  // expression text when compiled from configuration
};

/**
 * An x-independent exponent that can be sampled exactly:
 *   psi(xi) = -i <b, xi> + kappa |xi|^2 + gamma |xi|^alpha + lambda (1 - exp(-sigma^2 |xi|^2 / 2)).
 */
struct LevyExponent {
  int dimension = 1;
  Vector drift;            // b (empty means zero)
  double diffusion = 0.0;  // kappa
  double stable_scale = 0.0;  // gamma
  double stable_index = 2.0;  // alpha
  double jump_rate = 0.0;     // lambda
  double jump_scale = 0.0;    // sigma (Gaussian jump sizes)

  Complex operator()(const Vector& xi) const;
};

/**
 * Levy characteristics (c, b, a, n) with a jump density n(x, z) with respect
 * to Lebesgue measure. Empty callables mean zero. In d >= 2 the density must
 * be radial and is then given as a function of |z|.
 */
struct LevyCharacteristics {
  int dimension = 1;
  StateFunction killing;
  std::function<Vector(const Vector&)> drift;
  std::function<Matrix(const Vector&)> diffusion;
  std::function<double(const Vector& x, const Vector& z)> density;
  StateFunction singularity_exponent;  // beta(x) with n ~ |z|^(-d-beta) near zero; empty means integrable
  bool symmetric_density = false;      // n(x, z) == n(x, -z)
  bool radial_density = false;         // n(x, z) depends on |z| only
  QuadratureConfig quadrature;
};

/* f(x, s) Bernstein in s for each x, with f(x, s) <= growth * (1 + s). */
struct BernsteinSpec {
  std::function<double(const Vector& x, double s)> f;
  double growth = 1.0;
  bool x_independent = true;
};

/**
 * A state-dependent negative definite symbol together with the metadata the
 * envelope, criteria and simulation layers consume. Evaluation is a pure
 * function call and safe to share between threads.
 */
class SymbolModel {
public:
  SymbolModel() = default;
  SymbolModel(SymbolKind kind, int dimension, std::string name, SymbolTraits traits, SymbolFunction fn);

  Complex operator()(const Vector& x, const Vector& xi) const;

  SymbolKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  const SymbolTraits& traits() const { return traits_; }
  SymbolTraits& traits() { return traits_; }

  const std::optional<StableLikeSpec>& stable_like() const { return stable_like_; }
  const std::optional<LevyExponent>& levy_exponent() const { return levy_exponent_; }
  SymbolModel& with_stable_like(StableLikeSpec spec);
  SymbolModel& with_levy_exponent(LevyExponent e);

  explicit operator bool() const { return static_cast<bool>(fn_); }

private:
  friend Complex eval_symbol(const SymbolModel&, const Vector&, const Vector&);

  SymbolKind kind_ = SymbolKind::closed_form;
  int dimension_ = 1;
  std::string name_;
  SymbolTraits traits_;
  SymbolFunction fn_;
  std::optional<StableLikeSpec> stable_like_;
  std::optional<LevyExponent> levy_exponent_;
};

/* p(x, xi); throws DomainError on a dimension mismatch or non-finite input. */
Complex eval_symbol(const SymbolModel& model, const Vector& x, const Vector& xi);

/* Normalising constant of the isotropic alpha-stable jump density C |z|^(-d-alpha), alpha in (0, 2). */
double stable_like_constant(double alpha, int d);

// Model families.
SymbolModel levy_symbol(const LevyExponent& exponent, std::string name = "levy");
SymbolModel brownian(int d = 1);
SymbolModel alpha_stable(double alpha, int d = 1);
SymbolModel cauchy(int d = 1);
SymbolModel compound_poisson(double rate, double jump_scale, int d = 1);
SymbolModel stable_like_symbol(const StableLikeSpec& spec);
/* int (1 ^ |z|^2) n(x, z) dz; +inf when the shell test flags divergence. */
double levy_integrability(const LevyCharacteristics& chars, const Vector& x);
SymbolModel levy_characteristics_symbol(const LevyCharacteristics& chars, std::string name = "levy_characteristics");

/**
 * Closed-form symbol from expression text for Re p and Im p. Variables:
 * x1..xd, xi1..xid, the aliases x = x1 and xi = xi1, and the norms xn = |x|,
 * xin = |xi|.
 */
SymbolModel closed_form_symbol(int d, const std::string& re_expr, const std::string& im_expr,
                               SymbolTraits traits = {}, std::string name = "closed_form");

/* Variable names, in binding order, used by closed_form_symbol and stable-like index expressions. */
std::vector<std::string> symbol_variables(int d);
std::vector<std::string> state_variables(int d);

/**
 * Stable-like index alpha(x) from expression text over x1..xd (x, xn aliases).
 * The bounds are checked on a sample grid of [-box, box]^d; a sample outside
 * (0, 2] or outside the declared bounds raises ConfigError.
 */
StableLikeSpec stable_like_from_expression(int d, const std::string& alpha_expr, double alpha_min, double alpha_max,
                                           bool smooth = true, double box = 10.0);

/**
 * f(x, p(x, xi)) for a real-valued base symbol. Throws PreconditionError if the
 * base is not declared real, and ConfigError if f fails the sampled Bernstein
 * checks (f(x, 0) = 0, nondecreasing, concave, linear growth).
 */
SymbolModel subordinate(const SymbolModel& base, const BernsteinSpec& bernstein);

/* 2 Re p(x, xi / 2). */
SymbolModel symmetrize(const SymbolModel& model);

}  // namespace feller
