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
#include <cmath>

#include "doctest.h"
#include "feller/symbol.hpp"
#include "feller/symbol_checks.hpp"

using namespace feller;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

}  // namespace

TEST_CASE("Levy families evaluate their closed forms") {
  const Vector x = Vector::Zero(1);
  CHECK(brownian(1)(x, v1(3.0)).real() == doctest::Approx(9.0));
  CHECK(cauchy(1)(x, v1(-2.5)).real() == doctest::Approx(2.5));
  CHECK(alpha_stable(0.7, 1)(x, v1(2.0)).real() == doctest::Approx(std::pow(2.0, 0.7)));
  // Gaussian jumps N(0, s^2) at rate l: l (1 - exp(-s^2 xi^2 / 2)).
  CHECK(compound_poisson(2.0, 0.5, 1)(x, v1(1.2)).real() == doctest::Approx(2.0 * (1.0 - std::exp(-0.125 * 1.44))));
  LevyExponent e;
  e.drift = v1(0.4);
  const Complex p = levy_symbol(e)(x, v1(2.0));
  CHECK(p.real() == doctest::Approx(0.0));
  CHECK(p.imag() == doctest::Approx(-0.8));
  const Vector x3 = Vector::Zero(3);
  Vector xi3(3);
  xi3 << 1.0, 2.0, 2.0;
  CHECK(alpha_stable(1.5, 3)(x3, xi3).real() == doctest::Approx(std::pow(3.0, 1.5)));
}

TEST_CASE("evaluation checks dimensions") {
  CHECK_THROWS_AS(brownian(2)(Vector::Zero(1), Vector::Zero(2)), DomainError);
  CHECK_THROWS_AS(brownian(1)(Vector::Zero(1), Vector::Zero(2)), DomainError);
}

TEST_CASE("stable-like normalising constant") {
  // d = 1, alpha = 1: C = 1 / pi.
  CHECK(stable_like_constant(1.0, 1) == doctest::Approx(1.0 / kPi));
  // Independent route: C = alpha 2^(alpha - 1) Gamma((alpha + d) / 2) / (pi^(d/2) Gamma(1 - alpha / 2)).
  for (int d = 1; d <= 3; ++d)
    for (double a : {0.3, 1.1, 1.7}) {
      const double c = a * std::pow(2.0, a - 1) * std::tgamma((a + d) / 2) / (std::pow(kPi, d / 2.0) * std::tgamma(1 - a / 2));
      CHECK(stable_like_constant(a, d) == doctest::Approx(c).epsilon(1e-12));
    }
  CHECK_THROWS_AS(stable_like_constant(2.0, 1), DomainError);
  // Near alpha = 2 the constant vanishes like (2 - alpha) 2 Gamma(1 + d/2) / pi^(d/2).
  for (int d = 1; d <= 3; ++d) {
    const double limit = 2.0 * std::tgamma(1.0 + 0.5 * d) / std::pow(kPi, 0.5 * d);
    CHECK(stable_like_constant(1.99, d) / 0.01 == doctest::Approx(limit).epsilon(0.02));
    CHECK(stable_like_constant(1.9999, d) / 1e-4 == doctest::Approx(limit).epsilon(2e-4));
    CHECK(stable_like_constant(1.9999, d) < stable_like_constant(1.99, d));
  }
  CHECK_THROWS_AS(stable_like_constant(0.0, 1), DomainError);
}

TEST_CASE("Levy-Khintchine evaluation reproduces stable and Cauchy symbols") {
  const Vector x = Vector::Zero(1);
  for (double a : {0.5, 1.0, 1.5}) {
    LevyCharacteristics ch;
    const double c = stable_like_constant(a, 1);
    ch.density = [c, a](const Vector&, const Vector& z) { return c * std::pow(std::abs(z(0)), -1 - a); };
    ch.singularity_exponent = [a](const Vector&) { return a; };
    ch.symmetric_density = true;
    const SymbolModel m = levy_characteristics_symbol(ch);
    for (double w : {0.1, 1.0, 3.0}) {
      CAPTURE(a);
      CAPTURE(w);
      CHECK(m(x, v1(w)).real() == doctest::Approx(std::pow(w, a)).epsilon(1e-6));
    }
  }
  for (int d = 2; d <= 3; ++d) {
    const double a = 1.3, c = stable_like_constant(a, d);
    LevyCharacteristics ch;
    ch.dimension = d;
    ch.density = [c, a, d](const Vector&, const Vector& z) { return c * std::pow(z.norm(), -d - a); };
    ch.singularity_exponent = [a](const Vector&) { return a; };
    ch.radial_density = true;
    const SymbolModel m = levy_characteristics_symbol(ch);
    Vector xi = Vector::Zero(d);
    xi(0) = 2.0;
    CHECK(m(Vector::Zero(d), xi).real() == doctest::Approx(std::pow(2.0, a)).epsilon(1e-6));
  }
}

TEST_CASE("Levy-Khintchine evaluation with a one-sided density") {
  // n(z) = e^{-z} on z > 0: p(xi) = 1 - 1 / (1 - i xi) + i xi (1 - 2 / e).
  LevyCharacteristics ch;
  ch.density = [](const Vector&, const Vector& z) { return z(0) > 0 ? std::exp(-z(0)) : 0.0; };
  const SymbolModel m = levy_characteristics_symbol(ch);
  const double w = 1.5;
  const Complex exact = 1.0 - 1.0 / Complex(1.0, -w) + Complex(0.0, w * (1.0 - 2.0 / std::exp(1.0)));
  const Complex got = m(Vector::Zero(1), v1(w));
  CHECK(got.real() == doctest::Approx(exact.real()).epsilon(1e-7));
  CHECK(got.imag() == doctest::Approx(exact.imag()).epsilon(1e-7));
}

TEST_CASE("Levy characteristics are validated") {
  LevyCharacteristics ch;
  ch.diffusion = [](const Vector&) { return Matrix::Constant(1, 1, -1.0); };
  CHECK_THROWS_AS(levy_characteristics_symbol(ch), ConfigError);
  LevyCharacteristics heavy;
  heavy.density = [](const Vector&, const Vector& z) { return std::pow(std::abs(z(0)), -3.5); };
  heavy.singularity_exponent = [](const Vector&) { return 2.5; };
  CHECK(std::isinf(levy_integrability(heavy, Vector::Zero(1))));
}

TEST_CASE("closed-form symbols detect their traits") {
  const SymbolModel r = closed_form_symbol(1, "abs(xi)^1.5", "0");
  CHECK(r.traits().real_valued);
  CHECK(r.traits().x_independent);
  const SymbolModel s = closed_form_symbol(2, "(1 + 0.5 * sin(x1)) * xin^2", "0");
  CHECK_FALSE(s.traits().x_independent);
  CHECK(s.traits().radial);
  Vector x(2), xi(2);
  x << kPi / 2, 0.0;
  xi << 3.0, 4.0;
  CHECK(s(x, xi).real() == doctest::Approx(1.5 * 25.0));
  CHECK_THROWS_AS(closed_form_symbol(1, "abs(q)", "0"), ConfigError);
}

TEST_CASE("stable-like index from expressions") {
  const StableLikeSpec spec = stable_like_from_expression(1, "1.5 + 0.3 * sin(x)", 1.2, 1.8);
  const SymbolModel m = stable_like_symbol(spec);
  const Vector x = v1(0.7);
  CHECK(m(x, v1(2.0)).real() == doctest::Approx(std::pow(2.0, 1.5 + 0.3 * std::sin(0.7))));
  CHECK_THROWS_AS(stable_like_from_expression(1, "1.5 + 0.6 * sin(x)", 1.2, 1.8), ConfigError);
  CHECK_THROWS_AS(stable_like_from_expression(1, "2.5", 1.2, 1.8), ConfigError);
}

TEST_CASE("subordination by Bernstein functions") {
  BernsteinSpec sqrt_f;
  sqrt_f.f = [](const Vector&, double s) { return std::sqrt(s); };
  const SymbolModel half = subordinate(brownian(1), sqrt_f);
  CHECK(half(Vector::Zero(1), v1(-3.0)).real() == doctest::Approx(3.0));
  BernsteinSpec convex;
  convex.f = [](const Vector&, double s) { return s * s; };
  convex.growth = 1e12;
  CHECK_THROWS_AS(subordinate(brownian(1), convex), ConfigError);
  LevyExponent drift;
  drift.drift = v1(1.0);
  CHECK_THROWS_AS(subordinate(levy_symbol(drift), sqrt_f), PreconditionError);
}

TEST_CASE("symmetrization halves the frequency") {
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    const SymbolModel s = symmetrize(alpha_stable(a, 1));
    for (double w : {0.1, 1.0, 7.0})
      CHECK(s(Vector::Zero(1), v1(w)).real() == doctest::Approx(std::pow(2.0, 1.0 - a) * std::pow(w, a)).epsilon(1e-14));
  }
  LevyExponent e;
  e.drift = v1(3.0);
  e.diffusion = 1.0;
  const SymbolModel s = symmetrize(levy_symbol(e));
  const Complex p = s(Vector::Zero(1), v1(2.0));
  CHECK(p.real() == doctest::Approx(2.0));  // 2 * (1)^2
  CHECK(p.imag() == 0.0);
}

TEST_CASE("symbol checks on standard models") {
  const PointGrid xs = box_grid(1, 2.0, 21), xis = box_grid(1, 10.0, 81);
  const auto bc = check_bounded_coefficients(stable_like_symbol(stable_like_from_expression(1, "1.5 + 0.3 * sin(x)", 1.2, 1.8)), xs, xis);
  CHECK(bc.verdict == Verdict::holds);
  CHECK(bc.c_est <= 1.0 + 1e-12);
  const auto bad = check_bounded_coefficients(closed_form_symbol(1, "abs(xi)^3", "0"), xs, xis);
  CHECK(bad.verdict == Verdict::fails);

  CHECK(check_sector_condition(brownian(1), xs, xis).verdict == Verdict::holds);
  LevyExponent drift;
  drift.drift = v1(1.0);
  const auto sec = check_sector_condition(levy_symbol(drift), xs, xis);
  CHECK(sec.verdict == Verdict::fails);
  CHECK(sec.witness.has_value());

  CHECK(check_feller_decay(alpha_stable(1.5, 1), {1.0, 10.0, 100.0, 1000.0}).verdict == Verdict::holds);
  CHECK(check_feller_decay(closed_form_symbol(1, "xi^2 * (1 + x^2)", "0"), {1.0, 10.0, 100.0, 1000.0}).verdict ==
        Verdict::fails);

  CHECK(check_sqrt_subadditivity(alpha_stable(1.5, 2), 500, 3).verdict == Verdict::holds);
  const auto sub = check_sqrt_subadditivity(closed_form_symbol(1, "abs(xi)^3", "0"), 500, 3);
  CHECK(sub.verdict == Verdict::fails);
  CHECK(sub.counterexample.has_value());
}
