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
#include "feller/optimize.hpp"
#include "feller/quadrature.hpp"
#include "feller/rng.hpp"

using namespace feller;

TEST_CASE("adaptive Kronrod on smooth and singular integrands") {
  const auto a = integrate_interval([](double x) { return std::exp(-x * x); }, -3.0, 3.0);
  CHECK(a.converged);
  CHECK(a.value == doctest::Approx(std::sqrt(kPi) * std::erf(3.0)).epsilon(1e-12));
  const auto b = integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(b.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("composite Kronrod weights integrate polynomials exactly") {
  std::vector<double> nodes, weights;
  composite_kronrod(0.0, 2.0, 5, nodes, weights);
  double s = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * std::pow(nodes[k], 7);
  CHECK(s == doctest::Approx(std::pow(2.0, 8) / 8.0).epsilon(1e-13));
}

TEST_CASE("Fourier tail and Wynn acceleration") {
  // int_1^inf cos(x) / x dx = -Ci(1)
  const auto t = integrate_fourier_tail([](double x) { return 1.0 / x; }, 1.0, 1.0, Trig::cos);
  CHECK(t.value == doctest::Approx(-0.33740392290096813).epsilon(1e-8));
  std::vector<double> partial;
  double s = 0.0;
  for (int k = 0; k < 20; ++k) partial.push_back(s += (k % 2 ? -1.0 : 1.0) / (2 * k + 1));
  CHECK(wynn_epsilon(partial).value == doctest::Approx(kPi / 4).epsilon(1e-10));
}

TEST_CASE("radial integrals with known values") {
  const auto r = integrate_radial([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1);
  CHECK(r.convergent());
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-7));
  const auto g = integrate_radial([](double x) { return std::exp(-x * x / 16.0); }, 0.0, INFINITY, 1);
  CHECK(g.value == doctest::Approx(4.0 * std::sqrt(kPi)).epsilon(1e-8));
  // In d = 3, int exp(-|xi|^2) dxi = pi^(3/2).
  const auto g3 = integrate_radial([](double x) { return std::exp(-x * x); }, 0.0, INFINITY, 3);
  CHECK(g3.value == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-8));
}

TEST_CASE("power-law classification matches beta < d") {
  for (int d = 1; d <= 3; ++d)
    for (double beta = 0.25; beta <= 2.75; beta += 0.25) {
      if (std::abs(beta - d) < 1e-12) continue;
      const auto c = classify_improper([beta](double r) { return std::pow(r, -beta); }, d, 1.0);
      CAPTURE(d);
      CAPTURE(beta);
      CHECK((c.classification == Convergence::convergent) == (beta < d));
      if (beta >= d) CHECK(c.classification == Convergence::divergent_at_zero);
    }
  const auto inf = classify_improper([](double r) { return 1.0 / (1.0 + r); }, 1);
  CHECK(inf.classification == Convergence::divergent_at_infinity);
  CHECK(inf.infinite);
}

TEST_CASE("sphere areas and direction sets") {
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * kPi));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * kPi));
  const Matrix dirs = direction_set(3, 1024);
  CHECK(dirs.cols() == 1024);
  CHECK((dirs.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
  // Spherical Fibonacci points average x^2 to about 1/3.
  CHECK(dirs.row(0).squaredNorm() / 1024 == doctest::Approx(1.0 / 3.0).epsilon(1e-2));
}

TEST_CASE("golden section and coordinate refinement") {
  double best = 0.0;
  const double x = golden_section([](double t) { return (t - 0.3) * (t - 0.3); }, -1.0, 2.0, best);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-6));
  Vector argmin;
  const double v = coordinate_refine([](const Vector& y) { return (y - Vector::Constant(2, 0.25)).squaredNorm(); },
                                     Vector::Zero(2), 0.125, Vector::Constant(2, 0.5), Vector::Constant(2, -1.0),
                                     Vector::Constant(2, 1.0), 3, &argmin);
  CHECK(v < 1e-10);
  CHECK(argmin(1) == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("Philox4x32-10 known answers") {
  // Reference vectors of the Random123 distribution.
  auto a = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(a == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  auto b = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(b == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  auto c = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(c == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter streams are reproducible and distinct") {
  CounterRng a(42, 1, 7, 3), b(42, 1, 7, 3), c(42, 1, 8, 3);
  for (int k = 0; k < 10; ++k) CHECK(a.next_u64() == b.next_u64());
  CounterRng d(42, 1, 7, 3);
  int same = 0;
  for (int k = 0; k < 10; ++k) same += d.next_u64() == c.next_u64();
  CHECK(same == 0);
  CounterRng u(1, 0, 0, 0);
  double lo = 1.0, hi = 0.0, m = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double x = u.uniform();
    lo = std::min(lo, x), hi = std::max(hi, x), m += x / 100000;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(m == doctest::Approx(0.5).epsilon(0.01));
}
