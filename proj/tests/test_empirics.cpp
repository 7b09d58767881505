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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "feller/empirics.hpp"

using namespace feller;

namespace {

SimulationOptions opts(std::size_t n, std::uint32_t stream = 0) {
  SimulationOptions o;
  o.n_paths = n;
  o.seed = 777;
  o.stream_id = stream;
  return o;
}

XDomain box(int d) {
  XDomain dom;
  dom.lower = Vector::Constant(d, -1.0);
  dom.upper = Vector::Constant(d, 1.0);
  return dom;
}

Vector v1(double a) { return Vector::Constant(1, a); }

}  // namespace

TEST_CASE("pairwise sums and mean estimates") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v.data(), v.size()) == doctest::Approx(100.0).epsilon(1e-14));
  const MeanEstimate m = mean_estimate({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == 2.5);
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("empirical characteristic function") {
  const PathEnsemble bm = simulate_levy(brownian(1), v1(0.3), uniform_grid(2.0, 0.5), opts(40000));
  const CharFnEstimate a = empirical_char_fn(bm, 1.0, v1(1.0));
  CHECK(std::abs(a.value.real() - std::exp(-1.0)) <= 3.0 * a.se_re);
  CHECK(std::abs(a.value.imag()) <= 3.0 * a.se_im);
  CHECK(std::abs(a.value) <= 1.0 + 3.0 * a.std_error());

  const CharFnEstimate z = empirical_char_fn(bm, 1.0, v1(0.0));
  CHECK(z.value == Complex(1.0, 0.0));
  CHECK(z.std_error() == 0.0);

  // Hermitian symmetry holds exactly on the same sample.
  const CharFnEstimate p = empirical_char_fn(bm, 2.0, v1(0.7)), n = empirical_char_fn(bm, 2.0, v1(-0.7));
  CHECK(p.value.real() == n.value.real());
  CHECK(p.value.imag() == -n.value.imag());

  const PathEnsemble c = simulate_levy(cauchy(1), Vector::Zero(1), uniform_grid(2.0, 1.0), opts(40000, 1));
  const CharFnEstimate ce = empirical_char_fn(c, 2.0, v1(1.5));
  CHECK(std::abs(ce.value.real() - std::exp(-3.0)) <= 3.0 * ce.se_re);

  CHECK_THROWS_AS(empirical_char_fn(bm, 0.7, v1(1.0)), PreconditionError);
}

TEST_CASE("characteristic-function bound on an alpha-stable grid") {
  const PathEnsemble e = simulate_levy(alpha_stable(1.5, 1), Vector::Zero(1), uniform_grid(2.0, 0.5), opts(10000, 2));
  const CharBoundReport rep = validate_char_bound(e, build_envelope(alpha_stable(1.5, 1), box(1)), {0.0, 0.5, 1.0, 2.0},
                                                  axis_frequencies(1, {0.5, 1.0, 2.0, 4.0}));
  CHECK(rep.violations == 0);
  CHECK(rep.pass);
  for (const MarginRow& r : rep.rows)
    if (r.t == 0.0) {
      CHECK(r.margin == 0.0);
      CHECK(r.estimate == 1.0);
      CHECK(r.bound == 1.0);
    }
}

TEST_CASE("generator finite differences") {
  const PathEnsemble bm = simulate_levy(brownian(1), Vector::Zero(1), uniform_grid(0.1, 1e-3), opts(100000, 3));
  const std::vector<double> hs{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  const GeneratorEstimate g = generator_finite_difference(bm, v1(2.0), hs);
  CHECK_FALSE(g.inconclusive);
  CHECK(g.intercept == doctest::Approx(4.0).epsilon(0.05));
  const GeneratorEstimate z = generator_finite_difference(bm, v1(0.0), hs);
  CHECK(z.intercept == 0.0);
  CHECK(std::all_of(z.slope.begin(), z.slope.end(), [](double s) { return s == 0.0; }));
  CHECK_THROWS_AS(generator_finite_difference(bm, v1(1.0), {1e-3, 2e-3}), PreconditionError);
}

TEST_CASE("small-time approximation") {
  const auto grid = uniform_grid(0.1, 1e-3);
  const PathEnsemble c = simulate_stable_like(stable_like_from_expression(1, "1.4", 1.4, 1.4), Vector::Zero(1), grid, opts(20000, 5));
  const SmallTimeReport r = validate_small_t_approx(c, alpha_stable(1.4, 1), v1(1.0), {1e-3, 1e-2, 1e-1});
  CHECK(r.consistent);
  LevyExponent drift;
  drift.drift = v1(1.0);
  CHECK_THROWS_AS(validate_small_t_approx(c, levy_symbol(drift), v1(1.0), {1e-3}), PreconditionError);
}

TEST_CASE("binned local time") {
  const PathEnsemble bm = simulate_levy(brownian(1), Vector::Zero(1), uniform_grid(1.0, 1e-2), opts(20000, 6));
  const OccupationEstimate o = estimate_local_time(bm, 1.0, 0.1);
  CHECK(o.total_mass + o.missing_mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(o.missing_mass == 0.0);
  CHECK_FALSE(o.warning);
  // x0 sits at the centre of a bin; compare mirrored bins.
  const auto mid = static_cast<std::size_t>(std::floor((0.0 - o.edges.front()) / 0.1));
  CHECK(o.edges[mid] + 0.05 == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  for (std::size_t k = 1; k <= 5; ++k)
    CHECK(o.density[mid - k] == doctest::Approx(o.density[mid + k]).epsilon(0.05));

  const OccupationEstimate narrow = estimate_local_time(bm, 1.0, 0.1, 0.5);
  CHECK(narrow.warning);
  CHECK(narrow.total_mass + narrow.missing_mass == doctest::Approx(1.0).epsilon(1e-12));

  const auto spec = stable_like_from_expression(1, "1.65 + 0.15 * sin(x)", 1.5, 1.8);
  const PathEnsemble sl = simulate_stable_like(spec, Vector::Zero(1), uniform_grid(1.0, 1e-3), opts(5000, 7));
  const LocalTimeRefinement ref = local_time_refinement(sl, 1.0, 0.2, 4.0);
  CHECK(ref.stable);
}

TEST_CASE("occupation measure in Fourier variables") {
  const PathEnsemble shortrun = simulate_levy(brownian(1), Vector::Zero(1), uniform_grid(5.0, 0.1), opts(10, 8));
  CHECK_THROWS_AS(occupation_fourier_check(shortrun, build_envelope(brownian(1), box(1)), {v1(1.0)}), PreconditionError);
  const PathEnsemble e = simulate_levy(brownian(1), Vector::Zero(1), uniform_grid(14.0, 0.01), opts(2000, 9));
  const auto rows = occupation_fourier_check(e, build_envelope(brownian(1), box(1)), {v1(0.0), v1(2.0)});
  CHECK(rows[0].estimate == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(rows[0].estimate <= 1.0);
  // E |mu^(xi)|^2 = 1 / (1 + xi^2) for Brownian motion with symbol xi^2.
  CHECK(rows[1].estimate == doctest::Approx(0.2).epsilon(0.1));
  CHECK(rows[1].pass);
}

TEST_CASE("exit frequencies") {
  const PathEnsemble bm = simulate_levy(brownian(1), Vector::Zero(1), uniform_grid(1.0, 0.01), opts(20000, 10));
  CHECK(exit_frequency(bm, 0.1, 0.0).probability == 0.0);
  const ExitFrequency f = exit_frequency(bm, 1.0, 1.0);
  // Generator Laplacian: sup_{s <= 1} |B_s| >= 1 iff a standard Wiener process leaves (-a, a) by time 1,
  // a = 1 / sqrt(2). Eigenfunction series for the survival probability; the grid supremum can only undercount.
  const double a = 1.0 / std::sqrt(2.0);
  double survive = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double m = 2.0 * k + 1.0;
    survive += (k % 2 ? -1.0 : 1.0) / m * std::exp(-m * m * kPi * kPi / (8.0 * a * a));
  }
  const double exact = 1.0 - 4.0 / kPi * survive;
  CHECK(exact == doctest::Approx(0.8921).epsilon(1e-3));
  CHECK(f.probability <= exact + 3.0 * f.std_error);
  CHECK(f.probability > exact - 0.08);
}

TEST_CASE("transience diagnostic") {
  const std::vector<double> T{10.0, 100.0, 1000.0};
  const auto grid = uniform_grid(1000.0, 0.5);
  const auto stable = transience_diagnostic(simulate_levy(alpha_stable(0.5, 1), Vector::Zero(1), grid, opts(1000, 11)), 1.0, T);
  CHECK(stable.trend == "saturating");
  const auto bm1 = transience_diagnostic(simulate_levy(brownian(1), Vector::Zero(1), grid, opts(1000, 12)), 1.0, T);
  CHECK(bm1.trend == "growing");
  CHECK(bm1.growth_exponent == doctest::Approx(0.5).epsilon(0.2));
  const auto bm3 = transience_diagnostic(simulate_levy(brownian(3), Vector::Zero(3), grid, opts(1000, 13)), 1.0, T);
  CHECK(bm3.trend == "saturating");
}

TEST_CASE("symmetrization law") {
  const auto grid = uniform_grid(1.0, 0.25);
  const PathEnsemble a = simulate_levy(cauchy(1), Vector::Zero(1), grid, opts(20000, 14));
  const PathEnsemble b = simulate_levy(cauchy(1), Vector::Zero(1), grid, opts(20000, 15));
  const SymmetrizationReport r = symmetrization_law_check(symmetrize_paths(a, b), a, b, {0.0, 0.25, 0.5, 1.0},
                                                          axis_frequencies(1, {0.5, 1.0, 2.0}));
  CHECK(r.rows.size() == 12);
  CHECK(r.failures <= 1);
}
