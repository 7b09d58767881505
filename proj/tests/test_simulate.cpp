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
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "feller/empirics.hpp"
#include "feller/ensemble_io.hpp"
#include "feller/paths.hpp"
#include "feller/stable.hpp"

using namespace feller;

namespace {

SimulationOptions opts(std::size_t n, std::uint32_t stream = 0, unsigned threads = 1) {
  SimulationOptions o;
  o.n_paths = n;
  o.seed = 12345;
  o.stream_id = stream;
  o.threads = threads;
  return o;
}

double sample_variance(const std::vector<double>& v) {
  const MeanEstimate m = mean_estimate(v);
  return m.std_error * m.std_error * static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("stable variates") {
  CounterRng rng(1, 0, 0, 0);
  const auto g = sample_stable(2.0, 1000000, rng);
  CHECK(sample_variance(g) == doctest::Approx(2.0).epsilon(0.005));

  const auto c = sample_stable(1.0, 1000000, rng);
  std::vector<double> cs(c.size());
  std::transform(c.begin(), c.end(), cs.begin(), [](double x) { return std::cos(x); });
  const MeanEstimate ecf = mean_estimate(cs);
  CHECK(std::abs(ecf.mean - std::exp(-1.0)) <= 3.0 * ecf.std_error);

  auto h = sample_stable(0.5, 1000000, rng);
  std::nth_element(h.begin(), h.begin() + 500000, h.end());
  // Median standard error 1 / (2 f(0) sqrt(n)) with f(0) = Gamma(3) / pi.
  CHECK(std::abs(h[500000]) <= 4.0 / (2.0 * (2.0 / kPi) * 1000.0));

  CHECK_THROWS_AS(sample_stable(2.5, 10, rng), DomainError);
}

TEST_CASE("positive stable and isotropic vectors") {
  CounterRng rng(2, 0, 0, 0);
  std::vector<double> lt(200000);
  for (double& v : lt) v = std::exp(-positive_stable_variate(0.75, rng));
  const MeanEstimate m = mean_estimate(lt);
  CHECK(std::abs(m.mean - std::exp(-1.0)) <= 3.0 * m.std_error);

  for (int d = 2; d <= 3; ++d) {
    Vector xi = Vector::Zero(d);
    xi(d - 1) = 1.3;
    std::vector<double> re(200000);
    for (double& v : re) v = std::cos(stable_vector(1.4, d, rng).dot(xi));
    const MeanEstimate e = mean_estimate(re);
    CHECK(std::abs(e.mean - std::exp(-std::pow(1.3, 1.4))) <= 3.5 * e.std_error);
  }
}

TEST_CASE("exact Levy sampling") {
  const Vector x0 = Vector::Constant(1, 0.5);
  const PathEnsemble e = simulate_levy(brownian(1), x0, uniform_grid(1.0, 0.1), opts(100000));
  CHECK(e.scheme == Scheme::exact_levy);
  CHECK(e.n_times() == 11);
  std::vector<double> end(e.n_paths());
  for (std::size_t p = 0; p < e.n_paths(); ++p) {
    CHECK(e.coordinate(p, 0, 0) == 0.5);
    end[p] = e.coordinate(p, 10, 0) - 0.5;
  }
  CHECK(sample_variance(end) == doctest::Approx(2.0).epsilon(0.02));

  // Compound Poisson stays put with probability exp(-rate t).
  const PathEnsemble cp = simulate_levy(compound_poisson(1.5, 1.0, 1), Vector::Zero(1), uniform_grid(1.0, 0.25), opts(100000));
  std::vector<double> still(cp.n_paths());
  for (std::size_t p = 0; p < cp.n_paths(); ++p) still[p] = cp.coordinate(p, 4, 0) == 0.0 ? 1.0 : 0.0;
  const MeanEstimate s = mean_estimate(still);
  CHECK(std::abs(s.mean - std::exp(-1.5)) <= 3.0 * s.std_error);

  const PathEnsemble zero = simulate_levy(levy_symbol(LevyExponent{}), x0, uniform_grid(1.0, 0.5), opts(10));
  CHECK((zero.positions.array() == 0.5).all());

  CHECK_THROWS_AS(simulate_levy(stable_like_symbol(stable_like_from_expression(1, "1.5", 1.5, 1.5)), x0,
                                uniform_grid(1.0, 0.5), opts(10)),
                  ConfigError);
}

TEST_CASE("simulation is reproducible and thread-count independent") {
  const auto spec = stable_like_from_expression(1, "1.5 + 0.3 * sin(x)", 1.2, 1.8);
  const auto grid = uniform_grid(0.05, 1e-3);
  const PathEnsemble a = simulate_stable_like(spec, Vector::Zero(1), grid, opts(2000, 0, 1));
  const PathEnsemble b = simulate_stable_like(spec, Vector::Zero(1), grid, opts(2000, 0, 4));
  CHECK(a.positions == b.positions);
  CHECK(serialize_ensemble(a) == serialize_ensemble(b));
  const PathEnsemble c = simulate_stable_like(spec, Vector::Zero(1), grid, opts(2000, 1, 1));
  CHECK(a.positions != c.positions);
}

TEST_CASE("frozen Euler scheme") {
  const auto grid = uniform_grid(0.1, 1e-3);
  CHECK_THROWS_AS(simulate_stable_like(stable_like_from_expression(1, "1.5", 1.5, 1.5), Vector::Zero(1),
                                       uniform_grid(0.1, 1e-2), opts(10)),
                  ConfigError);
  // Constant index: the scheme is exact in law, so it must agree with the Levy sampler.
  const PathEnsemble eu = simulate_stable_like(stable_like_from_expression(1, "1.3", 1.3, 1.3), Vector::Zero(1), grid, opts(20000, 0));
  const PathEnsemble ex = simulate_levy(alpha_stable(1.3, 1), Vector::Zero(1), grid, opts(20000, 1));
  CHECK(eu.scheme == Scheme::euler_frozen);
  int outside = 0, points = 0;
  for (double t : {0.01, 0.05, 0.1})
    for (double m : {1.0, 4.0, 10.0}) {
      const auto a = empirical_char_fn(eu, t, Vector::Constant(1, m));
      const auto b = empirical_char_fn(ex, t, Vector::Constant(1, m));
      ++points;
      outside += std::abs(a.value.real() - b.value.real()) > 3.0 * std::hypot(a.se_re, b.se_re);
    }
  CHECK(outside <= 1);

  // Increments are symmetric with mean zero, so X is a martingale.
  const auto spec = stable_like_from_expression(1, "1.5 + 0.3 * sin(x)", 1.2, 1.8);
  const PathEnsemble sl = simulate_stable_like(spec, Vector::Zero(1), grid, opts(20000, 2));
  double mean = 0.0;
  for (std::size_t p = 0; p < sl.n_paths(); ++p) mean += sl.coordinate(p, 100, 0) / 20000.0;
  CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("Monte Carlo error shrinks like n^-1/2") {
  double se[3];
  int k = 0;
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    const PathEnsemble e = simulate_levy(brownian(1), Vector::Zero(1), uniform_grid(1.0, 1.0), opts(n, 3));
    se[k++] = empirical_char_fn(e, 1.0, Vector::Constant(1, 1.0)).se_re;
  }
  CHECK(se[0] / se[1] == doctest::Approx(std::sqrt(10.0)).epsilon(0.2));
  CHECK(se[1] / se[2] == doctest::Approx(std::sqrt(10.0)).epsilon(0.2));
}

TEST_CASE("local symmetrization") {
  const auto grid = uniform_grid(1.0, 0.25);
  const Vector x0 = Vector::Constant(1, 2.0);
  const PathEnsemble a = simulate_levy(brownian(1), x0, grid, opts(50000, 0));
  const PathEnsemble b = simulate_levy(brownian(1), x0, grid, opts(50000, 1));
  const PathEnsemble s = symmetrize_paths(a, b);
  CHECK(s.symmetrized);
  std::vector<double> end(s.n_paths());
  for (std::size_t p = 0; p < s.n_paths(); ++p) {
    CHECK(s.coordinate(p, 0, 0) == 2.0);
    end[p] = s.coordinate(p, 4, 0) - 2.0;
  }
  CHECK(sample_variance(end) == doctest::Approx(1.0).epsilon(0.03));

  CHECK_THROWS_AS(symmetrize_paths(a, a), PreconditionError);
  const PathEnsemble same = symmetrize_paths(a, a, true);
  CHECK((same.positions.array() == 2.0).all());
  const PathEnsemble other = simulate_levy(brownian(1), x0, uniform_grid(1.0, 0.5), opts(50000, 2));
  CHECK_THROWS_AS(symmetrize_paths(a, other), PreconditionError);
}

TEST_CASE("grids") {
  CHECK(uniform_grid(1.0, 0.25) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK_THROWS_AS(uniform_grid(1.0, 0.3), ConfigError);
  const PathEnsemble e = simulate_levy(brownian(1), Vector::Zero(1), uniform_grid(1.0, 0.25), opts(3));
  CHECK(e.time_index(0.75) == 3);
  CHECK_THROWS_AS(e.time_index(0.3), PreconditionError);
  SimulationOptions dec = opts(3);
  dec.decimation = 2;
  const PathEnsemble d = simulate_levy(brownian(1), Vector::Zero(1), uniform_grid(1.0, 0.25), dec);
  CHECK(d.time_grid == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("FLPE files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "feller_test_flpe";
  fs::create_directories(dir);
  const PathEnsemble e = simulate_levy(brownian(2), Vector::Constant(2, 1.0), uniform_grid(1.0, 0.5), opts(7));
  write_ensemble(e, dir / "e.flpe");
  const PathEnsemble r = read_ensemble(dir / "e.flpe");
  CHECK(r.positions == e.positions);
  CHECK(r.time_grid == e.time_grid);
  CHECK(r.start == e.start);
  CHECK(r.lineage.root_seed == 12345);
  CHECK(r.model == e.model);
  CHECK(file_checksum(dir / "e.flpe") == fnv1a64(serialize_ensemble(e).data(), serialize_ensemble(e).size()));

  const auto bytes = serialize_ensemble(e);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "FLPE");
  CHECK(bytes[4] == 1);
  std::uint64_t len = 0;
  for (int i = 0; i < 8; ++i) len |= static_cast<std::uint64_t>(bytes[8 + i]) << (8 * i);
  CHECK(bytes.size() == 16 + len + 8 * 7 * 3 * 2);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(deserialize_ensemble(truncated), ConfigError);

  write_ensemble_csv(e, dir / "e.csv");
  std::ifstream csv(dir / "e.csv");
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 1 + 7 * 3);
  // FNV-1a 64 of "a".
  const std::uint8_t a = 'a';
  CHECK(fnv1a64(&a, 1) == 0xaf63dc4c8601ec8cULL);
  fs::remove_all(dir);
}
