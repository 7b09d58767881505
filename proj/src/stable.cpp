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

#include "feller/stable.hpp"

#include <cmath>

namespace feller {

double stable_variate(double alpha, CounterRng& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stable index must lie in (0, 2]");
  if (alpha == 2.0) return std::sqrt(2.0) * rng.normal();
  const double v = kPi * (rng.uniform() - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = rng.exponential();
  const double a = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
  return a * std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

std::vector<double> sample_stable(double alpha, std::size_t n, CounterRng& rng) {
  std::vector<double> out(n);
  for (double& x : out) x = stable_variate(alpha, rng);
  return out;
}

double positive_stable_variate(double beta, CounterRng& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("positive stable index must lie in (0, 1)");
  const double u = kPi * rng.uniform();
  const double e = rng.exponential();
  return std::sin(beta * u) / std::pow(std::sin(u), 1.0 / beta) *
         std::pow(std::sin((1.0 - beta) * u) / e, (1.0 - beta) / beta);
}

Vector stable_vector(double alpha, int d, CounterRng& rng) {
  if (d < 1) throw DomainError("dimension must be positive");
  Vector x(d);
  if (d == 1) {
    x(0) = stable_variate(alpha, rng);
    return x;
  }
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stable index must lie in (0, 2]");
  for (int i = 0; i < d; ++i) x(i) = std::sqrt(2.0) * rng.normal();
  if (alpha == 2.0) return x;
  // Sub-Gaussian representation: sqrt(A) G with A positive (alpha/2)-stable.
  return std::sqrt(positive_stable_variate(0.5 * alpha, rng)) * x;
}

}  // namespace feller
