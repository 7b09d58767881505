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

#include "feller/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace feller {

double golden_section(const std::function<double(double)>& g, double a, double b, double& best) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = g(c), fd = g(d);
  const double tol = 1e-12 * std::max(1.0, std::abs(a) + std::abs(b));
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = g(d);
    }
  }
  if (fc < fd) {
    best = fc;
    return c;
  }
  best = fd;
  return d;
}

double coordinate_refine(const std::function<double(const Vector&)>& objective, Vector start, double start_value,
                         const Vector& step, const Vector& lower, const Vector& upper, int rounds, Vector* argmin) {
  double best = start_value;
  Vector x = std::move(start);
  for (int round = 0; round < rounds; ++round) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double a = std::max(lower(i), x(i) - step(i));
      const double b = std::min(upper(i), x(i) + step(i));
      if (!(b > a)) continue;
      Vector probe = x;
      auto g = [&](double t) {
        probe(i) = t;
        return objective(probe);
      };
      double value = 0.0;
      const double t = golden_section(g, a, b, value);
      if (value < best) {
        best = value;
        x(i) = t;
      }
    }
  }
  if (argmin) *argmin = x;
  return best;
}

}  // namespace feller
