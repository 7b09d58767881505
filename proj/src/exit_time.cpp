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
#include <map>
#include <mutex>
#include <sstream>

#include "feller/criteria.hpp"
#include "feller/optimize.hpp"

namespace feller {

BumpSpec default_bump() {
  BumpSpec b;
  b.profile = [](double r) {
    const double s = 1.0 - r * r;
    return s > 0.0 ? std::exp(1.0 - 1.0 / s) : 0.0;
  };
  return b;
}

namespace {

void validate_bump(const BumpSpec& bump) {
  if (!bump.profile) throw PreconditionError("bump profile is empty");
  if (std::abs(bump.profile(0.0) - 1.0) > 1e-12) throw PreconditionError("bump must satisfy u(0) = 1");
  for (int k = 0; k <= 1000; ++k) {
    const double r = 1.5 * k / 1000.0;
    const double u = bump.profile(r);
    if (!(u >= 0.0 && u <= 1.0)) throw PreconditionError("bump must take values in [0, 1]");
    if (r >= 1.0 && u != 0.0) throw PreconditionError("bump must vanish outside the unit ball");
  }
}

/* Fixed composite Kronrod nodes on [0, 1] with the radial profile tabulated, refined for larger frequencies. */
struct BumpTable {
  std::vector<double> nodes, weights, values;
};

/*
 * Every radial transform below reduces to a one-dimensional cosine or sinc transform of a smooth profile on [0, 1].
 * In d = 2 the profile is the Abel projection A(s) = 2 int_0^sqrt(1-s^2) u(sqrt(s^2 + t^2)) dt, which avoids Bessel functions.
 */
double profile_for(int d, const BumpSpec& bump, double s) {
  switch (d) {
    case 1: return bump.profile(s);
    case 2: {
      const double h = std::sqrt(std::max(0.0, 1.0 - s * s));
      if (h == 0.0) return 0.0;
      QuadratureConfig c;
      c.rel_tol = 1e-13;
      c.abs_tol = 1e-300;
      return 2.0 * integrate_interval([&](double t) { return bump.profile(std::sqrt(s * s + t * t)); }, 0.0, h, c).value;
    }
    default: return s * s * bump.profile(s);
  }
}

double compute_bump_constant(int d, const BumpSpec& bump) {
  if (d < 1 || d > 3) throw DomainError("bump constant is implemented for d <= 3");
  // The transform decays like exp(-sqrt(2 rho)); beyond rho = 800 the weighted integrand is below 1e-8 of the total.
  constexpr double kRhoMax = 800.0;
  constexpr double kScan = 0.25;
  const std::vector<int> panel_counts{16, 32, 64, 128};
  std::vector<BumpTable> tables;
  for (int panels : panel_counts) {
    BumpTable t;
    composite_kronrod(0.0, 1.0, panels, t.nodes, t.weights);
    for (double r : t.nodes) t.values.push_back(profile_for(d, bump, r));
    tables.push_back(std::move(t));
  }
  const double scale = d == 1 ? 1.0 / kPi : d == 2 ? 2.0 / (4.0 * kPi * kPi) : 4.0 * kPi / std::pow(2.0 * kPi, 3);
  auto transform = [&](double rho) {
    std::size_t level = 0;
    while (level + 1 < tables.size() && rho >= 8.0 * panel_counts[level]) ++level;
    const BumpTable& t = tables[level];
    double acc = 0.0;
    for (std::size_t j = 0; j < t.nodes.size(); ++j) {
      const double s = rho * t.nodes[j];
      const double k = d == 3 ? (s < 1e-8 ? 1.0 - s * s / 6.0 : std::sin(s) / s) : std::cos(s);
      acc += t.weights[j] * t.values[j] * k;
    }
    return scale * acc;
  };
  auto weighted = [&](double rho) { return (1.0 + rho * rho) * std::pow(rho, d - 1); };

  // |u^| has kinks at the zeros of u^, so integrate between consecutive zeros.
  // Sign changes at the rounding floor are not resolved; there the scan samples are summed directly.
  const int n = static_cast<int>(kRhoMax / kScan);
  std::vector<double> f(n + 1);
  for (int k = 0; k <= n; ++k) f[k] = transform(k * kScan);
  double crude = 0.0;
  for (int k = 0; k < n; ++k) crude += kScan * 0.5 * (weighted(k * kScan) * std::abs(f[k]) + weighted((k + 1) * kScan) * std::abs(f[k + 1]));
  const double floor = 1e-10 * crude;
  std::vector<double> knots{0.0};
  int last_significant = 0;
  for (int k = 1; k <= n; ++k) {
    const double rho = k * kScan;
    if (std::max(std::abs(f[k - 1]), std::abs(f[k])) * weighted(rho) < floor) continue;
    last_significant = k;
    if ((f[k - 1] > 0.0) == (f[k] > 0.0)) continue;
    double a = rho - kScan, b = rho, fa = f[k - 1];
    for (int i = 0; i < 50 && b - a > 1e-13 * b; ++i) {
      const double m = 0.5 * (a + b), fm = transform(m);
      if ((fm > 0.0) == (fa > 0.0)) a = m, fa = fm;
      else b = m;
    }
    knots.push_back(0.5 * (a + b));
  }
  const double cut = std::min(kRhoMax, (last_significant + 1) * kScan);
  knots.push_back(cut);
  QuadratureConfig c;
  // Between zeros the integrand is smooth; at large rho the error estimate sits on the rounding floor of the transform.
  c.rel_tol = 1e-10;
  c.abs_tol = 1e-11 * crude;
  c.max_subdivisions = 6;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    total += integrate_interval([&](double rho) { return weighted(rho) * std::abs(transform(rho)); }, knots[k], knots[k + 1], c).value;
  }
  for (int k = last_significant + 1; k < n; ++k) total += kScan * weighted(k * kScan + 0.5 * kScan) * 0.5 * (std::abs(f[k]) + std::abs(f[k + 1]));
  return unit_sphere_area(d) * total;
}

}  // namespace

double bump_constant(int d, const BumpSpec& bump) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, int>, double> cache;
  validate_bump(bump);
  std::lock_guard lock(mutex);
  auto key = std::make_pair(bump.name, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double c = compute_bump_constant(d, bump);
  if (!(c > 0.0) || !std::isfinite(c)) throw NumericalError("bump constant is not a positive number", c);
  cache.emplace(key, c);
  return c;
}

ExitTimeBound exit_time_bound(const SymbolModel& model, const Vector& x, double r, double t, const BumpSpec& bump) {
  const int d = model.dimension();
  if (x.size() != d) throw DomainError("exit_time_bound: dimension mismatch");
  if (!(r > 0.0) || !(t >= 0.0)) throw DomainError("exit_time_bound needs r > 0 and t >= 0");
  ExitTimeBound out;
  out.c_u = bump_constant(d, bump);

  // Frequencies filling the ball |xi| <= 1/r.
  const int shells = 24;
  Matrix dirs = model.traits().radial ? Matrix(Vector::Unit(d, 0)) : direction_set(d, d == 1 ? 2 : (d == 2 ? 64 : 256));
  std::vector<Vector> freqs;
  for (int k = 1; k <= shells; ++k)
    for (Eigen::Index j = 0; j < dirs.cols(); ++j) freqs.push_back((k / (shells * r)) * dirs.col(j));
  auto local_sup = [&](const Vector& y) {
    double s = 0.0;
    for (const Vector& xi : freqs) s = std::max(s, std::abs(model(y, xi)));
    return s;
  };

  // States filling the ball |y - x| <= r, then golden-section refinement of the best one.
  const int n = d == 1 ? 201 : (d == 2 ? 41 : 15);
  Matrix box = box_grid(d, r, n);
  double best = -1.0;
  Vector arg = x;
  for (Eigen::Index k = 0; k < box.cols(); ++k) {
    if (box.col(k).norm() > r * (1.0 + 1e-12)) continue;
    const Vector y = x + box.col(k);
    const double s = local_sup(y);
    if (s > best) best = s, arg = y;
  }
  const Vector step = Vector::Constant(d, 2.0 * r / (n - 1));
  auto objective = [&](const Vector& y) {
    if ((y - x).norm() > r) return 0.0;
    return -local_sup(y);
  };
  best = -coordinate_refine(objective, arg, -best, step, x.array() - r, x.array() + r, 3);
  out.local_sup = best;
  out.raw = out.c_u * t * best;
  out.clipped = std::min(1.0, std::max(0.0, out.raw));
  return out;
}

}  // namespace feller
