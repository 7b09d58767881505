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

#include "feller/symbol_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "feller/quadrature.hpp"
#include "feller/rng.hpp"

namespace feller {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

PointGrid box_grid(int d, double half_width, int n) {
  if (d < 1 || n < 1) throw DomainError("box_grid needs d >= 1 and n >= 1");
  Eigen::Index total = 1;
  for (int i = 0; i < d; ++i) total *= n;
  PointGrid g(d, total);
  for (Eigen::Index k = 0; k < total; ++k) {
    Eigen::Index rest = k;
    for (int i = 0; i < d; ++i) {
      g(i, k) = n == 1 ? 0.0 : -half_width + 2.0 * half_width * static_cast<double>(rest % n) / (n - 1);
      rest /= n;
    }
  }
  return g;
}

PointGrid radial_grid(int d, const std::vector<double>& radii) {
  std::vector<Vector> dirs;
  for (int i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  if (d > 1) dirs.push_back(Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))));
  PointGrid g(d, static_cast<Eigen::Index>(dirs.size() * radii.size()));
  Eigen::Index k = 0;
  for (double r : radii)
    for (const Vector& u : dirs) g.col(k++) = r * u;
  return g;
}

BoundedCoefficientsResult check_bounded_coefficients(const SymbolModel& model, const PointGrid& x_grid,
                                                     const PointGrid& xi_grid) {
  BoundedCoefficientsResult out;
  const int d = model.dimension();
  std::vector<std::pair<double, double>> per_xi;  // (|xi|, sup_x |p| / (1 + |xi|^2))
  for (Eigen::Index j = 0; j < xi_grid.cols(); ++j) {
    const Vector xi = xi_grid.col(j);
    double sup = 0.0;
    for (Eigen::Index i = 0; i < x_grid.cols(); ++i) sup = std::max(sup, std::abs(model(x_grid.col(i), xi)));
    const double ratio = sup / (1.0 + xi.squaredNorm());
    per_xi.emplace_back(xi.norm(), ratio);
    if (!std::isfinite(ratio)) out.c_est = std::numeric_limits<double>::infinity();
    else out.c_est = std::max(out.c_est, ratio);
  }
  for (Eigen::Index i = 0; i < x_grid.cols(); ++i)
    out.max_at_zero = std::max(out.max_at_zero, std::abs(model(x_grid.col(i), Vector::Zero(d))));

  double r_max = 0.0;
  for (const auto& [r, c] : per_xi) r_max = std::max(r_max, r);
  for (int j = 5; j >= 0; --j) {
    const double radius = r_max * std::ldexp(1.0, -j);
    double c = 0.0;
    for (const auto& [r, v] : per_xi)
      if (r <= radius * (1.0 + 1e-12)) c = std::max(c, v);
    out.growth_trace.emplace_back(radius, c);
  }

  const double zero_tol = std::max(1e-12, model.traits().tolerance);
  bool growing = out.growth_trace.size() >= 4;
  for (std::size_t k = out.growth_trace.size() - 3; growing && k < out.growth_trace.size(); ++k) {
    const double prev = out.growth_trace[k - 1].second;
    if (!(prev > 0.0) || out.growth_trace[k].second < 1.5 * prev) growing = false;
  }
  if (!std::isfinite(out.c_est)) {
    out.verdict = Verdict::fails;
    out.note = "symbol not finite on the grid";
  } else if (growing) {
    out.verdict = Verdict::fails;
    out.note = "c_est keeps growing with the frequency radius (at least x1.5 per doubling over the last 3 radii)";
  } else if (model.traits().conservative && out.max_at_zero > zero_tol) {
    out.verdict = Verdict::fails;
    out.note = "p(x, 0) does not vanish for a model declared conservative";
  } else {
    out.verdict = Verdict::holds;
  }
  return out;
}

SectorResult check_sector_condition(const SymbolModel& model, const PointGrid& x_grid, const PointGrid& xi_grid) {
  SectorResult out;
  out.c = 0.0;
  const double tol = std::max(1e-14, model.traits().tolerance);
  for (Eigen::Index j = 0; j < xi_grid.cols(); ++j) {
    const Vector xi = xi_grid.col(j);
    if (xi.norm() == 0.0) continue;
    double re_inf = std::numeric_limits<double>::infinity();
    double im_sup = 0.0;
    for (Eigen::Index i = 0; i < x_grid.cols(); ++i) {
      const Complex v = model(x_grid.col(i), xi);
      re_inf = std::min(re_inf, v.real());
      im_sup = std::max(im_sup, std::abs(v.imag()));
    }
    if (im_sup <= tol * std::max(1.0, std::abs(re_inf))) continue;
    if (re_inf <= tol) {
      out.c = std::numeric_limits<double>::infinity();
      out.verdict = Verdict::fails;
      out.witness = xi;
      out.note = "inf_x Re p vanishes where Im p does not";
      return out;
    }
    const double ratio = im_sup / re_inf;
    if (ratio > out.c) {
      out.c = ratio;
      out.witness = xi;
    }
  }
  out.verdict = out.c < 1.0 ? Verdict::holds : Verdict::fails;
  return out;
}

namespace {

PointGrid ball_points(int d, double radius, int n) {
  PointGrid box = box_grid(d, radius, n);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < box.cols(); ++k)
    if (box.col(k).norm() <= radius * (1.0 + 1e-12)) keep.push_back(k);
  const int sphere = d == 1 ? 2 : (d == 2 ? 64 : 256);
  Matrix dirs = direction_set(d, sphere);
  PointGrid g(d, static_cast<Eigen::Index>(keep.size()) + dirs.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) g.col(static_cast<Eigen::Index>(k)) = box.col(keep[k]);
  g.rightCols(dirs.cols()) = radius * dirs;
  return g;
}

}  // namespace

FellerDecayResult check_feller_decay(const SymbolModel& model, const std::vector<double>& radii, double tol,
                                     int points_per_axis) {
  FellerDecayResult out;
  out.radii = radii;
  if (radii.empty()) {
    out.note = "no radii given";
    return out;
  }
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] > radii[k - 1])) throw PreconditionError("check_feller_decay needs increasing radii");
  const int d = model.dimension();
  const int n = d == 1 ? points_per_axis : (d == 2 ? std::min(points_per_axis, 21) : std::min(points_per_axis, 11));
  for (double r : radii) {
    const PointGrid xs = ball_points(d, r, n);
    const PointGrid xis = ball_points(d, 1.0 / r, n);
    double sup = 0.0;
    for (Eigen::Index i = 0; i < xs.cols(); ++i)
      for (Eigen::Index j = 0; j < xis.cols(); ++j) sup = std::max(sup, std::abs(model(xs.col(i), xis.col(j))));
    out.s.push_back(sup);
  }
  const double last = out.s.back();
  const double prev = out.s.size() >= 2 ? out.s[out.s.size() - 2] : std::numeric_limits<double>::infinity();
  if (last <= tol && last <= prev) {
    out.verdict = Verdict::holds;
  } else if (out.s.size() >= 2 && last > tol && last >= 0.9 * prev) {
    out.verdict = Verdict::fails;
    out.note = "s_k stagnates above tolerance";
  } else {
    out.verdict = Verdict::inconclusive;
    out.note = "s_k still decreasing but above tolerance at the largest radius";
  }
  return out;
}

SubadditivityResult check_sqrt_subadditivity(const SymbolModel& model, std::size_t sample_count, std::uint64_t seed,
                                             double x_box, double rel_tol) {
  SubadditivityResult out;
  const int d = model.dimension();
  const double abs_tol = std::max(1e-14, model.traits().tolerance);
  for (std::size_t k = 0; k < sample_count; ++k) {
    CounterRng rng(seed, 0x5ADDu, static_cast<std::uint32_t>(k), 0u);
    Vector x(d), xi1(d), xi2(d);
    for (int i = 0; i < d; ++i) x(i) = x_box * (2.0 * rng.uniform() - 1.0);
    auto draw = [&](Vector& v) {
      for (int i = 0; i < d; ++i) v(i) = rng.normal();
      v *= std::pow(10.0, -3.0 + 6.0 * rng.uniform()) / v.norm();
    };
    draw(xi1);
    if (k % 4 == 3) xi2 = xi1;
    else draw(xi2);
    const double p1 = model(x, xi1).real();
    const double p2 = model(x, xi2).real();
    const double p12 = model(x, xi1 + xi2).real();
    ++out.samples;
    if (p1 < -abs_tol || p2 < -abs_tol || p12 < -abs_tol) {
      out.verdict = Verdict::fails;
      out.counterexample = std::array<Vector, 3>{x, xi1, xi2};
      out.note = "negative real part";
      return out;
    }
    const double rhs = std::sqrt(std::max(0.0, p1)) + std::sqrt(std::max(0.0, p2));
    const double lhs = std::sqrt(std::max(0.0, p12));
    const double excess = (lhs - rhs) / std::max(rhs, 1e-300);
    out.worst_excess = std::max(out.worst_excess, excess);
    if (lhs > rhs * (1.0 + rel_tol) + std::sqrt(abs_tol)) {
      out.verdict = Verdict::fails;
      out.counterexample = std::array<Vector, 3>{x, xi1, xi2};
      std::ostringstream msg;
      msg << "sqrt(p(xi1 + xi2)) = " << lhs << " exceeds " << rhs;
      out.note = msg.str();
      return out;
    }
  }
  out.verdict = Verdict::holds;
  return out;
}

}  // namespace feller
