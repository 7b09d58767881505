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

#include "feller/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace feller {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/* r -> mean over directions of h(q_inf(r u)); a single ray for radial envelopes. */
ScalarFunction sphere_mean_of(const Envelope& env, std::function<double(double)> h, double scale = 1.0) {
  const int d = env.dimension();
  if (env.radial()) {
    return [&env, h, scale, d](double r) {
      Vector xi = Vector::Zero(d);
      xi(0) = scale * r;
      return h(env.q_inf(xi));
    };
  }
  Matrix dirs = direction_set(d, kSphereDirections);
  return [&env, h, scale, dirs](double r) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < dirs.cols(); ++j) acc += h(env.q_inf(scale * r * dirs.col(j)));
    return acc / static_cast<double>(dirs.cols());
  };
}

double reciprocal(double q) { return q > 0.0 ? 1.0 / q : std::numeric_limits<double>::infinity(); }

void require_decided(const IntegralResult& r, const char* what) {
  if (r.classification == Convergence::undetermined) {
    std::ostringstream msg;
    msg << what << ": shell test undetermined (error estimate " << r.abs_error_estimate << ")";
    throw NumericalError(msg.str(), r.abs_error_estimate);
  }
}

}  // namespace

double char_fn_bound(const Envelope& env, double t, const Vector& xi) {
  if (!(t >= 0.0)) throw DomainError("char_fn_bound needs t >= 0");
  if (t == 0.0) return 1.0;
  return std::exp(-(t / 16.0) * env.q_inf(2.0 * xi));
}

BoundValue heat_kernel_sup_bound(const Envelope& env, double t, const ShellOptions& opts) {
  if (!(t > 0.0)) throw DomainError("heat_kernel_sup_bound needs t > 0");
  const int d = env.dimension();
  ScalarFunction f = sphere_mean_of(env, [t](double q) { return std::exp(-(t / 16.0) * q); });
  IntegralResult r = integrate_radial(f, 0.0, std::numeric_limits<double>::infinity(), d, opts);
  BoundValue out;
  if (r.infinite || r.classification == Convergence::divergent_at_infinity ||
      r.classification == Convergence::divergent_at_zero) {
    out.infinite = true;
  } else {
    require_decided(r, "heat_kernel_sup_bound");
    out.value = r.value * std::pow(4.0 * kPi, -d);
  }
  out.evidence = std::move(r);
  return out;
}

CriterionReport test_ultracontractivity(const Envelope& env, const UltracontractivityOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = "ultracontractivity";
  std::vector<double> radii = opts.radii;
  if (radii.empty())
    for (int k = 1; k <= 8; ++k) radii.push_back(std::pow(10.0, k));
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] > radii[k - 1])) throw PreconditionError("ultracontractivity radii must increase");
  const int d = env.dimension();
  const int count = d == 1 ? 2 : (d == 2 ? 64 : kSphereDirections);
  Matrix dirs = env.radial() ? Matrix(Vector::Unit(d, 0)) : direction_set(d, count);
  for (double R : radii) {
    double m = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < dirs.cols(); ++j) m = std::min(m, env.q_inf(R * dirs.col(j)));
    rep.trace.emplace_back(R, m / std::log1p(R));
  }
  const int n = static_cast<int>(rep.trace.size());
  const int L = std::min(opts.trend_length, n);
  bool increasing = L >= 2;
  for (int k = n - L + 1; increasing && k < n; ++k)
    if (!(rep.trace[k].second > rep.trace[k - 1].second)) increasing = false;
  const bool above = n > 0 && rep.trace.back().second > opts.threshold;
  rep.verdict = above && increasing ? Verdict::holds : Verdict::inconclusive;
  if (rep.verdict == Verdict::inconclusive)
    rep.notes.push_back("m_k did not exceed the threshold with an increasing trend; the criterion is only sufficient");
  rep.parameters = {{"threshold", opts.threshold}, {"trend_length", static_cast<double>(opts.trend_length)}};
  rep.optimistic_caveat = env.optimistic_caveat();
  rep.wall_seconds = seconds_since(start);
  return rep;
}

CriterionReport test_transience(const Envelope& env, double r, bool radial_shortcut, const ShellOptions& opts) {
  if (!(r > 0.0)) throw DomainError("test_transience needs r > 0");
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = "transience";
  ScalarFunction f = sphere_mean_of(env, reciprocal);
  IntegralResult res = classify_improper(f, env.dimension(), r, opts);
  rep.verdict = res.convergent() ? Verdict::holds : Verdict::inconclusive;
  if (radial_shortcut) {
    rep.notes.push_back("radial envelopes with unbounded real part declared: a single radius suffices");
  } else {
    rep.notes.push_back(
        "the criterion asks for every r > 0; evaluated at the given r only, convergence near 0 does not depend on r");
  }
  if (res.classification == Convergence::divergent_at_zero)
    rep.notes.push_back("integral diverges at the origin: no conclusion (the condition is sufficient only)");
  if (res.classification == Convergence::undetermined) rep.notes.push_back("shell test undetermined");
  rep.integral = std::move(res);
  rep.parameters = {{"r", r}, {"radial_shortcut", radial_shortcut ? 1.0 : 0.0}};
  rep.optimistic_caveat = env.optimistic_caveat();
  rep.wall_seconds = seconds_since(start);
  return rep;
}

CriterionReport test_local_times(const Envelope& env, const ShellOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = "local_times";
  ScalarFunction f = sphere_mean_of(env, [](double q) { return 1.0 / (1.0 + std::max(q, 0.0)); });
  IntegralResult res = classify_improper(f, env.dimension(), std::numeric_limits<double>::infinity(), opts);
  rep.verdict = res.convergent() ? Verdict::holds : Verdict::inconclusive;
  if (res.classification == Convergence::divergent_at_infinity)
    rep.notes.push_back("integral diverges at infinity: no conclusion (the condition is sufficient only)");
  if (res.classification == Convergence::undetermined) rep.notes.push_back("shell test undetermined");
  rep.integral = std::move(res);
  rep.optimistic_caveat = env.optimistic_caveat();
  rep.wall_seconds = seconds_since(start);
  return rep;
}

BoundValue occupation_bound(const Envelope& env, double r, const ShellOptions& opts) {
  if (!(r > 0.0)) throw DomainError("occupation_bound needs r > 0");
  const int d = env.dimension();
  ScalarFunction f = sphere_mean_of(env, reciprocal, 2.0);
  IntegralResult res = classify_improper(f, d, 2.0 * r * std::sqrt(static_cast<double>(d)), opts);
  BoundValue out;
  if (res.infinite || res.classification == Convergence::divergent_at_zero) {
    out.infinite = true;
  } else {
    require_decided(res, "occupation_bound");
    out.value = std::pow(4.0, d + 2) / std::pow(kPi * r, d) * res.value;
  }
  out.evidence = std::move(res);
  return out;
}

double local_time_fourier_bound(const Envelope& env, const Vector& xi) {
  return 16.0 / (16.0 + std::max(0.0, env.q_inf(xi)));
}

SmallTimeHorizon small_time_horizon(const SymbolModel& model, const Envelope& env, const Vector& xi, double eps,
                                    double sector_constant, std::optional<double> c1) {
  if (model.dimension() != env.dimension() || xi.size() != env.dimension())
    throw DomainError("small_time_horizon: dimension mismatch");
  if (!(sector_constant >= 0.0 && sector_constant < 1.0))
    throw DomainError("small_time_horizon needs a sector constant in [0, 1)");
  if (!(eps > 0.0 && eps < 1.0 - sector_constant)) throw DomainError("small_time_horizon needs eps in (0, 1 - c)");
  const double r = xi.norm();
  const EnvelopeValues v = env.at(xi);
  if (!(r > 0.0) || !(v.q_inf > 0.0)) throw PreconditionError("small_time_horizon needs q_inf(xi) > 0");
  SmallTimeHorizon h;
  h.c1 = c1 ? *c1 : bump_constant(env.dimension());
  h.g1 = eps / (4.0 * r) * std::min(v.q_inf / (1.0 + v.im_sup), 1.0);
  h.g2 = eps / (4.0 * r) * v.q_inf / v.re_sup;
  h.t1 = eps / (8.0 * v.q_sup);
  const double s1 = env.ball_sup(1.0 / h.g1);
  const double s2 = env.ball_sup(1.0 / h.g2);
  h.t2 = std::min(h.t1, eps * v.q_inf / (2.0 * h.c1 * v.q_sup * (3.0 * s1 + s2)));
  h.guaranteed_rate = (1.0 - sector_constant - eps) * v.q_inf;
  return h;
}

HeatExponentFit heat_exponent_fit(const Envelope& env, std::vector<double> t_grid, const ShellOptions& opts) {
  if (t_grid.empty())
    for (int k = 0; k <= 32; ++k) t_grid.push_back(std::pow(10.0, -4.0 + 8.0 * k / 32.0));
  HeatExponentFit fit;
  std::vector<double> small_x, small_y, large_x, large_y;
  for (double t : t_grid) {
    BoundValue b = heat_kernel_sup_bound(env, t, opts);
    if (b.infinite) {
      std::ostringstream msg;
      msg << "heat kernel bound diverges at t = " << t;
      throw NumericalError(msg.str(), std::numeric_limits<double>::infinity());
    }
    fit.curve.emplace_back(t, b.value);
    if (t <= 0.01) small_x.push_back(std::log(t)), small_y.push_back(std::log(b.value));
    if (t >= 100.0) large_x.push_back(std::log(t)), large_y.push_back(std::log(b.value));
  }
  auto slope = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2) throw PreconditionError("heat_exponent_fit needs two decades of t on each side of 1");
    Matrix A(x.size(), 2);
    Vector b(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = x[i];
      b(i) = y[i];
    }
    Vector coef = A.colPivHouseholderQr().solve(b);
    return coef(1);
  };
  fit.small_t_slope = slope(small_x, small_y);
  fit.large_t_slope = slope(large_x, large_y);
  return fit;
}

CriterionReport stable_like_outer_transience(const StableLikeSpec& spec, double K, double outer_box,
                                             const ShellOptions& opts) {
  if (spec.dimension != 1) throw PreconditionError("outer-index transience diagnostic is implemented for d = 1");
  if (!(K > 0.0 && outer_box > K)) throw DomainError("need 0 < K < outer_box");
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = "transience_outer_index";
  double a_out = 0.0;
  constexpr int kSamples = 4001;
  Vector x(1);
  for (int k = 0; k < kSamples; ++k) {
    const double s = K + (outer_box - K) * k / (kSamples - 1);
    for (double sign : {1.0, -1.0}) {
      x(0) = sign * s;
      a_out = std::max(a_out, spec.alpha(x));
    }
  }
  rep.parameters = {{"K", K}, {"outer_box", outer_box}, {"sup_alpha_outside", a_out}};
  rep.notes.push_back(
      "diagnostic only: the conclusion rests on modifying the index on a compact set, which is not implemented");
  rep.notes.push_back("sup of alpha outside |x| >= K is sampled up to |x| = outer_box only");
  if (a_out < 1.0) {
    IntegralResult res = classify_improper([a_out](double r) { return std::pow(r, -a_out); }, 1, 1.0, opts);
    rep.verdict = res.convergent() ? Verdict::holds : Verdict::inconclusive;
    rep.integral = std::move(res);
  } else {
    rep.verdict = Verdict::inconclusive;
    rep.notes.push_back("index reaches 1 outside the compact set");
  }
  rep.wall_seconds = seconds_since(start);
  return rep;
}

}  // namespace feller
