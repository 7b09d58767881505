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

#include "feller/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace feller {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21 tables).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208323180876, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const ScalarFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 21> fv{};
  fv[10] = fc;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv[j] = f1;
    fv[20 - j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[20 - j] - mean));

  resk *= half;
  resg *= half;
  resasc *= std::abs(half);
  resabs *= std::abs(half);
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, resk, err};
}

}  // namespace

void composite_kronrod(double a, double b, int panels, std::vector<double>& nodes, std::vector<double>& weights) {
  if (panels < 1) throw DomainError("composite_kronrod needs at least one panel");
  nodes.clear();
  weights.clear();
  const double width = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double center = a + (k + 0.5) * width;
    const double half = 0.5 * width;
    for (int j = 0; j < 10; ++j) {
      nodes.push_back(center - half * kXgk[j]);
      weights.push_back(half * kWgk[j]);
      nodes.push_back(center + half * kXgk[j]);
      weights.push_back(half * kWgk[j]);
    }
    nodes.push_back(center);
    weights.push_back(half * kWgk[10]);
  }
}

QuadratureValue integrate_interval(const ScalarFunction& f, double a, double b, const QuadratureConfig& cfg) {
  if (a == b) return {};
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_interval needs finite limits");
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  int evaluations = 21;
  int pieces = 1;
  while (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) && pieces < cfg.max_subdivisions) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval exhausted at machine precision
    heap.pop();
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    evaluations += 42;
    ++pieces;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  QuadratureValue out;
  out.value = total;
  out.abs_error = error;
  out.converged = std::isfinite(total) && error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  out.evaluations = evaluations;
  return out;
}

QuadratureValue wynn_epsilon(const std::vector<double>& sums) {
  const std::size_t n = sums.size();
  QuadratureValue out;
  if (n == 0) return out;
  out.value = sums.back();
  out.abs_error = n >= 2 ? std::abs(sums[n - 1] - sums[n - 2]) : std::numeric_limits<double>::infinity();
  if (n < 3) return out;

  std::vector<double> older(n + 1, 0.0);
  std::vector<double> current = sums;
  std::vector<double> estimates{sums.back()};
  for (std::size_t k = 0; current.size() >= 2; ++k) {
    std::vector<double> next(current.size() - 1);
    for (std::size_t j = 0; j + 1 < current.size(); ++j) {
      const double diff = current[j + 1] - current[j];
      if (diff == 0.0) {
        // Column has converged exactly.
        if (k % 2 == 0) {
          out.value = current[j + 1];
          out.abs_error = 0.0;
          return out;
        }
        next.resize(j);
        break;
      }
      next[j] = older[j + 1] + 1.0 / diff;
    }
    if (next.empty()) break;
    if (k % 2 == 1) estimates.push_back(next.back());
    older = std::move(current);
    current = std::move(next);
  }
  const std::size_t m = estimates.size();
  out.value = estimates.back();
  if (m >= 2) {
    out.abs_error = std::abs(estimates[m - 1] - estimates[m - 2]);
    if (m >= 3) out.abs_error = std::max(out.abs_error, std::abs(estimates[m - 2] - estimates[m - 3]) * 1e-3);
  }
  if (!std::isfinite(out.value)) {
    out.value = sums.back();
    out.abs_error = std::abs(sums[n - 1] - sums[n - 2]);
  }
  return out;
}

QuadratureValue integrate_panel_series(const ScalarFunction& g, double a, double first_boundary, double spacing,
                                       const QuadratureConfig& cfg) {
  if (!(spacing > 0.0)) throw DomainError("panel spacing must be positive");
  QuadratureConfig panel_cfg = cfg;
  panel_cfg.rel_tol = std::min(cfg.rel_tol, 1e-11);
  panel_cfg.abs_tol = cfg.abs_tol * 1e-3;

  double z = first_boundary;
  while (z <= a) z += spacing;
  QuadratureValue head = integrate_interval(g, a, z, panel_cfg);

  std::vector<double> sums{head.value};
  double quad_error = head.abs_error;
  int evaluations = head.evaluations;
  QuadratureValue previous{head.value, std::numeric_limits<double>::infinity(), false, 0};
  constexpr int kMaxPanels = 400;
  static constexpr std::ptrdiff_t kWindow = 40;
  auto window = [&sums]() {
    return std::vector<double>(sums.end() - std::min<std::ptrdiff_t>(kWindow, sums.size()), sums.end());
  };
  int small_panels = 0;
  for (int panel = 0; panel < kMaxPanels; ++panel) {
    QuadratureValue piece = integrate_interval(g, z, z + spacing, panel_cfg);
    z += spacing;
    evaluations += piece.evaluations;
    quad_error += piece.abs_error;
    sums.push_back(sums.back() + piece.value);
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(sums.back()));
    small_panels = std::abs(piece.value) < 0.1 * tol ? small_panels + 1 : 0;
    if (small_panels >= 3) return {sums.back(), quad_error + 3.0 * std::abs(piece.value), true, evaluations};
    if (sums.size() < 10) continue;
    QuadratureValue est = wynn_epsilon(window());
    const double err = std::max(est.abs_error, std::abs(est.value - previous.value)) + quad_error;
    if (err <= tol) return {est.value, err, true, evaluations};
    previous = est;
  }
  QuadratureValue est = wynn_epsilon(window());
  est.abs_error += quad_error;
  est.converged = false;
  est.evaluations = evaluations;
  return est;
}

QuadratureValue integrate_fourier_tail(const ScalarFunction& f, double a, double omega, Trig trig,
                                       const QuadratureConfig& cfg) {
  if (!(omega > 0.0)) throw DomainError("integrate_fourier_tail needs omega > 0");
  const double half_period = kPi / omega;
  const double offset = trig == Trig::cos ? 0.5 : 0.0;
  ScalarFunction g = [&f, omega, trig](double z) {
    return f(z) * (trig == Trig::cos ? std::cos(omega * z) : std::sin(omega * z));
  };
  const double j = std::floor(a / half_period - offset);
  return integrate_panel_series(g, a, (j + offset) * half_period, half_period, cfg);
}

std::string to_string(Convergence c) {
  switch (c) {
    case Convergence::convergent: return "convergent";
    case Convergence::divergent_at_zero: return "divergent_at_zero";
    case Convergence::divergent_at_infinity: return "divergent_at_infinity";
    case Convergence::undetermined: return "undetermined";
  }
  return "undetermined";
}

double unit_sphere_area(int d) {
  if (d < 1) throw DomainError("dimension must be positive");
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

namespace {

struct SeriesResult {
  double value = 0.0;
  double error = 0.0;
  bool infinite = false;
  Convergence classification = Convergence::undetermined;
  std::vector<ShellEntry> trace;
};

enum class Verdict { more, convergent, divergent, undetermined };

/* Ratio test on the trailing window of shell contributions. */
Verdict inspect_tail(const std::vector<double>& s, double sum, double quad_error, const ShellOptions& o, bool exhausted,
                     double& tail, double& tail_error) {
  const int n = static_cast<int>(s.size());
  const int w = std::min(o.window, n);
  tail = 0.0;
  tail_error = 0.0;
  bool all_zero = true;
  bool same_sign = true;
  const double sign = s[n - 1] >= 0 ? 1.0 : -1.0;
  for (int i = n - w; i < n; ++i) {
    if (s[i] != 0.0) all_zero = false;
    if (s[i] * sign <= 0.0) same_sign = false;
  }
  if (all_zero) return Verdict::convergent;

  const double tol = std::max(o.abs_tol, o.rel_tol * std::abs(sum));
  if (same_sign) {
    bool flat = true;
    bool geometric = true;
    double rmax = 0.0;
    for (int i = n - w; i + 1 < n; ++i) {
      const double r = s[i + 1] / s[i];
      if (r < 1.0 - o.flat_tolerance) flat = false;
      if (!(r < 1.0)) geometric = false;
      rmax = std::max(rmax, r);
    }
    if (flat) return Verdict::divergent;
    if (geometric) {
      const double r_last = s[n - 1] / s[n - 2];
      const double r_prev = s[n - 2] / s[n - 3];
      tail = s[n - 1] * r_last / (1.0 - r_last);
      tail_error = std::abs(s[n - 1]) * std::abs(r_last - r_prev) / ((1.0 - rmax) * (1.0 - rmax));
      if (tail_error + quad_error <= tol || exhausted) return Verdict::convergent;
      return Verdict::more;
    }
  } else {
    // Sign changes: accept only once the contributions are negligible.
    double mag = 0.0;
    for (int i = n - w; i < n; ++i) mag = std::max(mag, std::abs(s[i]));
    if (mag * w <= tol) {
      tail_error = mag * w;
      return Verdict::convergent;
    }
  }
  return exhausted ? Verdict::undetermined : Verdict::more;
}

/* Dyadic shells from `base` toward 0 (inward) or infinity (outward). */
SeriesResult shell_series(const ScalarFunction& g, double base, bool inward, const ShellOptions& o) {
  SeriesResult out;
  std::vector<double> shells;
  double quad_error = 0.0;
  for (int k = 0; k < o.max_shells; ++k) {
    const int index = inward ? -(k + 1) : k;
    const double lo = base * std::ldexp(1.0, index);
    const double hi = 2.0 * lo;
    QuadratureValue q = integrate_interval(g, lo, hi, o.quad);
    out.trace.push_back({index, q.value});
    if (!std::isfinite(q.value)) {
      out.infinite = true;
      out.classification = inward ? Convergence::divergent_at_zero : Convergence::divergent_at_infinity;
      return out;
    }
    shells.push_back(q.value);
    out.value += q.value;
    quad_error += q.abs_error;
    if (k + 1 < o.min_shells) continue;
    double tail = 0.0, tail_error = 0.0;
    const bool exhausted = k + 1 == o.max_shells;
    switch (inspect_tail(shells, out.value, quad_error, o, exhausted, tail, tail_error)) {
      case Verdict::more: continue;
      case Verdict::convergent:
        out.value += tail;
        out.error = quad_error + tail_error;
        out.classification = Convergence::convergent;
        return out;
      case Verdict::divergent:
        out.infinite = true;
        out.classification = inward ? Convergence::divergent_at_zero : Convergence::divergent_at_infinity;
        return out;
      case Verdict::undetermined:
        out.error = quad_error + std::abs(shells.back()) * o.window;
        out.classification = Convergence::undetermined;
        return out;
    }
  }
  out.classification = Convergence::undetermined;
  return out;
}

SeriesResult finite_annulus(const ScalarFunction& g, double a, double b, const ShellOptions& o) {
  SeriesResult out;
  out.classification = Convergence::convergent;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, 2.0 * lo);
    QuadratureValue q = integrate_interval(g, lo, hi, o.quad);
    out.trace.push_back({static_cast<int>(std::floor(std::log2(lo / a))), q.value});
    if (!std::isfinite(q.value)) {
      out.infinite = true;
      out.classification = Convergence::undetermined;
      return out;
    }
    out.value += q.value;
    out.error += q.abs_error;
    lo = hi;
  }
  return out;
}

void merge(IntegralResult& acc, const SeriesResult& part) {
  acc.value += part.value;
  acc.abs_error_estimate += part.error;
  acc.annulus_trace.insert(acc.annulus_trace.end(), part.trace.begin(), part.trace.end());
  auto rank = [](Convergence c) {
    switch (c) {
      case Convergence::convergent: return 0;
      case Convergence::undetermined: return 1;
      default: return 2;
    }
  };
  if (part.infinite) acc.infinite = true;
  if (rank(part.classification) > rank(acc.classification)) acc.classification = part.classification;
}

}  // namespace

IntegralResult integrate_to_infinity(const ScalarFunction& f, double a, const ShellOptions& opts) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("integrate_to_infinity needs a finite a > 0");
  IntegralResult result;
  result.classification = Convergence::convergent;
  result.shell_base = a;
  merge(result, shell_series(f, a, false, opts));
  if (result.infinite) {
    result.value = std::numeric_limits<double>::infinity();
    result.abs_error_estimate = 0.0;
  }
  return result;
}

IntegralResult integrate_radial(const ScalarFunction& f, double a, double b, int d, const ShellOptions& opts) {
  if (!(a >= 0.0) || !(b >= a)) throw DomainError("integrate_radial needs 0 <= a <= b");
  const double area = unit_sphere_area(d);
  ScalarFunction g = [&f, area, d](double r) { return area * f(r) * std::pow(r, d - 1); };
  IntegralResult result;
  result.classification = Convergence::convergent;
  if (a == b) return result;

  const bool infinite_outer = std::isinf(b);
  if (a == 0.0) {
    const double base = infinite_outer ? 1.0 : b;
    result.shell_base = base;
    merge(result, shell_series(g, base, true, opts));
    if (infinite_outer) merge(result, shell_series(g, base, false, opts));
  } else if (infinite_outer) {
    result.shell_base = a;
    merge(result, shell_series(g, a, false, opts));
  } else {
    result.shell_base = a;
    merge(result, finite_annulus(g, a, b, opts));
  }
  std::sort(result.annulus_trace.begin(), result.annulus_trace.end(),
            [](const ShellEntry& x, const ShellEntry& y) { return x.index < y.index; });
  if (result.infinite) {
    result.value = std::numeric_limits<double>::infinity();
    result.abs_error_estimate = 0.0;
  }
  return result;
}

IntegralResult classify_improper(const ScalarFunction& sphere_mean, int d, double outer_radius,
                                 const ShellOptions& opts) {
  if (!(outer_radius > 0.0)) throw DomainError("classify_improper needs a positive outer radius");
  return integrate_radial(sphere_mean, 0.0, outer_radius, d, opts);
}

Matrix direction_set(int d, int count) {
  if (d < 1 || d > 3) throw DomainError("direction sets are provided for d = 1, 2, 3");
  if (d == 1) {
    Matrix u(1, 2);
    u << 1.0, -1.0;
    return u;
  }
  if (count < 1) throw DomainError("direction count must be positive");
  Matrix u(d, count);
  if (d == 2) {
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * kPi * (j + 0.5) / count;
      u(0, j) = std::cos(phi);
      u(1, j) = std::sin(phi);
    }
    return u;
  }
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int j = 0; j < count; ++j) {
    const double z = 1.0 - (2.0 * j + 1.0) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * j;
    u(0, j) = rho * std::cos(phi);
    u(1, j) = rho * std::sin(phi);
    u(2, j) = z;
  }
  return u;
}

ScalarFunction spherical_mean(std::function<double(const Vector&)> f, int d, int count) {
  Matrix dirs = direction_set(d, count);
  return [f = std::move(f), dirs](double r) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < dirs.cols(); ++j) acc += f(r * dirs.col(j));
    return acc / static_cast<double>(dirs.cols());
  };
}

}  // namespace feller
