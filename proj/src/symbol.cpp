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

#include "feller/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace feller {

std::string to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::closed_form: return "closed_form";
    case SymbolKind::levy_characteristics: return "levy_characteristics";
    case SymbolKind::stable_like: return "stable_like";
    case SymbolKind::subordinated: return "subordinated";
    case SymbolKind::symmetrized: return "symmetrized";
  }
  return "closed_form";
}

Complex LevyExponent::operator()(const Vector& xi) const {
  const double r2 = xi.squaredNorm();
  double re = diffusion * r2;
  if (stable_scale != 0.0 && r2 > 0.0) re += stable_scale * std::pow(std::sqrt(r2), stable_index);
  if (jump_rate != 0.0) re += -jump_rate * std::expm1(-0.5 * jump_scale * jump_scale * r2);
  double im = 0.0;
  if (drift.size() > 0) im = -drift.dot(xi);
  return {re, im};
}

SymbolModel::SymbolModel(SymbolKind kind, int dimension, std::string name, SymbolTraits traits, SymbolFunction fn)
    : kind_(kind), dimension_(dimension), name_(std::move(name)), traits_(traits), fn_(std::move(fn)) {
  if (dimension_ < 1) throw ConfigError("symbol dimension must be positive");
}

Complex SymbolModel::operator()(const Vector& x, const Vector& xi) const { return eval_symbol(*this, x, xi); }

SymbolModel& SymbolModel::with_stable_like(StableLikeSpec spec) {
  stable_like_ = std::move(spec);
  return *this;
}

SymbolModel& SymbolModel::with_levy_exponent(LevyExponent e) {
  levy_exponent_ = std::move(e);
  return *this;
}

Complex eval_symbol(const SymbolModel& model, const Vector& x, const Vector& xi) {
  if (!model) throw PreconditionError("symbol model is empty");
  if (x.size() != model.dimension() || xi.size() != model.dimension()) {
    std::ostringstream msg;
    msg << "dimension mismatch: model has d = " << model.dimension() << ", got x in R^" << x.size()
        << " and xi in R^" << xi.size();
    throw DomainError(msg.str());
  }
  if (!x.allFinite() || !xi.allFinite()) throw DomainError("symbol arguments must be finite");
  return model.fn_(x, xi);
}

double stable_like_constant(double alpha, int d) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("stable_like_constant needs alpha in (0, 2)");
  if (d < 1) throw DomainError("dimension must be positive");
  const double log_ratio = std::lgamma(0.5 * (alpha + d)) - std::lgamma(1.0 - 0.5 * alpha);
  return alpha * std::pow(2.0, alpha - 1.0) * std::exp(log_ratio) / std::pow(kPi, 0.5 * d);
}

SymbolModel levy_symbol(const LevyExponent& exponent, std::string name) {
  if (exponent.dimension < 1) throw ConfigError("dimension must be positive");
  if (exponent.drift.size() != 0 && exponent.drift.size() != exponent.dimension)
    throw ConfigError("drift has the wrong dimension");
  if (exponent.diffusion < 0.0 || exponent.stable_scale < 0.0 || exponent.jump_rate < 0.0)
    throw ConfigError("diffusion, stable scale and jump rate must be nonnegative");
  if (exponent.stable_scale > 0.0 && !(exponent.stable_index > 0.0 && exponent.stable_index <= 2.0))
    throw ConfigError("stable index must lie in (0, 2]");
  SymbolTraits traits;
  traits.x_independent = true;
  traits.real_valued = exponent.drift.size() == 0 || exponent.drift.isZero(0.0);
  traits.radial = traits.real_valued;
  traits.tolerance = 0.0;
  SymbolModel model(SymbolKind::closed_form, exponent.dimension, std::move(name), traits,
                    [exponent](const Vector&, const Vector& xi) { return exponent(xi); });
  model.with_levy_exponent(exponent);
  return model;
}

SymbolModel brownian(int d) {
  LevyExponent e;
  e.dimension = d;
  e.diffusion = 1.0;
  return levy_symbol(e, "brownian");
}

SymbolModel alpha_stable(double alpha, int d) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ConfigError("stable index must lie in (0, 2]");
  LevyExponent e;
  e.dimension = d;
  if (alpha == 2.0) {
    e.diffusion = 1.0;
  } else {
    e.stable_scale = 1.0;
    e.stable_index = alpha;
  }
  std::ostringstream name;
  name << "alpha_stable(" << alpha << ")";
  return levy_symbol(e, name.str());
}

SymbolModel cauchy(int d) {
  SymbolModel m = alpha_stable(1.0, d);
  return m;
}

SymbolModel compound_poisson(double rate, double jump_scale, int d) {
  if (!(rate >= 0.0) || !(jump_scale > 0.0)) throw ConfigError("compound Poisson needs rate >= 0, scale > 0");
  LevyExponent e;
  e.dimension = d;
  e.jump_rate = rate;
  e.jump_scale = jump_scale;
  return levy_symbol(e, "compound_poisson");
}

SymbolModel stable_like_symbol(const StableLikeSpec& spec) {
  if (spec.dimension < 1) throw ConfigError("dimension must be positive");
  if (!spec.alpha) throw ConfigError("stable-like model needs an index function alpha(x)");
  if (!(spec.alpha_min > 0.0 && spec.alpha_min <= spec.alpha_max && spec.alpha_max < 2.0))
    throw ConfigError("stable-like bounds must satisfy 0 < alpha_min <= alpha_max < 2");
  SymbolTraits traits;
  traits.real_valued = true;
  traits.radial = true;
  traits.tolerance = 0.0;
  const double lo = spec.alpha_min, hi = spec.alpha_max;
  auto alpha = spec.alpha;
  SymbolModel model(SymbolKind::stable_like, spec.dimension, "stable_like", traits,
                    [alpha, lo, hi](const Vector& x, const Vector& xi) {
                      const double a = alpha(x);
                      if (!(a >= lo - 1e-12 && a <= hi + 1e-12)) {
                        std::ostringstream msg;
                        msg << "alpha(x) = " << a << " leaves the declared range [" << lo << ", " << hi << "]";
                        throw DomainError(msg.str());
                      }
                      const double r = xi.norm();
                      return Complex(r == 0.0 ? 0.0 : std::pow(r, a), 0.0);
                    });
  model.with_stable_like(spec);
  return model;
}

std::vector<std::string> state_variables(int d) {
  std::vector<std::string> v{"x", "xn"};
  for (int i = 1; i <= d; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

std::vector<std::string> symbol_variables(int d) {
  std::vector<std::string> v{"x", "xi", "xn", "xin"};
  for (int i = 1; i <= d; ++i) v.push_back("x" + std::to_string(i));
  for (int i = 1; i <= d; ++i) v.push_back("xi" + std::to_string(i));
  return v;
}

namespace {

bool trivially_zero(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  return t.empty() || t == "0" || t == "0.0";
}

/* Grid of [-box, box]^d with n points per axis, used for declaration checks. */
std::vector<Vector> sample_box(int d, double box, int n) {
  std::vector<Vector> pts;
  int total = 1;
  for (int i = 0; i < d; ++i) total *= n;
  for (int k = 0; k < total; ++k) {
    Vector x(d);
    int rest = k;
    for (int i = 0; i < d; ++i) {
      x(i) = -box + 2.0 * box * (rest % n) / (n - 1);
      rest /= n;
    }
    pts.push_back(x);
  }
  return pts;
}

/* Small deterministic state sample: the origin and points along each axis. */
std::vector<Vector> probe_states(int d) {
  std::vector<Vector> pts{Vector::Zero(d)};
  for (double s : {0.5, -0.5, 3.0, -3.0}) {
    for (int i = 0; i < d; ++i) {
      Vector x = Vector::Zero(d);
      x(i) = s;
      pts.push_back(x);
    }
  }
  pts.push_back(Vector::Constant(d, 1.0));
  return pts;
}

std::vector<Vector> probe_frequencies(int d) {
  std::vector<Vector> pts;
  for (double s : {0.1, 1.0, 10.0, -0.7, 3.3}) {
    for (int i = 0; i < d; ++i) {
      Vector xi = Vector::Zero(d);
      xi(i) = s;
      pts.push_back(xi);
    }
    pts.push_back(Vector::Constant(d, s / std::sqrt(static_cast<double>(d))));
  }
  return pts;
}

}  // namespace

SymbolModel closed_form_symbol(int d, const std::string& re_expr, const std::string& im_expr, SymbolTraits traits,
                               std::string name) {
  if (d < 1) throw ConfigError("dimension must be positive");
  const auto vars = symbol_variables(d);
  Expression re = Expression::compile(re_expr, vars);
  const bool has_im = !trivially_zero(im_expr);
  Expression im = has_im ? Expression::compile(im_expr, vars) : Expression{};

  auto uses_none = [&](const Expression& e, std::size_t first, std::size_t count, std::vector<std::size_t> extra) {
    if (!e.valid()) return true;
    for (std::size_t i : extra)
      if (!e.independent_of(i)) return false;
    for (std::size_t i = first; i < first + count; ++i)
      if (!e.independent_of(i)) return false;
    return true;
  };
  const std::size_t dd = static_cast<std::size_t>(d);
  // indices: 0 x, 1 xi, 2 xn, 3 xin, 4.. x1..xd, 4+d.. xi1..xid
  traits.real_valued = !has_im;
  traits.x_independent = uses_none(re, 4, dd, {0, 2}) && uses_none(im, 4, dd, {0, 2});
  traits.radial = uses_none(re, 4 + dd, dd, {1}) && uses_none(im, 4 + dd, dd, {1});
  traits.tolerance = 0.0;

  SymbolFunction fn = [re, im, has_im, d](const Vector& x, const Vector& xi) {
    double buf[4 + 6];
    std::vector<double> heap;
    double* v = buf;
    if (d > 3) {
      heap.resize(4 + 2 * d);
      v = heap.data();
    }
    v[0] = x(0);
    v[1] = xi(0);
    v[2] = x.norm();
    v[3] = xi.norm();
    for (int i = 0; i < d; ++i) {
      v[4 + i] = x(i);
      v[4 + d + i] = xi(i);
    }
    std::span<const double> values(v, 4 + 2 * d);
    return Complex(re(values), has_im ? im(values) : 0.0);
  };
  return SymbolModel(SymbolKind::closed_form, d, std::move(name), traits, std::move(fn));
}

StableLikeSpec stable_like_from_expression(int d, const std::string& alpha_expr, double alpha_min, double alpha_max,
                                           bool smooth, double box) {
  if (d < 1) throw ConfigError("dimension must be positive");
  if (!(alpha_min > 0.0 && alpha_min <= alpha_max && alpha_max < 2.0))
    throw ConfigError("stable-like bounds must satisfy 0 < alpha_min <= alpha_max < 2");
  Expression e = Expression::compile(alpha_expr, state_variables(d));
  StableLikeSpec spec;
  spec.dimension = d;
  spec.alpha_min = alpha_min;
  spec.alpha_max = alpha_max;
  spec.smooth = smooth;
  spec.source = alpha_expr;
  spec.alpha = [e, d](const Vector& x) {
    double buf[2 + 3];
    std::vector<double> heap;
    double* v = buf;
    if (d > 3) {
      heap.resize(2 + d);
      v = heap.data();
    }
    v[0] = x(0);
    v[1] = x.norm();
    for (int i = 0; i < d; ++i) v[2 + i] = x(i);
    return e(std::span<const double>(v, 2 + d));
  };
  const int per_axis = d == 1 ? 2001 : (d == 2 ? 101 : 31);
  for (const Vector& x : sample_box(d, box, per_axis)) {
    const double a = spec.alpha(x);
    if (!(a > 0.0 && a <= 2.0) || a < alpha_min - 1e-12 || a > alpha_max + 1e-12) {
      std::ostringstream msg;
      msg << "alpha(x) = " << a << " at x = (" << x.transpose() << ") violates the declared bounds [" << alpha_min
          << ", " << alpha_max << "]";
      throw ConfigError(msg.str());
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Levy-Khintchine quadrature

namespace {

/* 1 - (mean of cos(s u_1) over the unit sphere in R^d). */
double one_minus_sphere_cos(double s, int d) {
  const double s2 = s * s;
  switch (d) {
    case 1: {
      const double h = std::sin(0.5 * s);
      return 2.0 * h * h;
    }
    case 2:
      if (std::abs(s) < 1e-2) return s2 / 4.0 - s2 * s2 / 64.0 + s2 * s2 * s2 / 2304.0;
      return 1.0 - std::cyl_bessel_j(0.0, std::abs(s));
    case 3:
      if (std::abs(s) < 1e-2) return s2 / 6.0 - s2 * s2 / 120.0 + s2 * s2 * s2 / 5040.0;
      return 1.0 - std::sin(s) / s;
  }
  throw DomainError("Levy-Khintchine quadrature supports d <= 3");
}

double sin_minus_linear(double y) {
  if (std::abs(y) < 0.1) {
    const double y2 = y * y;
    return -y * y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0 * (1.0 - y2 / 72.0)));
  }
  return std::sin(y) - y;
}

struct Accum {
  double value = 0.0;
  double error = 0.0;
  bool ok = true;

  void add(const QuadratureValue& q) {
    value += q.value;
    error += q.abs_error;
    ok = ok && q.converged;
  }
  void add(const IntegralResult& r) {
    if (!r.convergent() || r.infinite) {
      ok = false;
      error += std::abs(r.value) + r.abs_error_estimate;
      if (std::isfinite(r.value)) value += r.value;
      return;
    }
    value += r.value;
    error += r.abs_error_estimate;
  }
};

/* int_0^lo f(z) dz for f ~ z^(1 - beta) near zero, via z = lo * u^k with k = 1 / (2 - beta). */
QuadratureValue integrate_singular_head(const ScalarFunction& f, double lo, double beta, const QuadratureConfig& cfg) {
  const double k = beta > 0.0 ? 1.0 / std::max(2.0 - beta, 0.02) : 1.0;
  ScalarFunction g = [&f, lo, k](double u) {
    const double z = lo * std::pow(u, k);
    if (z <= 0.0) return 0.0;
    return f(z) * lo * k * std::pow(u, k - 1.0);
  };
  return integrate_interval(g, 0.0, 1.0, cfg);
}

/* Non-oscillatory integral over a possibly long finite range, split dyadically. */
QuadratureValue integrate_wide(const ScalarFunction& f, double a, double b, const QuadratureConfig& cfg) {
  QuadratureValue out;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, std::max(2.0 * lo, lo + 1.0));
    QuadratureValue q = integrate_interval(f, lo, hi, cfg);
    out.value += q.value;
    out.abs_error += q.abs_error;
    out.converged = out.converged && q.converged;
    out.evaluations += q.evaluations;
    lo = hi;
  }
  return out;
}

ShellOptions tail_options(const QuadratureConfig& cfg) {
  ShellOptions o;
  o.min_shells = 12;
  o.max_shells = 300;
  o.rel_tol = cfg.rel_tol * 0.1;
  o.abs_tol = cfg.abs_tol * 0.1;
  o.quad = QuadratureConfig{std::min(cfg.rel_tol, 1e-10), cfg.abs_tol * 1e-3, cfg.max_subdivisions};
  return o;
}

struct JumpPart {
  Complex value;
  double error;
  bool ok;
};

JumpPart jump_integral(const LevyCharacteristics& ch, const Vector& x, const Vector& xi) {
  const int d = ch.dimension;
  const double omega = xi.norm();
  if (!ch.density || omega == 0.0) return {Complex(0.0, 0.0), 0.0, true};
  const QuadratureConfig& cfg = ch.quadrature;
  const double beta = ch.singularity_exponent ? ch.singularity_exponent(x) : 0.0;
  const double eps = 1.0 / omega;
  const double lo = std::min(1.0, eps);

  Accum re, im;
  if (d == 1) {
    Vector zp(1), zm(1);
    ScalarFunction m_plus = [&](double z) {
      zp(0) = z;
      zm(0) = -z;
      return ch.density(x, zp) + ch.density(x, zm);
    };
    ScalarFunction head = [&](double z) { return one_minus_sphere_cos(omega * z, 1) * m_plus(z); };
    re.add(integrate_singular_head(head, lo, beta, cfg));
    if (eps > lo) re.add(integrate_wide(head, lo, eps, cfg));
    re.add(integrate_to_infinity(m_plus, eps, tail_options(cfg)));
    QuadratureValue osc = integrate_fourier_tail(m_plus, eps, omega, Trig::cos, cfg);
    osc.value = -osc.value;
    re.add(osc);

    if (!ch.symmetric_density) {
      Vector wp(1), wm(1);
      ScalarFunction m_minus = [&](double z) {
        wp(0) = z;
        wm(0) = -z;
        return ch.density(x, wp) - ch.density(x, wm);
      };
      ScalarFunction compensated = [&](double z) { return sin_minus_linear(omega * z) * m_minus(z); };
      ScalarFunction plain = [&](double z) { return std::sin(omega * z) * m_minus(z); };
      im.add(integrate_singular_head(compensated, lo, beta - 1.0, cfg));
      if (eps < 1.0) {
        im.add(integrate_interval(compensated, eps, 1.0, cfg));
        im.add(integrate_fourier_tail(m_minus, 1.0, omega, Trig::sin, cfg));
      } else {
        if (eps > 1.0) im.add(integrate_wide(plain, 1.0, eps, cfg));
        im.add(integrate_fourier_tail(m_minus, eps, omega, Trig::sin, cfg));
      }
      if (xi(0) < 0.0) im.value = -im.value;
    }
  } else {
    if (!ch.radial_density) throw ConfigError("Levy densities in d >= 2 must be radial");
    if (d > 3) throw DomainError("Levy-Khintchine quadrature supports d <= 3");
    const double area = unit_sphere_area(d);
    Vector z = Vector::Zero(d);
    ScalarFunction radial = [&](double rho) {
      z(0) = rho;
      return area * ch.density(x, z) * std::pow(rho, d - 1);
    };
    ScalarFunction head = [&](double rho) { return one_minus_sphere_cos(omega * rho, d) * radial(rho); };
    re.add(integrate_singular_head(head, lo, beta, cfg));
    if (eps > lo) re.add(integrate_wide(head, lo, eps, cfg));
    re.add(integrate_to_infinity(radial, eps, tail_options(cfg)));
    QuadratureValue osc;
    if (d == 3) {
      ScalarFunction scaled = [&](double rho) { return radial(rho) / (omega * rho); };
      osc = integrate_fourier_tail(scaled, eps, omega, Trig::sin, cfg);
    } else {
      ScalarFunction bessel = [&](double rho) { return std::cyl_bessel_j(0.0, omega * rho) * radial(rho); };
      const double spacing = kPi / omega;
      osc = integrate_panel_series(bessel, eps, 0.75 * spacing, spacing, cfg);
    }
    osc.value = -osc.value;
    re.add(osc);
  }
  // Im p carries a minus sign in front of the jump integral.
  return {Complex(re.value, -im.value), re.error + im.error, re.ok && im.ok};
}

void validate_characteristics(const LevyCharacteristics& ch) {
  const int d = ch.dimension;
  if (d < 1) throw ConfigError("dimension must be positive");
  if (ch.density && d >= 2 && !ch.radial_density) throw ConfigError("Levy densities in d >= 2 must be radial");
  for (const Vector& x : probe_states(d)) {
    if (ch.killing && !(ch.killing(x) >= 0.0)) throw ConfigError("killing rate c(x) must be nonnegative");
    if (ch.drift && ch.drift(x).size() != d) throw ConfigError("drift b(x) has the wrong dimension");
    if (ch.diffusion) {
      Matrix a = ch.diffusion(x);
      if (a.rows() != d || a.cols() != d) throw ConfigError("diffusion a(x) has the wrong shape");
      if (!a.isApprox(a.transpose(), 1e-12) && (a - a.transpose()).norm() > 1e-12)
        throw ConfigError("diffusion a(x) must be symmetric");
      Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, a.norm()))
        throw ConfigError("diffusion a(x) must be nonnegative definite");
    }
  }
}

}  // namespace

double levy_integrability(const LevyCharacteristics& ch, const Vector& x) {
  if (!ch.density) return 0.0;
  const int d = ch.dimension;
  const double beta = ch.singularity_exponent ? ch.singularity_exponent(x) : 0.0;
  const double area = unit_sphere_area(d);
  Vector z = Vector::Zero(d), zm = Vector::Zero(d);
  ScalarFunction radial = [&](double rho) {
    z(0) = rho;
    if (d == 1) {
      zm(0) = -rho;
      return ch.density(x, z) + ch.density(x, zm);
    }
    return area * ch.density(x, z) * std::pow(rho, d - 1);
  };
  ScalarFunction small = [&](double rho) { return rho * rho * radial(rho); };
  Accum acc;
  acc.add(integrate_singular_head(small, 1.0, beta, ch.quadrature));
  IntegralResult tail = integrate_to_infinity(radial, 1.0, tail_options(ch.quadrature));
  if (tail.infinite || !tail.convergent()) return std::numeric_limits<double>::infinity();
  acc.add(tail);
  return acc.value;
}

SymbolModel levy_characteristics_symbol(const LevyCharacteristics& chars, std::string name) {
  validate_characteristics(chars);
  for (const Vector& x : probe_states(chars.dimension)) {
    const double w = levy_integrability(chars, x);
    if (!std::isfinite(w)) {
      std::ostringstream msg;
      msg << "jump density fails int (1 ^ |z|^2) n(x, z) dz < inf at x = (" << x.transpose() << ")";
      throw ConfigError(msg.str());
    }
  }
  SymbolTraits traits;
  traits.conservative = !chars.killing;
  traits.real_valued = !chars.drift && (chars.symmetric_density || chars.radial_density || !chars.density);
  traits.tolerance = chars.quadrature.rel_tol;
  SymbolFunction fn = [chars](const Vector& x, const Vector& xi) {
    double re = 0.0, im = 0.0;
    if (chars.killing) re += chars.killing(x);
    if (chars.diffusion) re += 0.5 * xi.dot(chars.diffusion(x) * xi);
    if (chars.drift) im -= chars.drift(x).dot(xi);
    JumpPart jump = jump_integral(chars, x, xi);
    const double tol = std::max(chars.quadrature.abs_tol, chars.quadrature.rel_tol * std::abs(jump.value));
    if (!jump.ok && jump.error > tol) {
      std::ostringstream msg;
      msg << "Levy-Khintchine quadrature did not converge at |xi| = " << xi.norm() << " (error " << jump.error
          << ")";
      throw NumericalError(msg.str(), jump.error);
    }
    return Complex(re + jump.value.real(), im + jump.value.imag());
  };
  return SymbolModel(SymbolKind::levy_characteristics, chars.dimension, std::move(name), traits, std::move(fn));
}

// ---------------------------------------------------------------------------
// Subordination and symmetrization

SymbolModel subordinate(const SymbolModel& base, const BernsteinSpec& bernstein) {
  if (!base) throw PreconditionError("subordinate: empty base symbol");
  if (!bernstein.f) throw ConfigError("subordinate: missing Bernstein function");
  const int d = base.dimension();
  const auto states = probe_states(d);
  for (const Vector& x : states) {
    if (std::abs(base(x, Vector::Zero(d))) > std::max(1e-12, base.traits().tolerance))
      throw PreconditionError("subordinate: base symbol must vanish at xi = 0");
    for (const Vector& xi : probe_frequencies(d)) {
      const Complex v = base(x, xi);
      if (std::abs(v.imag()) > std::max(1e-12, base.traits().tolerance) * std::max(1.0, std::abs(v))) {
        std::ostringstream msg;
        msg << "subordinate: base symbol has Im p = " << v.imag() << " at xi = (" << xi.transpose() << ")";
        throw PreconditionError(msg.str());
      }
    }
  }

  // Sampled Bernstein checks on a log grid in s.
  std::vector<double> s{0.0};
  for (int j = 0; j <= 90; ++j) s.push_back(std::pow(10.0, -4.0 + 8.0 * j / 90.0));
  for (const Vector& x : states) {
    std::vector<double> f(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) f[j] = bernstein.f(x, s[j]);
    if (std::abs(f[0]) > 1e-12) throw ConfigError("Bernstein function must satisfy f(x, 0) = 0");
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!std::isfinite(f[j]) || f[j] < -1e-12) throw ConfigError("Bernstein function must be finite and nonnegative");
      if (f[j] > bernstein.growth * (1.0 + s[j]) * (1.0 + 1e-9))
        throw ConfigError("Bernstein function exceeds its declared linear growth bound");
      if (j > 0 && f[j] < f[j - 1] - 1e-12 * std::max(1.0, std::abs(f[j - 1])))
        throw ConfigError("Bernstein function must be nondecreasing");
      if (j > 1) {
        const double left = (f[j - 1] - f[j - 2]) / (s[j - 1] - s[j - 2]);
        const double right = (f[j] - f[j - 1]) / (s[j] - s[j - 1]);
        if (right > left + 1e-9 * std::max(1.0, std::abs(left)))
          throw ConfigError("Bernstein function must be concave");
      }
    }
  }

  SymbolTraits traits = base.traits();
  traits.real_valued = true;
  traits.x_independent = base.traits().x_independent && bernstein.x_independent;
  auto f = bernstein.f;
  SymbolModel inner = base;
  return SymbolModel(SymbolKind::subordinated, d, "subordinated(" + base.name() + ")", traits,
                     [inner, f](const Vector& x, const Vector& xi) {
                       return Complex(f(x, std::max(0.0, inner(x, xi).real())), 0.0);
                     });
}

SymbolModel symmetrize(const SymbolModel& model) {
  if (!model) throw PreconditionError("symmetrize: empty symbol");
  SymbolTraits traits = model.traits();
  traits.real_valued = true;
  SymbolModel inner = model;
  SymbolModel out(SymbolKind::symmetrized, model.dimension(), "symmetrized(" + model.name() + ")", traits,
                  [inner](const Vector& x, const Vector& xi) {
                    return Complex(2.0 * inner(x, 0.5 * xi).real(), 0.0);
                  });
  if (const auto& e = model.levy_exponent()) {
    // 2 Re psi(xi / 2) stays in the exactly samplable family.
    LevyExponent s = *e;
    s.drift = Vector();
    s.diffusion = 0.5 * e->diffusion;
    s.stable_scale = std::pow(2.0, 1.0 - e->stable_index) * e->stable_scale;
    s.jump_rate = 2.0 * e->jump_rate;
    s.jump_scale = 0.5 * e->jump_scale;
    out.with_levy_exponent(s);
  }
  return out;
}

}  // namespace feller
