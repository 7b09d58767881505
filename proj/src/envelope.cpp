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

#include "feller/envelope.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "feller/optimize.hpp"
#include "feller/quadrature.hpp"
#include "feller/symbol_checks.hpp"

namespace feller {

std::string to_string(EnvelopeProvenance p) { return p == EnvelopeProvenance::grid ? "grid" : "closed_form"; }

std::string to_string(TailFlag t) {
  switch (t) {
    case TailFlag::none: return "none";
    case TailFlag::periodic: return "periodic";
    case TailFlag::constant_at_infinity: return "constant_at_infinity";
    case TailFlag::closed_form: return "closed_form";
  }
  return "none";
}

TailFlag tail_flag_from_string(const std::string& s) {
  if (s == "none" || s.empty()) return TailFlag::none;
  if (s == "periodic") return TailFlag::periodic;
  if (s == "constant_at_infinity") return TailFlag::constant_at_infinity;
  if (s == "closed_form") return TailFlag::closed_form;
  throw ConfigError("unknown tail flag '" + s + "' (expected periodic, constant_at_infinity or closed_form)");
}

struct Envelope::Cache {
  std::shared_mutex mutex;
  std::unordered_map<std::string, EnvelopeValues> values;
};

namespace {

constexpr std::size_t kCacheLimit = 1u << 20;

std::string key_of(const Vector& xi) {
  std::string k(sizeof(double) * static_cast<std::size_t>(xi.size()), '\0');
  std::memcpy(k.data(), xi.data(), k.size());
  return k;
}

}  // namespace

Envelope::Envelope(int dimension, EnvelopeProvenance provenance, bool radial, EnvelopeFunction fn,
                   std::string description)
    : dimension_(dimension), provenance_(provenance), radial_(radial), fn_(std::move(fn)),
      description_(std::move(description)) {
  if (provenance_ == EnvelopeProvenance::grid) cache_ = std::make_shared<Cache>();
}

EnvelopeValues Envelope::at(const Vector& xi) const {
  if (!fn_) throw PreconditionError("envelope is empty");
  if (xi.size() != dimension_) throw DomainError("envelope queried with a frequency of the wrong dimension");
  if (!cache_) return fn_(xi);
  const std::string key = key_of(xi);
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->values.find(key);
    if (it != cache_->values.end()) return it->second;
  }
  EnvelopeValues v = fn_(xi);
  std::unique_lock lock(cache_->mutex);
  if (cache_->values.size() >= kCacheLimit) cache_->values.clear();
  cache_->values.emplace(key, v);
  return v;
}

double Envelope::q_inf_radial(double r) const {
  Vector xi = Vector::Zero(dimension_);
  xi(0) = r;
  return q_inf(xi);
}

double Envelope::ball_sup(double rho) const {
  const int d = dimension_;
  Matrix dirs = radial_ ? Matrix(Vector::Unit(d, 0)) : direction_set(d, d == 1 ? 2 : (d == 2 ? 64 : 256));
  double sup = 0.0;
  constexpr int kRadii = 32;
  for (int k = 1; k <= kRadii; ++k) {
    const double r = rho * k / kRadii;
    for (Eigen::Index j = 0; j < dirs.cols(); ++j) sup = std::max(sup, q_sup(r * dirs.col(j)));
  }
  return sup;
}

Envelope stable_like_envelope(int d, double alpha_min, double alpha_max) {
  if (!(alpha_min > 0.0 && alpha_min <= alpha_max && alpha_max <= 2.0))
    throw ConfigError("stable-like envelope needs 0 < alpha_min <= alpha_max <= 2");
  std::ostringstream desc;
  desc << "closed form |xi|^" << alpha_max << " (|xi| <= 1), |xi|^" << alpha_min << " (|xi| > 1)";
  return Envelope(d, EnvelopeProvenance::closed_form, true,
                  [alpha_min, alpha_max](const Vector& xi) {
                    const double r = xi.norm();
                    EnvelopeValues v;
                    if (r == 0.0) return v;
                    const double lo = std::pow(r, r <= 1.0 ? alpha_max : alpha_min);
                    const double hi = std::pow(r, r <= 1.0 ? alpha_min : alpha_max);
                    v.q_inf = lo;
                    v.q_sup = hi;
                    v.re_sup = hi;
                    v.im_sup = 0.0;
                    return v;
                  },
                  desc.str());
}

Envelope closed_form_envelope(int d, EnvelopeFunction fn, bool radial, std::string description) {
  return Envelope(d, EnvelopeProvenance::closed_form, radial, std::move(fn), std::move(description));
}

namespace {

struct GridScan {
  Matrix points;
  Vector spacing;
  Vector lower, upper;
  int rounds = 3;
};

double refine(const std::function<double(const Vector&)>& objective, const Vector& start, double start_value,
              const GridScan& scan) {
  return coordinate_refine(objective, start, start_value, scan.spacing, scan.lower, scan.upper, scan.rounds);
}

}  // namespace

Envelope build_envelope(const SymbolModel& model, const XDomain& domain, bool force_grid) {
  if (!model) throw PreconditionError("build_envelope: empty model");
  const int d = model.dimension();
  if (!force_grid) {
    if (const auto& s = model.stable_like()) return stable_like_envelope(d, s->alpha_min, s->alpha_max);
    if (model.traits().x_independent) {
      const Vector origin = Vector::Zero(d);
      SymbolModel m = model;
      return Envelope(d, EnvelopeProvenance::closed_form, m.traits().radial,
                      [m, origin](const Vector& xi) {
                        const Complex v = m(origin, xi);
                        return EnvelopeValues{v.real(), std::abs(v), v.real(), std::abs(v.imag())};
                      },
                      "x-independent symbol");
    }
  }
  if (!model.traits().x_independent && domain.tail == TailFlag::none)
    throw ConfigError("state-dependent symbol needs a tail flag (periodic, constant_at_infinity or closed_form)");
  if (domain.tail == TailFlag::closed_form)
    throw ConfigError("tail flag closed_form requires a user-supplied closed-form envelope");
  if (domain.lower.size() != d || domain.upper.size() != d)
    throw ConfigError("x_domain bounds must have the model dimension");
  if (!((domain.upper - domain.lower).array() > 0.0).all()) throw ConfigError("x_domain must have lower < upper");

  const int n = domain.resolution > 0 ? domain.resolution : (d == 1 ? 64 : (d == 2 ? 32 : 16));
  if (n < 2) throw ConfigError("envelope resolution must be at least 2");
  auto scan = std::make_shared<GridScan>();
  scan->lower = domain.lower;
  scan->upper = domain.upper;
  scan->rounds = domain.refinement_rounds;
  scan->spacing = (domain.upper - domain.lower) / (n - 1);
  const Matrix unit = (box_grid(d, 0.5, n).array() + 0.5).matrix();
  scan->points = unit;
  for (Eigen::Index k = 0; k < unit.cols(); ++k)
    scan->points.col(k) = domain.lower + (unit.col(k).array() * (domain.upper - domain.lower).array()).matrix();

  std::ostringstream desc;
  desc << "grid over [" << domain.lower.transpose() << "] x [" << domain.upper.transpose() << "], " << n
       << " points per axis, tail " << to_string(domain.tail);
  SymbolModel m = model;
  EnvelopeFunction fn = [m, scan](const Vector& xi) {
    const Matrix& pts = scan->points;
    double best[4] = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    Eigen::Index arg[4] = {0, 0, 0, 0};
    for (Eigen::Index k = 0; k < pts.cols(); ++k) {
      const Complex v = m(pts.col(k), xi);
      const double vals[4] = {v.real(), std::abs(v), v.real(), std::abs(v.imag())};
      if (vals[0] < best[0]) best[0] = vals[0], arg[0] = k;
      for (int q = 1; q < 4; ++q)
        if (vals[q] > best[q]) best[q] = vals[q], arg[q] = k;
    }
    std::function<double(const Vector&)> objectives[4] = {
        [&](const Vector& x) { return m(x, xi).real(); },
        [&](const Vector& x) { return -std::abs(m(x, xi)); },
        [&](const Vector& x) { return -m(x, xi).real(); },
        [&](const Vector& x) { return -std::abs(m(x, xi).imag()); },
    };
    EnvelopeValues out;
    out.q_inf = refine(objectives[0], pts.col(arg[0]), best[0], *scan);
    out.q_sup = -refine(objectives[1], pts.col(arg[1]), -best[1], *scan);
    out.re_sup = -refine(objectives[2], pts.col(arg[2]), -best[2], *scan);
    out.im_sup = m.traits().real_valued ? 0.0 : -refine(objectives[3], pts.col(arg[3]), -best[3], *scan);
    return out;
  };
  return Envelope(d, EnvelopeProvenance::grid, model.traits().radial, std::move(fn), desc.str());
}

}  // namespace feller
