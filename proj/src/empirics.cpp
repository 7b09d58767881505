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
#include "feller/empirics.hpp"

#include <algorithm>
#include <cmath>

#include "feller/parallel.hpp"

namespace feller {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += v[k];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

MeanEstimate mean_estimate(const std::vector<double>& v) {
  MeanEstimate out;
  const std::size_t n = v.size();
  if (n == 0) return out;
  out.mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
  if (n < 2) return out;
  std::vector<double> sq(n);
  for (std::size_t k = 0; k < n; ++k) sq[k] = (v[k] - out.mean) * (v[k] - out.mean);
  const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  out.std_error = std::sqrt(var / static_cast<double>(n));
  return out;
}

double CharFnEstimate::modulus_std_error() const {
  const double m = std::abs(value);
  const double plain = std::hypot(se_re, se_im);
  // Near zero the modulus is Rayleigh-like and the delta method understates the spread.
  if (m <= 3.0 * plain) return plain;
  return std::hypot(value.real() * se_re, value.imag() * se_im) / m;
}

CharFnEstimate empirical_char_fn(const PathEnsemble& e, double t, const Vector& xi, unsigned threads) {
  if (xi.size() != e.dimension) throw PreconditionError("empirical_char_fn: frequency has the wrong dimension");
  const std::size_t k = e.time_index(t);
  CharFnEstimate out;
  out.xi = xi;
  out.t = t;
  out.n_paths = e.n_paths();
  if (xi.isZero(0.0)) return out;
  const std::size_t n = e.n_paths();
  std::vector<double> re(n), im(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      double phase = 0.0;
      for (int i = 0; i < e.dimension; ++i) phase += (e.coordinate(p, k, i) - e.start(i)) * xi(i);
      re[p] = std::cos(phase);
      im[p] = std::sin(phase);
    }
  });
  const MeanEstimate a = mean_estimate(re), b = mean_estimate(im);
  out.value = Complex(a.mean, b.mean);
  out.se_re = a.std_error;
  out.se_im = b.std_error;
  return out;
}

std::vector<Vector> axis_frequencies(int d, const std::vector<double>& moduli) {
  std::vector<Vector> out;
  for (double m : moduli) out.push_back(m * Vector::Unit(d, 0));
  return out;
}

CharBoundReport validate_char_bound(const PathEnsemble& e, const Envelope& env, const std::vector<double>& t_set,
                                    const std::vector<Vector>& xi_set, unsigned threads) {
  CharBoundReport rep;
  for (double t : t_set)
    for (const Vector& xi : xi_set) {
      const CharFnEstimate est = empirical_char_fn(e, t, xi, threads);
      MarginRow row;
      row.t = t;
      row.xi = xi;
      row.estimate = std::abs(est.value);
      row.std_error = est.modulus_std_error();
      row.bound = char_fn_bound(env, t, xi);
      row.margin = row.bound - row.estimate;
      row.violation = row.margin < -3.0 * row.std_error;
      rep.violations += row.violation ? 1 : 0;
      rep.rows.push_back(std::move(row));
    }
  if (!rep.rows.empty()) rep.fraction_within = 1.0 - static_cast<double>(rep.violations) / rep.rows.size();
  rep.pass = rep.fraction_within >= 0.99;
  return rep;
}

GeneratorEstimate generator_finite_difference(const PathEnsemble& e, const Vector& xi, const std::vector<double>& h_set,
                                              unsigned threads) {
  if (h_set.size() < 2) throw PreconditionError("generator_finite_difference needs at least two step sizes");
  const auto [lo, hi] = std::minmax_element(h_set.begin(), h_set.end());
  if (!(*lo > 0.0) || *hi < 10.0 * *lo) throw PreconditionError("step sizes must be positive and span a decade");
  GeneratorEstimate out;
  out.xi = xi;
  out.h = h_set;
  for (double h : h_set) {
    const CharFnEstimate est = empirical_char_fn(e, h, xi, threads);
    out.slope.push_back((1.0 - est.value.real()) / h);
    out.slope_se.push_back(est.se_re / h);
  }
  if (xi.isZero(0.0)) {
    out.note = "zero frequency";
    return out;
  }
  const bool weighted = std::all_of(out.slope_se.begin(), out.slope_se.end(), [](double s) { return s > 0.0; });
  double s = 0.0, sh = 0.0, shh = 0.0, sy = 0.0, shy = 0.0;
  for (std::size_t k = 0; k < h_set.size(); ++k) {
    const double w = weighted ? 1.0 / (out.slope_se[k] * out.slope_se[k]) : 1.0;
    s += w;
    sh += w * h_set[k];
    shh += w * h_set[k] * h_set[k];
    sy += w * out.slope[k];
    shy += w * h_set[k] * out.slope[k];
  }
  const double det = s * shh - sh * sh;
  out.intercept = (shh * sy - sh * shy) / det;
  out.trend = (s * shy - sh * sy) / det;
  if (weighted) {
    out.intercept_se = std::sqrt(shh / det);
  } else {
    double rss = 0.0;
    for (std::size_t k = 0; k < h_set.size(); ++k) {
      const double r = out.slope[k] - out.intercept - out.trend * h_set[k];
      rss += r * r;
    }
    const double dof = std::max<double>(1.0, static_cast<double>(h_set.size()) - 2.0);
    out.intercept_se = std::sqrt(rss / dof * shh / det);
  }
  if (!(out.intercept_se < std::abs(out.intercept))) {
    out.inconclusive = true;
    out.note = "Monte Carlo noise exceeds the signal; more paths needed";
  }
  return out;
}

SmallTimeReport validate_small_t_approx(const PathEnsemble& e, const SymbolModel& model, const Vector& xi,
                                        const std::vector<double>& h_set, double slope_tol, unsigned threads) {
  if (!model.traits().real_valued) throw PreconditionError("validate_small_t_approx needs a real symbol");
  const double p = model(e.start, xi).real();
  SmallTimeReport out;
  std::vector<double> lx, ly;
  for (double h : h_set) {
    const CharFnEstimate est = empirical_char_fn(e, h, xi, threads);
    const double diff = std::abs(est.value - std::exp(-h * p));
    const double se = std::hypot(est.se_re, est.se_im);
    out.h.push_back(h);
    out.difference.push_back(diff);
    out.std_error.push_back(se);
    if (h > 0.0 && diff > 3.0 * se && diff > 0.0) {
      lx.push_back(std::log(h));
      ly.push_back(std::log(diff));
    }
  }
  if (lx.size() < 2) {
    out.at_noise_floor = true;
    out.consistent = true;
    return out;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) mx += lx[k] / n, my += ly[k] / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) sxy += (lx[k] - mx) * (ly[k] - my), sxx += (lx[k] - mx) * (lx[k] - mx);
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  out.consistent = *out.slope >= 1.0 - slope_tol;
  return out;
}

namespace {

struct Window {
  double lo = 0.0;
  std::size_t bins = 0;
};

Window local_time_window(const PathEnsemble& e, std::size_t k_end, double bin_width, double half_width) {
  const double x0 = e.start(0);
  double below = half_width, above = half_width;
  if (half_width <= 0.0) {
    below = above = 0.0;
    for (std::size_t p = 0; p < e.n_paths(); ++p)
      for (std::size_t k = 0; k <= k_end; ++k) {
        const double x = e.coordinate(p, k, 0) - x0;
        below = std::max(below, -x);
        above = std::max(above, x);
      }
  }
  // Bins are aligned so that x0 sits at the centre of a bin.
  const double nb = std::ceil(below / bin_width - 0.5) + 1.0;
  const double na = std::ceil(above / bin_width - 0.5) + 1.0;
  return {x0 - (nb + 0.5) * bin_width, static_cast<std::size_t>(nb + na + 1.0)};
}

}  // namespace

OccupationEstimate estimate_local_time(const PathEnsemble& e, double t_horizon, double bin_width, double half_width) {
  if (e.dimension != 1) throw PreconditionError("estimate_local_time is one-dimensional");
  if (!(bin_width > 0.0)) throw PreconditionError("bin width must be positive");
  const std::size_t k_end = e.time_index(t_horizon);
  const Window w = local_time_window(e, k_end, bin_width, half_width);
  OccupationEstimate out;
  out.t_horizon = t_horizon;
  out.bin_width = bin_width;
  for (std::size_t b = 0; b <= w.bins; ++b) out.edges.push_back(w.lo + static_cast<double>(b) * bin_width);
  std::vector<double> time(w.bins, 0.0);
  double outside = 0.0;
  auto deposit = [&](double x, double dt) {
    const double u = std::floor((x - w.lo) / bin_width);
    if (u < 0.0 || u >= static_cast<double>(w.bins)) outside += dt;
    else time[static_cast<std::size_t>(u)] += dt;
  };
  for (std::size_t p = 0; p < e.n_paths(); ++p)
    for (std::size_t k = 0; k < k_end; ++k) {
      const double half = 0.5 * (e.time_grid[k + 1] - e.time_grid[k]);
      deposit(e.coordinate(p, k, 0), half);
      deposit(e.coordinate(p, k + 1, 0), half);
    }
  const double n = static_cast<double>(e.n_paths());
  out.density.resize(w.bins);
  for (std::size_t b = 0; b < w.bins; ++b) out.density[b] = time[b] / (n * bin_width);
  out.total_mass = pairwise_sum(time.data(), time.size()) / n;
  out.missing_mass = outside / n;
  out.warning = out.missing_mass > 0.05 * t_horizon;
  return out;
}

LocalTimeRefinement local_time_refinement(const PathEnsemble& e, double t_horizon, double bin_width,
                                          double half_width) {
  if (half_width <= 0.0) {
    const Window w = local_time_window(e, e.time_index(t_horizon), bin_width, 0.0);
    half_width = 0.5 * static_cast<double>(w.bins) * bin_width;
  }
  const OccupationEstimate coarse = estimate_local_time(e, t_horizon, bin_width, half_width);
  const OccupationEstimate fine = estimate_local_time(e, t_horizon, 0.5 * bin_width, half_width);
  LocalTimeRefinement out;
  out.coarse_sup = *std::max_element(coarse.density.begin(), coarse.density.end());
  out.fine_sup = *std::max_element(fine.density.begin(), fine.density.end());
  out.relative_change = out.coarse_sup > 0.0 ? std::abs(out.fine_sup - out.coarse_sup) / out.coarse_sup : 0.0;
  out.stable = out.relative_change < 0.1;
  return out;
}

std::vector<OccupationFourierRow> occupation_fourier_check(const PathEnsemble& e, const Envelope& env,
                                                           const std::vector<Vector>& xi_set, double tol,
                                                           unsigned threads) {
  const double horizon = e.time_grid.back();
  if (std::exp(-horizon) > tol) throw PreconditionError("occupation_fourier_check: horizon too short for e^{-T} <= tol");
  const std::size_t m = e.n_times();
  // Weights of the hat functions against e^{-t} on each step.
  std::vector<double> w(m, 0.0);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double a = e.time_grid[k], len = e.time_grid[k + 1] - a;
    const double ea = std::exp(-a), frac = -std::expm1(-len) / len;
    w[k] += ea * (1.0 - frac);
    w[k + 1] += ea * (frac - std::exp(-len));
  }
  std::vector<OccupationFourierRow> rows;
  const std::size_t n = e.n_paths();
  for (const Vector& xi : xi_set) {
    if (xi.size() != e.dimension) throw PreconditionError("occupation_fourier_check: frequency has the wrong dimension");
    std::vector<double> sq(n);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p) {
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          double phase = 0.0;
          for (int i = 0; i < e.dimension; ++i) phase += e.coordinate(p, k, i) * xi(i);
          re += w[k] * std::cos(phase);
          im += w[k] * std::sin(phase);
        }
        sq[p] = re * re + im * im;
      }
    });
    const MeanEstimate est = mean_estimate(sq);
    OccupationFourierRow row;
    row.xi = xi;
    row.estimate = est.mean;
    row.std_error = est.std_error;
    row.bound = local_time_fourier_bound(env, xi);
    row.pass = row.estimate <= row.bound + 3.0 * row.std_error;
    rows.push_back(std::move(row));
  }
  return rows;
}

ExitFrequency exit_frequency(const PathEnsemble& e, double r, double t) {
  if (!(r > 0.0)) throw PreconditionError("exit_frequency needs r > 0");
  const std::size_t k_end = e.time_index(t);
  std::size_t exits = 0;
  for (std::size_t p = 0; p < e.n_paths(); ++p)
    for (std::size_t k = 0; k <= k_end; ++k)
      if ((e.state(p, k) - e.start).norm() >= r) {
        ++exits;
        break;
      }
  ExitFrequency out;
  out.r = r;
  out.t = t;
  const double n = static_cast<double>(e.n_paths());
  out.probability = static_cast<double>(exits) / n;
  out.std_error = std::sqrt(out.probability * (1.0 - out.probability) / n);
  return out;
}

TransienceDiagnostic transience_diagnostic(const PathEnsemble& e, double half_width, const std::vector<double>& horizons) {
  if (horizons.empty()) throw PreconditionError("transience_diagnostic needs horizons");
  std::vector<std::size_t> idx;
  for (double t : horizons) idx.push_back(e.time_index(t));
  for (std::size_t j = 1; j < idx.size(); ++j)
    if (idx[j] <= idx[j - 1]) throw PreconditionError("horizons must increase");
  TransienceDiagnostic out;
  out.horizons = horizons;
  const std::size_t n = e.n_paths();
  std::vector<std::vector<double>> occ(idx.size(), std::vector<double>(n, 0.0));
  for (std::size_t p = 0; p < n; ++p) {
    auto inside = [&](std::size_t k) {
      for (int i = 0; i < e.dimension; ++i)
        if (std::abs(e.coordinate(p, k, i) - e.start(i)) > half_width) return 0.0;
      return 1.0;
    };
    double acc = 0.0;
    std::size_t j = 0;
    double prev = inside(0);
    for (std::size_t k = 0; k < idx.back(); ++k) {
      const double next = inside(k + 1);
      acc += 0.5 * (e.time_grid[k + 1] - e.time_grid[k]) * (prev + next);
      prev = next;
      while (j < idx.size() && idx[j] == k + 1) occ[j++][p] = acc;
    }
  }
  for (const auto& v : occ) {
    const MeanEstimate m = mean_estimate(v);
    out.occupation.push_back(m.mean);
    out.std_error.push_back(m.std_error);
  }
  const std::size_t L = horizons.size();
  if (L >= 2 && out.occupation[L - 1] > 0.0 && out.occupation[L - 2] > 0.0)
    out.growth_exponent = std::log(out.occupation[L - 1] / out.occupation[L - 2]) / std::log(horizons[L - 1] / horizons[L - 2]);
  out.trend = out.growth_exponent < 0.25 ? "saturating" : "growing";
  return out;
}

SymmetrizationReport symmetrization_law_check(const PathEnsemble& symmetrized, const PathEnsemble& base,
                                              const PathEnsemble& mirror, const std::vector<double>& t_set,
                                              const std::vector<Vector>& xi_set, unsigned threads) {
  SymmetrizationReport rep;
  for (double t : t_set)
    for (const Vector& xi : xi_set) {
      const CharFnEstimate s = empirical_char_fn(symmetrized, t, xi, threads);
      const CharFnEstimate b = empirical_char_fn(base, t, 0.5 * xi, threads);
      const CharFnEstimate m = empirical_char_fn(mirror, t, 0.5 * xi, threads);
      SymmetrizationRow row;
      row.t = t;
      row.xi = xi;
      row.symmetrized = s.value;
      row.target = b.value.real() * m.value.real() + b.value.imag() * m.value.imag();
      const double se_target = std::sqrt(std::pow(m.value.real() * b.se_re, 2) + std::pow(m.value.imag() * b.se_im, 2) +
                                         std::pow(b.value.real() * m.se_re, 2) + std::pow(b.value.imag() * m.se_im, 2));
      row.combined_se = std::hypot(s.se_re, se_target);
      row.pass = std::abs(s.value.real() - row.target) <= 3.0 * row.combined_se &&
                 std::abs(s.value.imag()) <= 3.0 * s.se_im;
      rep.failures += row.pass ? 0 : 1;
      rep.rows.push_back(std::move(row));
    }
  rep.pass = rep.failures == 0;
  return rep;
}

}  // namespace feller
