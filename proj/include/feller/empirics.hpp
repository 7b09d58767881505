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
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "feller/criteria.hpp"
#include "feller/envelope.hpp"
#include "feller/paths.hpp"

namespace feller {

/* Sum by recursive halving; the result depends on the values only, not on how they were produced. */
double pairwise_sum(const double* v, std::size_t n);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/* Sample mean and its standard error (sample variance / n). */
MeanEstimate mean_estimate(const std::vector<double>& v);

struct CharFnEstimate {
  Vector xi;
  double t = 0.0;
  Complex value{1.0, 0.0};
  double se_re = 0.0;
  double se_im = 0.0;
  std::size_t n_paths = 0;

  double std_error() const { return std::max(se_re, se_im); }
  /* Delta-method standard error of |value|. */
  double modulus_std_error() const;
};

/* Mean of exp(i <X_t - x0, xi>) over paths; t must be a grid time. */
CharFnEstimate empirical_char_fn(const PathEnsemble& e, double t, const Vector& xi, unsigned threads = 0);

/* Frequencies of modulus m along the first axis. */
std::vector<Vector> axis_frequencies(int d, const std::vector<double>& moduli);

struct MarginRow {
  double t = 0.0;
  Vector xi;
  double estimate = 0.0;  // |lambda hat|
  double std_error = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - estimate
  bool violation = false;  // margin < -3 std_error
};

struct CharBoundReport {
  std::vector<MarginRow> rows;
  std::size_t violations = 0;
  double fraction_within = 1.0;
  bool pass = true;  // at least 99% of rows within 3 standard errors
};

CharBoundReport validate_char_bound(const PathEnsemble& e, const Envelope& env, const std::vector<double>& t_set,
                                    const std::vector<Vector>& xi_set, unsigned threads = 0);

struct GeneratorEstimate {
  Vector xi;
  std::vector<double> h;
  std::vector<double> slope;  // (1 - Re lambda hat_h) / h
  std::vector<double> slope_se;
  double intercept = 0.0;
  double intercept_se = 0.0;
  double trend = 0.0;  // fitted coefficient of h
  bool inconclusive = false;
  std::string note;
};

/*
 * Weighted least-squares line through (h, (1 - Re lambda hat_h) / h); the
 * intercept estimates Re p(x0, xi). Every h must be a time of the ensemble.
 */
GeneratorEstimate generator_finite_difference(const PathEnsemble& e, const Vector& xi, const std::vector<double>& h_set,
                                              unsigned threads = 0);

struct SmallTimeReport {
  std::vector<double> h;
  std::vector<double> difference;  // |lambda hat_h - exp(-h p(x0, xi))|
  std::vector<double> std_error;
  std::optional<double> slope;  // log-log slope over points above the noise floor
  bool at_noise_floor = false;
  bool consistent = false;
};

SmallTimeReport validate_small_t_approx(const PathEnsemble& e, const SymbolModel& model, const Vector& xi,
                                        const std::vector<double>& h_set, double slope_tol = 0.25,
                                        unsigned threads = 0);

struct OccupationEstimate {
  std::vector<double> edges;
  double t_horizon = 0.0;
  double bin_width = 0.0;
  std::vector<double> density;  // averaged over paths
  double total_mass = 0.0;
  double missing_mass = 0.0;  // time spent outside the window
  bool warning = false;  // missing mass above 5% of t_horizon
};

/*
 * Binned occupation density in d = 1. Time in a step is split evenly
 * between its two end states. A zero half-width takes the window from the
 * path range.
 */
OccupationEstimate estimate_local_time(const PathEnsemble& e, double t_horizon, double bin_width,
                                       double half_width = 0.0);

struct LocalTimeRefinement {
  double coarse_sup = 0.0;
  double fine_sup = 0.0;
  double relative_change = 0.0;
  bool stable = false;  // change below 10%
};

LocalTimeRefinement local_time_refinement(const PathEnsemble& e, double t_horizon, double bin_width,
                                          double half_width = 0.0);

struct OccupationFourierRow {
  Vector xi;
  double estimate = 0.0;  // E |mu hat(xi)|^2
  double std_error = 0.0;
  double bound = 0.0;
  bool pass = true;
};

/*
 * mu hat(xi) = int_0^T e^{-t} e^{i <X_t, xi>} dt, with e^{i <X_t, xi>} linear
 * between grid times and the exponential weight integrated exactly. Needs
 * e^{-T} <= tol at the last grid time.
 */
std::vector<OccupationFourierRow> occupation_fourier_check(const PathEnsemble& e, const Envelope& env,
                                                           const std::vector<Vector>& xi_set, double tol = 1e-6,
                                                           unsigned threads = 0);

struct ExitFrequency {
  double r = 0.0;
  double t = 0.0;
  double probability = 0.0;
  double std_error = 0.0;
};

/* Fraction of paths with max over grid times s <= t of |X_s - x0| >= r. */
ExitFrequency exit_frequency(const PathEnsemble& e, double r, double t);

struct TransienceDiagnostic {
  std::vector<double> horizons;
  std::vector<double> occupation;  // mean time in the box up to each horizon
  std::vector<double> std_error;
  double growth_exponent = 0.0;  // log-log slope over the last two horizons
  std::string trend;  // "saturating" or "growing"
};

/* Mean occupation of the box |X - x0|_inf <= half_width up to each horizon. Diagnostic only. */
TransienceDiagnostic transience_diagnostic(const PathEnsemble& e, double half_width, const std::vector<double>& horizons);

struct SymmetrizationRow {
  double t = 0.0;
  Vector xi;
  Complex symmetrized{1.0, 0.0};  // lambda hat of X^S at xi
  double target = 1.0;  // Re(lambda hat_base(xi/2) conj lambda hat_mirror(xi/2))
  double combined_se = 0.0;
  bool pass = true;
};

struct SymmetrizationReport {
  std::vector<SymmetrizationRow> rows;
  std::size_t failures = 0;
  bool pass = true;
};

/*
 * Checks that X^S has characteristic function |lambda_t(xi / 2)|^2: the real
 * part matches and the imaginary part vanishes, each within 3 standard errors.
 */
SymmetrizationReport symmetrization_law_check(const PathEnsemble& symmetrized, const PathEnsemble& base,
                                              const PathEnsemble& mirror, const std::vector<double>& t_set,
                                              const std::vector<Vector>& xi_set, unsigned threads = 0);

}  // namespace feller
