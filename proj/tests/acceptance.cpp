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
/*
 * Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
 * criterion fails.
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "feller/commands.hpp"
#include "feller/criteria.hpp"
#include "feller/empirics.hpp"
#include "feller/ensemble_io.hpp"
#include "feller/paths.hpp"
#include "feller/rng.hpp"

using namespace feller;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(std::pow(10.0, a + (b - a) * k / (n - 1)));
  return v;
}

XDomain unit_box(int d) {
  XDomain dom;
  dom.lower = Vector::Constant(d, -1.0);
  dom.upper = Vector::Constant(d, 1.0);
  return dom;
}

const char* kSuiteAlpha = "1.5 + 0.3 * sin(x)";

StableLikeSpec suite_spec() { return stable_like_from_expression(1, kSuiteAlpha, 1.2, 1.8); }
double suite_alpha(double x) { return 1.5 + 0.3 * std::sin(x); }

Outcome levy_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  int violations = 0, points = 0;
  struct Case {
    SymbolModel model;
    std::function<double(double)> psi;
  };
  std::vector<Case> cases{{brownian(1), [](double x) { return x * x; }}, {cauchy(1), [](double x) { return std::abs(x); }}};
  for (const Case& c : cases) {
    const Envelope env = build_envelope(c.model, unit_box(1));
    for (double t : logspace(-2, 1, 20))
      for (double m : logspace(-2, 2, 20)) {
        const Vector xi = Vector::Constant(1, m);
        ++points;
        if (std::exp(-t * c.psi(m)) > char_fn_bound(env, t, xi)) ++violations;
      }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << violations << " violations on " << points << " points, " << secs << " s";
  return {violations == 0 && secs < 1.0, os.str()};
}

Outcome heat_kernel_closed_forms() {
  const Envelope eb = build_envelope(brownian(1), unit_box(1));
  const Envelope ec = build_envelope(cauchy(1), unit_box(1));
  const double b1 = heat_kernel_sup_bound(eb, 1.0).value, c1 = heat_kernel_sup_bound(ec, 1.0).value;
  bool ok = std::abs(b1 - 1.0 / std::sqrt(kPi)) <= 0.005 / std::sqrt(kPi) && std::abs(c1 - 8.0 / kPi) <= 0.005 * 8.0 / kPi;
  for (double t : {0.1, 1.0, 10.0}) {
    ok = ok && heat_kernel_sup_bound(eb, t).value >= 1.0 / std::sqrt(4.0 * kPi * t);
    ok = ok && heat_kernel_sup_bound(ec, t).value >= 1.0 / (kPi * t);
  }
  std::ostringstream os;
  os.precision(8);
  os << "Brownian " << b1 << " vs " << 1.0 / std::sqrt(kPi) << ", Cauchy " << c1 << " vs " << 8.0 / kPi;
  return {ok, os.str()};
}

Outcome transience_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  int mismatches = 0;
  std::ostringstream os;
  for (int d = 1; d <= 3; ++d)
    for (double a : {0.5, 1.0, 1.5}) {
      const CriterionReport r = test_transience(build_envelope(alpha_stable(a, d), unit_box(d)), 1.0);
      const bool convergent = r.integral && r.integral->convergent();
      bool ok = convergent == (a < d);
      if (a == d) ok = ok && r.verdict == Verdict::inconclusive;
      if (a < d) ok = ok && r.verdict == Verdict::holds;
      if (!ok) {
        ++mismatches;
        os << "[d=" << d << " a=" << a << " " << to_string(r.integral->classification) << "] ";
      }
    }
  const double secs = seconds_since(t0);
  os << mismatches << " mismatches, " << secs << " s";
  return {mismatches == 0 && secs < 10.0, os.str()};
}

Outcome local_time_oracle() {
  int mismatches = 0;
  for (double a : {0.5, 1.0, 1.5}) {
    const CriterionReport r = test_local_times(build_envelope(alpha_stable(a, 1), unit_box(1)));
    const bool convergent = r.integral && r.integral->convergent();
    if (convergent != (a > 1.0)) ++mismatches;
  }
  const auto spec = stable_like_from_expression(1, "1.65 + 0.15 * sin(x)", 1.5, 1.8);
  const CriterionReport sl = test_local_times(build_envelope(stable_like_symbol(spec), unit_box(1)));
  std::ostringstream os;
  os << mismatches << " family mismatches, stable-like [1.5, 1.8]: " << to_string(sl.verdict);
  return {mismatches == 0 && sl.verdict == Verdict::holds, os.str()};
}

Outcome heat_exponents() {
  const auto t0 = std::chrono::steady_clock::now();
  const HeatExponentFit fit = heat_exponent_fit(build_envelope(stable_like_symbol(suite_spec()), unit_box(1)));
  const double secs = seconds_since(t0);
  const double s = -1.0 / 1.2, l = -1.0 / 1.8;
  const bool ok = std::abs(fit.small_t_slope - s) <= 0.05 * std::abs(s) &&
                  std::abs(fit.large_t_slope - l) <= 0.05 * std::abs(l) && secs < 30.0;
  std::ostringstream os;
  os << "small t " << fit.small_t_slope << " (" << s << "), large t " << fit.large_t_slope << " (" << l << "), " << secs
     << " s";
  return {ok, os.str()};
}

SimulationOptions sim_options(std::size_t n, std::uint32_t stream, int decimation = 1) {
  SimulationOptions o;
  o.n_paths = n;
  o.seed = 20260417;
  o.stream_id = stream;
  o.decimation = decimation;
  return o;
}

Outcome monte_carlo_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  const SymbolModel model = stable_like_symbol(suite_spec());
  const PathEnsemble e = simulate_stable_like(suite_spec(), Vector::Zero(1), uniform_grid(1.0, 1e-3), sim_options(10000, 0, 10));
  const CharBoundReport rep = validate_char_bound(e, build_envelope(model, unit_box(1)), {0.25, 0.5, 1.0},
                                                  axis_frequencies(1, {0.5, 1.0, 2.0, 4.0}));
  double worst = 1e300;
  for (const auto& r : rep.rows) worst = std::min(worst, r.std_error > 0 ? r.margin / r.std_error : r.margin);
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << rep.rows.size() - rep.violations << "/" << rep.rows.size() << " within 3 sigma, smallest margin " << worst
     << " sigma, " << secs << " s";
  return {rep.fraction_within >= 0.99 && secs < 300.0, os.str()};
}

/* Shared by the generator and exit-time criteria: horizon 0.1, step 1e-3. */
const PathEnsemble& short_stable_like() {
  static const PathEnsemble e =
      simulate_stable_like(suite_spec(), Vector::Zero(1), uniform_grid(0.1, 1e-3), sim_options(200000, 2));
  return e;
}

Outcome generator_consistency() {
  const PathEnsemble& e = short_stable_like();
  const std::vector<double> hs{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  bool ok = true;
  std::ostringstream os;
  for (double m : {1.0, 2.0}) {
    const GeneratorEstimate g = generator_finite_difference(e, Vector::Constant(1, m), hs);
    const double target = std::pow(m, suite_alpha(0.0));
    const double rel = std::abs(g.intercept - target) / target;
    ok = ok && rel <= 0.05 && !g.inconclusive;
    os << "xi=" << m << ": " << g.intercept << " +- " << g.intercept_se << " vs " << target << " (" << 100 * rel << "%)  ";
  }
  return {ok, os.str()};
}

Outcome symmetrization_law() {
  const auto spec = suite_spec();
  const auto grid = uniform_grid(1.0, 1e-3);
  const PathEnsemble base = simulate_stable_like(spec, Vector::Zero(1), grid, sim_options(10000, 4, 10));
  const PathEnsemble mirror = simulate_stable_like(spec, Vector::Zero(1), grid, sim_options(10000, 5, 10));
  const PathEnsemble sym = symmetrize_paths(base, mirror);
  const SymmetrizationReport rep =
      symmetrization_law_check(sym, base, mirror, {0.25, 0.5, 1.0}, axis_frequencies(1, {0.5, 1.0, 2.0, 4.0}));
  // Symmetrized evaluator on constant-index closed forms: 2 Re p(x, xi / 2) = 2^(1 - a) |xi|^a.
  double worst = 0.0;
  for (double a : {0.5, 1.0, 1.5}) {
    std::ostringstream expr;
    expr.precision(17);
    expr << "abs(xi)^" << a;
    const SymbolModel s = symmetrize(closed_form_symbol(1, expr.str(), "0"));
    const SymbolModel sl = symmetrize(alpha_stable(a, 1));
    for (double m : logspace(-3, 3, 25)) {
      const Vector xi = Vector::Constant(1, m), x = Vector::Zero(1);
      const double target = std::pow(2.0, 1.0 - a) * std::pow(m, a);
      worst = std::max(worst, std::abs(s(x, xi).real() - target) / target);
      worst = std::max(worst, std::abs(sl(x, xi).real() - target) / target);
    }
  }
  std::ostringstream os;
  os << rep.rows.size() - rep.failures << "/" << rep.rows.size() << " points within 3 sigma, evaluator rel. error "
     << worst;
  return {rep.pass && rep.rows.size() == 12 && worst <= 1e-14, os.str()};
}

Outcome occupation_fourier() {
  bool ok = true;
  std::ostringstream os;
  os.precision(4);
  std::uint32_t stream = 6;
  for (const SymbolModel& model : {brownian(1), cauchy(1)}) {
    const PathEnsemble e = simulate_levy(model, Vector::Zero(1), uniform_grid(14.0, 0.01), sim_options(4000, stream++));
    const auto rows = occupation_fourier_check(e, build_envelope(model, unit_box(1)), axis_frequencies(1, {0.0, 1.0, 2.0, 4.0}));
    os << model.name() << ":";
    for (const auto& r : rows) {
      ok = ok && r.pass;
      os << " " << r.estimate << "<=" << r.bound;
    }
    os << "  ";
  }
  return {ok, os.str()};
}

Outcome exit_time() {
  const double c1 = bump_constant(1);
  const double c2 = bump_constant(1);
  bool ok = c1 > 0.0 && c1 == c2;
  std::ostringstream os;
  os.precision(4);
  os << "c_u=" << c1;
  const PathEnsemble bm = simulate_levy(brownian(1), Vector::Zero(1), uniform_grid(0.1, 1e-3), sim_options(20000, 8));
  const SymbolModel sl = stable_like_symbol(suite_spec());
  struct Pair {
    const char* name;
    const SymbolModel* model;
    const PathEnsemble* paths;
  };
  const SymbolModel bmodel = brownian(1);
  for (const Pair& p : {Pair{"brownian", &bmodel, &bm}, Pair{"stable-like", &sl, &short_stable_like()}})
    for (auto [r, t] : {std::pair{0.5, 0.01}, std::pair{1.0, 0.01}, std::pair{1.0, 0.1}}) {
      const ExitFrequency f = exit_frequency(*p.paths, r, t);
      const ExitTimeBound b = exit_time_bound(*p.model, Vector::Zero(1), r, t);
      ok = ok && f.probability <= b.clipped + 3.0 * f.std_error;
      os << " " << p.name << "(" << r << "," << t << "): " << f.probability << "<=" << b.clipped;
    }
  return {ok, os.str()};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "feller_acceptance_determinism";
  nlohmann::json doc = {{"model", {{"kind", "stable_like"}, {"alpha_expr", kSuiteAlpha}, {"alpha_min", 1.2}, {"alpha_max", 1.8}}},
                        {"simulation", {{"horizon", 0.1}, {"h", 1e-3}, {"n_paths", 500}, {"seed", 99}}}};
  const ExperimentConfig c = parse_config(doc);
  const auto a = run_simulate(c, root / "a");
  const auto b = run_simulate(c, root / "b");
  const auto ca = file_checksum(root / "a" / "ensemble.flpe"), cb = file_checksum(root / "b" / "ensemble.flpe");
  fs::remove_all(root);
  return {ca == cb && a["checksum_fnv1a64"] == b["checksum_fnv1a64"], "checksums " + checksum_hex(ca) + " " + checksum_hex(cb)};
}

Outcome envelope_oracle() {
  const SymbolModel model = stable_like_symbol(suite_spec());
  XDomain dom;
  dom.lower = Vector::Constant(1, -kPi);
  dom.upper = Vector::Constant(1, kPi);
  dom.tail = TailFlag::periodic;
  const Envelope grid = build_envelope(model, dom, true);
  const Envelope closed = build_envelope(model, dom);
  CounterRng rng(7, 0xE7, 0, 0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double m = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
    const Vector xi = Vector::Constant(1, rng.uniform() < 0.5 ? -m : m);
    const EnvelopeValues a = grid.at(xi), b = closed.at(xi);
    worst = std::max({worst, std::abs(a.q_inf - b.q_inf) / b.q_inf, std::abs(a.q_sup - b.q_sup) / b.q_sup});
  }
  std::ostringstream os;
  os << "provenance " << to_string(grid.provenance()) << " vs " << to_string(closed.provenance())
     << ", worst relative difference " << worst;
  return {grid.provenance() == EnvelopeProvenance::grid && worst <= 1e-6, os.str()};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Levy exactness", levy_exactness},
      {"heat-kernel closed forms", heat_kernel_closed_forms},
      {"transience oracle", transience_oracle},
      {"local-time oracle", local_time_oracle},
      {"stable-like heat exponents", heat_exponents},
      {"Monte-Carlo bound validation", monte_carlo_bound},
      {"generator consistency", generator_consistency},
      {"symmetrization law", symmetrization_law},
      {"occupation-Fourier bound", occupation_fourier},
      {"exit-time bound", exit_time},
      {"determinism", determinism},
      {"envelope oracle", envelope_oracle},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu  %-30s %s  [%.2f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str(),
                seconds_since(t0));
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
