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
#include "feller/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "feller/criteria.hpp"
#include "feller/empirics.hpp"
#include "feller/ensemble_io.hpp"
#include "feller/symbol_checks.hpp"
#include "feller/version.hpp"

namespace feller {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json toolkit_json() { return {{"name", kToolkitName}, {"version", kToolkitVersion}}; }

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json integral_json(const IntegralResult& r) {
  return {{"value", r.infinite ? json(nullptr) : json(r.value)},
          {"infinite", r.infinite},
          {"abs_error_estimate", r.abs_error_estimate},
          {"classification", to_string(r.classification)}};
}

json criterion_json(const CriterionReport& r) {
  json j{{"id", r.id}, {"verdict", to_string(r.verdict)}, {"notes", r.notes},
         {"optimistic_caveat", r.optimistic_caveat}, {"wall_seconds", r.wall_seconds}};
  if (r.integral) j["integral"] = integral_json(*r.integral);
  j["trace"] = json::array();
  for (const auto& [a, b] : r.trace) j["trace"].push_back({a, b});
  j["parameters"] = json::object();
  for (const auto& [k, v] : r.parameters) j["parameters"][k] = v;
  return j;
}

json bound_json(const BoundValue& b) {
  return {{"value", b.infinite ? json(nullptr) : json(b.value)}, {"infinite", b.infinite}};
}

void write_json(const fs::path& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot open " + file.string() + " for writing");
  out << j.dump(2) << "\n";
}

fs::path prepare(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

double max_abs(const Vector& a, const Vector& b) { return std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()); }

json model_checks(const SymbolModel& model, const XDomain& dom, std::uint64_t seed) {
  const int d = model.dimension();
  const int nx = d == 1 ? 41 : (d == 2 ? 11 : 5);
  const PointGrid xs = box_grid(d, max_abs(dom.lower, dom.upper), nx);
  const PointGrid xis = box_grid(d, 10.0, d == 1 ? 81 : (d == 2 ? 21 : 9));
  json j;
  const auto bc = check_bounded_coefficients(model, xs, xis);
  j["bounded_coefficients"] = {{"verdict", to_string(bc.verdict)}, {"c_est", bc.c_est}, {"max_at_zero", bc.max_at_zero},
                               {"note", bc.note}};
  const auto sc = check_sector_condition(model, xs, xis);
  j["sector"] = {{"verdict", to_string(sc.verdict)}, {"c", sc.c}, {"note", sc.note}};
  if (sc.witness) j["sector"]["witness"] = vector_json(*sc.witness);
  const auto fd = check_feller_decay(model, {1.0, 10.0, 100.0, 1000.0}, 1e-3, d == 1 ? 41 : (d == 2 ? 15 : 7));
  j["feller_decay"] = {{"verdict", to_string(fd.verdict)}, {"radii", fd.radii}, {"s", fd.s}, {"note", fd.note}};
  const auto sa = check_sqrt_subadditivity(model, 2000, seed);
  j["sqrt_subadditivity"] = {{"verdict", to_string(sa.verdict)}, {"samples", sa.samples},
                             {"worst_excess", sa.worst_excess}, {"note", sa.note}};
  return j;
}

SymbolModel base_model(const ExperimentConfig& c) {
  ModelConfig m = c.model;
  m.symmetrize = false;
  return build_model(m);
}

/* Simulates the configured model; a symmetrized model is built from a base and a mirror stream. */
PathEnsemble simulate_configured(const ExperimentConfig& c, const std::vector<double>& grid, SimulationOptions opts) {
  const SymbolModel base = base_model(c);
  const Vector x0 = start_point(c);
  if (!c.model.symmetrize) return simulate(base, x0, grid, opts);
  const PathEnsemble a = simulate(base, x0, grid, opts);
  opts.stream_id += 1;
  const PathEnsemble b = simulate(base, x0, grid, opts);
  return symmetrize_paths(a, b);
}

json moments_at(const PathEnsemble& e, std::size_t k) {
  json mean = json::array(), var = json::array();
  for (int i = 0; i < e.dimension; ++i) {
    std::vector<double> v(e.n_paths());
    for (std::size_t p = 0; p < e.n_paths(); ++p) v[p] = e.coordinate(p, k, i);
    const MeanEstimate m = mean_estimate(v);
    mean.push_back(m.mean);
    var.push_back(m.std_error * m.std_error * static_cast<double>(e.n_paths()));
  }
  return {{"t", e.time_grid[k]}, {"mean", mean}, {"variance", var}};
}

}  // namespace

json run_analyze(const ExperimentConfig& c, const fs::path& out_dir) {
  prepare(out_dir);
  const SymbolModel model = build_model(c.model);
  const XDomain dom = build_domain(c);
  const Envelope env = build_envelope(model, dom, c.envelope.force_grid);
  json report;
  report["toolkit"] = toolkit_json();
  report["config"] = c.echo;
  report["model"] = {{"name", model.name()}, {"kind", to_string(model.kind())}, {"dimension", model.dimension()},
                     {"real_valued", model.traits().real_valued}, {"x_independent", model.traits().x_independent}};
  report["envelope"] = {{"provenance", to_string(env.provenance())}, {"description", env.description()},
                        {"optimistic_caveat", env.optimistic_caveat()}};
  json verdicts = json::object();
  const CriteriaConfig& cc = c.criteria;
  if (cc.model_checks) {
    report["model_checks"] = model_checks(model, dom, c.simulation.seed.value_or(0));
    for (const auto& [k, v] : report["model_checks"].items()) verdicts["model." + k] = v["verdict"];
  }
  ShellOptions so;
  so.rel_tol = cc.rel_tol;
  so.abs_tol = cc.abs_tol;
  json crit = json::object();
  if (cc.ultracontractivity) {
    UltracontractivityOptions uo;
    uo.radii = cc.ultracontractivity_radii;
    crit["ultracontractivity"] = criterion_json(test_ultracontractivity(env, uo));
  }
  if (cc.transience) crit["transience"] = criterion_json(test_transience(env, cc.transience_radius, false, so));
  if (cc.local_times) crit["local_times"] = criterion_json(test_local_times(env, so));
  for (const auto& [k, v] : crit.items()) verdicts[k] = v["verdict"];
  report["criteria"] = crit;

  std::vector<std::pair<double, BoundValue>> curve;
  if (cc.heat_curve) {
    std::vector<double> ts = cc.heat_t;
    if (ts.empty())
      for (int k = 0; k <= 32; ++k) ts.push_back(std::pow(10.0, -4.0 + 8.0 * k / 32.0));
    for (double t : ts) curve.emplace_back(t, heat_kernel_sup_bound(env, t, so));
    json hk = json::array();
    for (const auto& [t, b] : curve) hk.push_back({{"t", t}, {"bound", bound_json(b)}});
    report["heat_kernel"] = hk;
  }
  if (cc.exponent_fit) {
    const HeatExponentFit fit = heat_exponent_fit(env, cc.heat_t, so);
    report["exponent_fit"] = {{"small_t_slope", fit.small_t_slope}, {"large_t_slope", fit.large_t_slope}};
  }
  if (cc.occupation_bound) {
    report["occupation_bound"] = bound_json(occupation_bound(env, cc.occupation_radius, so));
    report["occupation_bound"]["r"] = cc.occupation_radius;
  }
  report["verdicts"] = verdicts;

  std::ofstream csv(out_dir / "curves.csv");
  if (!csv) throw ConfigError("cannot write curves.csv");
  csv << "t,heat_kernel_bound\n";
  char buf[64];
  for (const auto& [t, b] : curve) {
    std::snprintf(buf, sizeof buf, "%.17g,", t);
    csv << buf;
    if (b.infinite) csv << "inf\n";
    else {
      std::snprintf(buf, sizeof buf, "%.17g\n", b.value);
      csv << buf;
    }
  }
  write_json(out_dir / "report.json", report);
  return report;
}

json run_simulate(const ExperimentConfig& c, const fs::path& out_dir) {
  const SimulationOptions opts = simulation_options(c);
  prepare(out_dir);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> grid = uniform_grid(c.simulation.horizon, c.simulation.h);
  const PathEnsemble e = simulate_configured(c, grid, opts);
  const double sim_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const fs::path file = out_dir / "ensemble.flpe";
  write_ensemble(e, file);
  if (c.simulation.csv) write_ensemble_csv(e, out_dir / "ensemble.csv");
  json summary;
  summary["toolkit"] = toolkit_json();
  summary["config"] = c.echo;
  summary["file"] = file.filename().string();
  summary["bytes"] = fs::file_size(file);
  summary["checksum_fnv1a64"] = checksum_hex(file_checksum(file));
  summary["n_paths"] = e.n_paths();
  summary["dimension"] = e.dimension;
  summary["scheme"] = to_string(e.scheme);
  summary["grid"] = {{"horizon", c.simulation.horizon}, {"h", c.simulation.h}, {"steps", grid.size() - 1},
                     {"decimation", e.decimation}, {"stored_times", e.n_times()}};
  json moments = json::array();
  const std::size_t m = e.n_times();
  for (std::size_t k : {m / 4, m / 2, m - 1}) moments.push_back(moments_at(e, k));
  summary["moments"] = moments;
  summary["timing"] = {{"simulation_seconds", sim_seconds}};
  write_json(out_dir / "summary.json", summary);
  return summary;
}

json run_validate(const ExperimentConfig& c, const fs::path& out_dir) {
  prepare(out_dir);
  const ValidationConfig& v = c.validation;
  const SymbolModel model = build_model(c.model);
  const Envelope env = build_envelope(model, build_domain(c), c.envelope.force_grid);
  const Vector x0 = start_point(c);
  const int d = c.model.dimension;

  json doc;
  doc["toolkit"] = toolkit_json();
  doc["config"] = c.echo;
  PathEnsemble e;
  if (!v.ensemble.empty()) {
    e = read_ensemble(v.ensemble);
    if (e.dimension != d) throw ConfigError("ensemble dimension does not match the model");
    doc["ensemble"] = {{"source", v.ensemble}, {"checksum_fnv1a64", checksum_hex(file_checksum(v.ensemble))}};
  } else {
    e = simulate_configured(c, uniform_grid(c.simulation.horizon, c.simulation.h), simulation_options(c));
    doc["ensemble"] = {{"source", "inline"}};
  }
  doc["ensemble"]["n_paths"] = e.n_paths();
  doc["ensemble"]["n_times"] = e.n_times();

  std::ofstream csv(out_dir / "margins.csv");
  if (!csv) throw ConfigError("cannot write margins.csv");
  csv << "check,t,xi,r,estimate,std_error,bound,margin,pass\n";
  auto row = [&](const char* check, double t, double xi, double r, double est, double se, double bound, double margin,
                 bool pass) {
    char buf[512];
    auto num = [](double x) {
      if (std::isnan(x)) return std::string();
      char b[40];
      std::snprintf(b, sizeof b, "%.10g", x);
      return std::string(b);
    };
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%s,%s,%s,%s,%s,%d\n", check, num(t).c_str(), num(xi).c_str(),
                  num(r).c_str(), num(est).c_str(), num(se).c_str(), num(bound).c_str(), num(margin).c_str(),
                  pass ? 1 : 0);
    csv << buf;
  };
  const double na = std::nan("");
  const std::vector<Vector> xis = axis_frequencies(d, v.xi_set);
  bool all_pass = true;
  json checks = json::object();

  if (v.char_bound) {
    const CharBoundReport rep = validate_char_bound(e, env, v.t_set, xis, c.threads);
    for (const MarginRow& m : rep.rows)
      row("char_bound", m.t, m.xi.norm(), na, m.estimate, m.std_error, m.bound, m.margin, !m.violation);
    checks["char_bound"] = {{"points", rep.rows.size()}, {"violations", rep.violations},
                            {"fraction_within", rep.fraction_within}, {"pass", rep.pass}};
    all_pass = all_pass && rep.pass;
  }

  if (v.symmetrization) {
    if (!c.simulation.seed) {
      checks["symmetrization"] = {{"skipped", "needs simulation.seed for the base and mirror streams"}};
    } else {
      SimulationOptions o = simulation_options(c);
      o.stream_id += 8;
      const SymbolModel base = base_model(c);
      const auto grid = uniform_grid(c.simulation.horizon, c.simulation.h);
      const PathEnsemble a = simulate(base, x0, grid, o);
      o.stream_id += 1;
      const PathEnsemble b = simulate(base, x0, grid, o);
      const PathEnsemble s = symmetrize_paths(a, b);
      const SymmetrizationReport rep = symmetrization_law_check(s, a, b, v.t_set, xis, c.threads);
      for (const auto& r : rep.rows)
        row("symmetrization", r.t, r.xi.norm(), na, r.symmetrized.real(), r.combined_se, r.target,
            r.target - r.symmetrized.real(), r.pass);
      checks["symmetrization"] = {{"points", rep.rows.size()}, {"failures", rep.failures}, {"pass", rep.pass}};
      all_pass = all_pass && rep.pass;
    }
  }

  if (v.generator) {
    json rows = json::array();
    bool pass = true;
    for (double m : v.generator_xi) {
      const Vector xi = m * Vector::Unit(d, 0);
      const GeneratorEstimate g = generator_finite_difference(e, xi, v.generator_h, c.threads);
      const double p = model(x0, xi).real();
      const bool ok = std::abs(g.intercept - p) <= v.generator_tolerance * std::max(std::abs(p), 1e-12);
      row("generator", na, m, na, g.intercept, g.intercept_se, p, v.generator_tolerance * std::abs(p) - std::abs(g.intercept - p), ok);
      rows.push_back({{"xi", m}, {"intercept", g.intercept}, {"intercept_se", g.intercept_se}, {"symbol", p},
                      {"inconclusive", g.inconclusive}, {"note", g.note}, {"pass", ok}});
      pass = pass && (ok || g.inconclusive);
    }
    checks["generator"] = {{"rows", rows}, {"pass", pass}};
    all_pass = all_pass && pass;
  }

  if (v.occupation) {
    if (!c.simulation.seed) {
      checks["occupation_fourier"] = {{"skipped", "needs simulation.seed for the long-horizon ensemble"}};
    } else {
      SimulationOptions o = simulation_options(c);
      o.stream_id += 16;
      o.n_paths = v.occupation_paths;
      // The stable-like scheme keeps its own step; storage is thinned to the occupation step.
      const bool euler = model.kind() == SymbolKind::stable_like;
      const double h = euler ? std::min(v.occupation_h, c.simulation.h_max) : v.occupation_h;
      o.decimation = std::max(1, static_cast<int>(std::lround(v.occupation_h / h)));
      const PathEnsemble occ = simulate_configured(c, uniform_grid(v.occupation_horizon, h), o);
      const auto rows = occupation_fourier_check(occ, env, axis_frequencies(d, v.occupation_xi), 1e-6, c.threads);
      bool pass = true;
      for (const auto& r : rows) {
        row("occupation_fourier", na, r.xi.norm(), na, r.estimate, r.std_error, r.bound, r.bound - r.estimate, r.pass);
        pass = pass && r.pass;
      }
      checks["occupation_fourier"] = {{"points", rows.size()}, {"pass", pass}};
      all_pass = all_pass && pass;
    }
  }

  if (!v.exit_points.empty()) {
    bool pass = true;
    json rows = json::array();
    for (const auto& [r, t] : v.exit_points) {
      const ExitFrequency f = exit_frequency(e, r, t);
      const ExitTimeBound b = exit_time_bound(model, x0, r, t);
      const bool ok = f.probability <= b.clipped + 3.0 * f.std_error;
      row("exit", t, na, r, f.probability, f.std_error, b.clipped, b.clipped - f.probability, ok);
      rows.push_back({{"r", r}, {"t", t}, {"frequency", f.probability}, {"bound", b.clipped}, {"c_u", b.c_u},
                      {"pass", ok}});
      pass = pass && ok;
    }
    checks["exit"] = {{"rows", rows}, {"pass", pass}};
    all_pass = all_pass && pass;
  }

  doc["checks"] = checks;
  doc["pass"] = all_pass;
  write_json(out_dir / "validation.json", doc);
  return doc;
}

json report_verdicts(const json& report) { return report.at("verdicts"); }

ExperimentConfig config_from_report(const json& report) { return parse_config(report.at("config")); }

int execute(const CommandLine& cl, std::ostream& out, std::ostream& err) {
  try {
    json doc;
    {
      std::ifstream in(cl.config);
      if (!in) throw ConfigError("cannot open config file " + cl.config.string());
      try {
        doc = json::parse(in, nullptr, true, true);
      } catch (const json::exception& ex) {
        throw ConfigError("config file is not valid JSON: " + std::string(ex.what()));
      }
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (cl.seed) doc["simulation"]["seed"] = *cl.seed;
    if (cl.out) doc["output"]["directory"] = *cl.out;
    if (cl.threads) doc["threads"] = *cl.threads;
    const ExperimentConfig c = parse_config(doc);
    const fs::path dir = c.output_dir;
    if (cl.command == "analyze") {
      const json r = run_analyze(c, dir);
      out << "analyze: " << report_verdicts(r).dump() << "\nwrote " << (dir / "report.json").string() << "\n";
    } else if (cl.command == "simulate") {
      const json s = run_simulate(c, dir);
      out << "simulate: " << s["n_paths"] << " paths, checksum " << s["checksum_fnv1a64"].get<std::string>()
          << "\nwrote " << (dir / "ensemble.flpe").string() << "\n";
    } else if (cl.command == "validate") {
      const json v = run_validate(c, dir);
      out << "validate: " << (v["pass"].get<bool>() ? "pass" : "FAIL") << "\nwrote " << (dir / "validation.json").string()
          << "\n";
    } else {
      throw ConfigError("unknown command '" + cl.command + "'");
    }
    return 0;
  } catch (const ConfigError& ex) {
    err << "configuration error: " << ex.what() << "\n";
    return 2;
  } catch (const PreconditionError& ex) {
    err << "configuration error: " << ex.what() << "\n";
    return 2;
  } catch (const DomainError& ex) {
    err << "configuration error: " << ex.what() << "\n";
    return 2;
  } catch (const NumericalError& ex) {
    err << "numerical failure: " << ex.what() << " (achieved error " << ex.achieved_error() << ")\n";
    return 3;
  } catch (const std::exception& ex) {
    err << "numerical failure: " << ex.what() << "\n";
    return 3;
  }
}

}  // namespace feller
