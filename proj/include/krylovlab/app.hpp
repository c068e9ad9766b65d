#pragma once

// Command-line front end. Commands build an artifact in memory, then write it
// to --out (or stdout). Exit codes:
//   0  success
//   1  a requested check reported violations
//   2  configuration, parse, or structure error
//   3  numerical invariant breach

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "krylovlab/bounds.hpp"
#include "krylovlab/errors.hpp"
#include "krylovlab/info_measures.hpp"
#include "krylovlab/io.hpp"
#include "krylovlab/krylov.hpp"
#include "krylovlab/models.hpp"
#include "krylovlab/tensor_core.hpp"

namespace krylovlab::app {

using nlohmann::json;

inline constexpr const char* kTrajectorySchema = "krylovlab.trajectory/1";
inline constexpr const char* kCheckSchema = "krylovlab.check/1";
inline constexpr const char* kSweepSchema = "krylovlab.sweep/1";
inline constexpr const char* kFixtureSummarySchema = "krylovlab.fixture-summary/1";

enum ExitCode : int { kOk = 0, kViolations = 1, kConfigError = 2, kNumericalError = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"entropy-spread", "ipr-gm", "qubit-closed-form", "qutrit-closed-form",
                                              "short-time"};
  return names;
}

struct TimeSpec {
  double t_max = 10.0;
  int n_points = kDefaultGridPoints;
  std::vector<double> list;  // overrides t_max/n_points when nonempty

  std::vector<double> grid() const { return list.empty() ? uniform_grid(t_max, n_points) : list; }
};

struct GmConfig {
  GeometricMeasureKind kind = GeometricMeasureKind::Product;
  int restarts = 32;
  double tol = 1e-12;
};

struct RunConfig {
  std::optional<EnsembleSpec> model;
  bool model_seed_explicit = false;
  std::string fixture;
  TimeSpec time;
  std::vector<int> cut;
  GmConfig gm;
  std::vector<std::string> checks;
  std::string format = "csv";
  std::string out;  // empty: stdout
  std::uint64_t seed = 0;

  void validate() const {
    if (!model && fixture.empty()) throw ConfigError("config: no model or fixture given");
    if (time.list.empty()) {
      if (!(time.t_max > 0.0)) throw ConfigError("config: t_max must be positive");
      if (time.n_points < 2) throw ConfigError("config: n_points must be >= 2");
    } else {
      for (std::size_t i = 1; i < time.list.size(); ++i)
        if (!(time.list[i] > time.list[i - 1])) throw ConfigError("config: time list must be strictly ascending");
    }
    for (const auto& c : checks)
      if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
        throw ConfigError("config: unknown check '" + c + "'");
    if (format != "csv" && format != "json") throw ConfigError("config: format must be csv or json");
    if (gm.restarts < 1) throw ConfigError("config: gm restarts must be >= 1");
    if (!(gm.tol > 0.0)) throw ConfigError("config: gm tol must be positive");
  }
};

/// Fills `cfg` from a JSON document; absent fields keep their current values.
inline void apply_json(RunConfig& cfg, const json& j) {
  try {
    if (j.contains("model")) {
      const auto& m = j.at("model");
      if (m.contains("fixture")) {
        cfg.fixture = m.at("fixture").get<std::string>();
        cfg.model.reset();
      } else {
        EnsembleSpec spec;
        spec.kind = ensemble_kind_from_string(m.at("kind").get<std::string>());
        spec.structure = HilbertStructure(m.at("dims").get<std::vector<int>>());
        if (m.contains("params"))
          for (const auto& [k, v] : m.at("params").items()) spec.params[k] = v.get<double>();
        if (m.contains("seed")) {
          spec.seed = m.at("seed").get<std::uint64_t>();
          cfg.model_seed_explicit = true;
        }
        cfg.model = std::move(spec);
      }
    }
    if (j.contains("time")) {
      const auto& t = j.at("time");
      if (t.contains("t_max")) cfg.time.t_max = t.at("t_max").get<double>();
      if (t.contains("n_points")) cfg.time.n_points = t.at("n_points").get<int>();
      if (t.contains("list")) cfg.time.list = t.at("list").get<std::vector<double>>();
    }
    if (j.contains("cut")) cfg.cut = j.at("cut").get<std::vector<int>>();
    if (j.contains("gm")) {
      const auto& g = j.at("gm");
      if (g.contains("kind")) {
        const auto k = g.at("kind").get<std::string>();
        if (k == "product") cfg.gm.kind = GeometricMeasureKind::Product;
        else if (k == "ggm") cfg.gm.kind = GeometricMeasureKind::Ggm;
        else throw ConfigError("config: gm.kind must be product or ggm");
      }
      if (g.contains("restarts")) cfg.gm.restarts = g.at("restarts").get<int>();
      if (g.contains("tol")) cfg.gm.tol = g.at("tol").get<double>();
    }
    if (j.contains("checks")) cfg.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("output")) {
      const auto& o = j.at("output");
      if (o.contains("format")) cfg.format = o.at("format").get<std::string>();
      if (o.contains("path")) cfg.out = o.at("path").get<std::string>();
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  json j;
  try {
    j = read_json_file(path);
  } catch (const StructuralError& e) {
    throw ConfigError(e.what());
  }
  apply_json(cfg, j);
  // fixture paths inside a config file are relative to that file
  if (!cfg.fixture.empty() && std::filesystem::path(cfg.fixture).is_relative())
    cfg.fixture = (std::filesystem::path(path).parent_path() / cfg.fixture).string();
  return cfg;
}

inline ModelInstance make_instance(const RunConfig& cfg) {
  if (!cfg.fixture.empty()) {
    auto fx = fixture_from_json(read_json_file(cfg.fixture));
    return {std::move(fx.hamiltonian), std::move(fx.state), false};
  }
  EnsembleSpec spec = *cfg.model;
  if (!cfg.model_seed_explicit) spec.seed = cfg.seed;
  return generate(spec);
}

// ---------------------------------------------------------------------------
// evolve

struct EvolveResult {
  KrylovBasis basis;
  AmplitudeTrajectory trajectory;
  std::vector<double> entropy;  // S(rho_A(t)); empty without a cut
};

inline EvolveResult run_evolve(const RunConfig& cfg) {
  const auto inst = make_instance(cfg);
  const auto times = cfg.time.grid();
  auto basis = build_krylov(inst.hamiltonian, inst.state);
  auto traj = amplitudes_full_space(basis, inst.hamiltonian, inst.state, times);
  std::vector<double> entropy;
  if (!cfg.cut.empty()) {
    const auto& s = inst.state.structure();
    const auto cut = detail::checked_parties(s, cfg.cut);
    if (static_cast<int>(cut.size()) == s.parties()) throw StructuralError("cut must be a proper subset of parties");
    for (double t : times) entropy.push_back(von_neumann_entropy(reduced_density(evolve(inst.hamiltonian, inst.state, t), cut)));
  }
  if (basis.gram_deviation() > 1e-10) throw DiagnosticError("Krylov basis lost orthonormality");
  return {std::move(basis), std::move(traj), std::move(entropy)};
}

inline std::string render_evolve_csv(const EvolveResult& r) {
  CsvWriter w;
  const int dk = r.trajectory.dim_k();
  std::vector<std::string> cols{"t", "K", "IPR"};
  for (int n = 0; n < dk; ++n) cols.push_back("p_" + std::to_string(n));
  for (int n = 0; n < dk; ++n) {
    cols.push_back("re_" + std::to_string(n));
    cols.push_back("im_" + std::to_string(n));
  }
  if (!r.entropy.empty()) cols.push_back("S_A");
  w.header(cols);
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    w.cell(r.trajectory.times[i]).cell(r.trajectory.spread[i]).cell(r.trajectory.ipr[i]);
    for (int n = 0; n < dk; ++n) w.cell(r.trajectory.probability(i, n));
    for (int n = 0; n < dk; ++n) {
      const cplx z = r.trajectory.phi(static_cast<Eigen::Index>(i), n);
      w.cell(z.real()).cell(z.imag());
    }
    if (!r.entropy.empty()) w.cell(r.entropy[i]);
    w.end_row();
  }
  return w.str();
}

inline json render_evolve_json(const EvolveResult& r) {
  const int dk = r.trajectory.dim_k();
  json p = json::array(), re = json::array(), im = json::array();
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    json pr = json::array(), rr = json::array(), ir = json::array();
    for (int n = 0; n < dk; ++n) {
      const cplx z = r.trajectory.phi(static_cast<Eigen::Index>(i), n);
      pr.push_back(std::norm(z));
      rr.push_back(z.real());
      ir.push_back(z.imag());
    }
    p.push_back(pr);
    re.push_back(rr);
    im.push_back(ir);
  }
  json j{{"schema", kTrajectorySchema},
         {"party_dims", r.basis.structure.party_dims()},
         {"dim_k", dk},
         {"lanczos", {{"a", r.basis.a}, {"b", r.basis.b}}},
         {"t", r.trajectory.times},
         {"K", r.trajectory.spread},
         {"IPR", r.trajectory.ipr},
         {"p", p},
         {"phi_re", re},
         {"phi_im", im}};
  j["S_A"] = r.entropy.empty() ? json(nullptr) : json(r.entropy);
  return j;
}

// ---------------------------------------------------------------------------
// check

struct CheckRow {
  double t = 0.0;
  double lhs = 0.0;
  std::optional<double> lower;
  double upper = 0.0;
  double slack = 0.0;
  bool condition = true;
};

struct CheckSummary {
  std::string check;
  int instances = 1;
  int violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::optional<double> max_abs_deviation;
  std::string note;
};

struct CheckResult {
  std::vector<CheckRow> rows;
  CheckSummary summary;
};

inline CheckResult from_bound_report(const BoundReport& r) {
  CheckResult out;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    CheckRow row{r.times[i], r.lhs[i], std::nullopt, r.upper[i], r.slack[i], static_cast<bool>(r.condition[i])};
    if (!r.lower.empty()) row.lower = r.lower[i];
    out.rows.push_back(row);
  }
  out.summary.check = r.name;
  out.summary.violations = r.violations;
  out.summary.min_slack = r.min_slack;
  return out;
}

inline CheckResult from_comparison(const ClosedFormComparison& c) {
  CheckResult out;
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    const double dev = std::abs(c.pipeline[i] - c.closed_form[i]);
    out.rows.push_back({c.times[i], c.pipeline[i], std::nullopt, c.closed_form[i], -dev, true});
    if (!(dev < c.tolerance)) ++out.summary.violations;
  }
  out.summary.check = c.name;
  out.summary.min_slack = -c.max_abs_deviation;
  out.summary.max_abs_deviation = c.max_abs_deviation;
  out.summary.note = c.note;
  return out;
}

inline constexpr double kShortTimeTolerance = 1e-3;

inline CheckResult from_short_time(const ShortTimeReport& r) {
  CheckResult out;
  out.summary.check = "short-time";
  if (r.trivial) {
    out.summary.note = "trivial: d_K = 1";
    out.summary.min_slack = 0.0;
    for (double t : r.times) out.rows.push_back({t, 0.0, std::nullopt, 0.0, 0.0, false});
    return out;
  }
  for (std::size_t i = 0; i < r.times.size(); ++i)
    out.rows.push_back({r.times[i], r.ratio[i], std::nullopt, r.b1_squared,
                        -std::abs(r.ratio[i] - r.b1_squared) / r.b1_squared, true});
  out.summary.min_slack = -r.relative_deviation;
  out.summary.max_abs_deviation = r.relative_deviation;
  out.summary.violations = r.relative_deviation < kShortTimeTolerance ? 0 : 1;
  out.summary.note = "alpha=" + format_double(r.alpha) + " b1_squared=" + format_double(r.b1_squared);
  return out;
}

inline std::vector<CheckResult> run_check(const RunConfig& cfg) {
  if (cfg.checks.empty()) throw ConfigError("check: no checks requested");
  const auto inst = make_instance(cfg);
  const auto times = cfg.time.grid();
  std::vector<CheckResult> out;
  for (const auto& name : cfg.checks) {
    if (name == "entropy-spread") {
      out.push_back(from_bound_report(check_entropy_spread_bound(inst.hamiltonian, inst.state, cfg.cut, times)));
    } else if (name == "ipr-gm") {
      IprBoundOptions opt;
      opt.kind = cfg.gm.kind;
      opt.gm.restarts = cfg.gm.restarts;
      opt.gm.tol = cfg.gm.tol;
      opt.gm.seed = derive_seed(cfg.seed, 0x67);
      out.push_back(from_bound_report(check_ipr_gm_bounds(inst.hamiltonian, inst.state, times, opt)));
    } else if (name == "qubit-closed-form") {
      out.push_back(from_comparison(compare_qubit_closed_form(inst.hamiltonian, inst.state, times)));
    } else if (name == "qutrit-closed-form") {
      out.push_back(from_comparison(compare_qutrit_closed_form(inst.hamiltonian, inst.state, times)));
    } else if (name == "short-time") {
      out.push_back(from_short_time(
          short_time_check(inst.hamiltonian, inst.state, default_short_time_grid(inst.hamiltonian))));
    }
  }
  return out;
}

inline std::vector<std::string> check_row_columns() {
  return {"check", "t", "lhs", "lower", "upper", "slack", "condition"};
}

inline std::vector<std::string> summary_columns() {
  return {"check", "instances", "violations", "min_slack", "max_abs_deviation", "note"};
}

inline void write_check_row(CsvWriter& w, const std::string& check, const CheckRow& r) {
  w.cell(check).cell(r.t).cell(r.lhs);
  if (r.lower) w.cell(*r.lower);
  else w.empty();
  w.cell(r.upper).cell(r.slack).cell(r.condition ? 1 : 0);
}

inline void write_summary_row(CsvWriter& w, const CheckSummary& s) {
  w.cell(s.check).cell(s.instances).cell(s.violations).cell(s.min_slack);
  if (s.max_abs_deviation) w.cell(*s.max_abs_deviation);
  else w.empty();
  w.cell(s.note);
  w.end_row();
}

inline std::string render_check_csv(const std::vector<CheckResult>& results) {
  CsvWriter w;
  w.header(check_row_columns());
  for (const auto& r : results)
    for (const auto& row : r.rows) {
      write_check_row(w, r.summary.check, row);
      w.end_row();
    }
  w.blank_line();
  w.header(summary_columns());
  for (const auto& r : results) write_summary_row(w, r.summary);
  return w.str();
}

inline json summary_json(const CheckSummary& s) {
  return {{"check", s.check},
          {"instances", s.instances},
          {"violations", s.violations},
          {"min_slack", std::isfinite(s.min_slack) ? json(s.min_slack) : json(nullptr)},
          {"max_abs_deviation", s.max_abs_deviation ? json(*s.max_abs_deviation) : json(nullptr)},
          {"note", s.note}};
}

inline json check_result_json(const CheckResult& r) {
  json t = json::array(), lhs = json::array(), lower = json::array(), upper = json::array(), slack = json::array(),
       cond = json::array();
  for (const auto& row : r.rows) {
    t.push_back(row.t);
    lhs.push_back(row.lhs);
    lower.push_back(row.lower ? json(*row.lower) : json(nullptr));
    upper.push_back(row.upper);
    slack.push_back(row.slack);
    cond.push_back(row.condition);
  }
  return {{"check", r.summary.check},
          {"rows", {{"t", t}, {"lhs", lhs}, {"lower", lower}, {"upper", upper}, {"slack", slack}, {"condition", cond}}},
          {"summary", summary_json(r.summary)}};
}

inline json render_check_json(const std::vector<CheckResult>& results) {
  json checks = json::array();
  for (const auto& r : results) checks.push_back(check_result_json(r));
  return {{"schema", kCheckSchema}, {"checks", checks}};
}

inline int total_violations(const std::vector<CheckResult>& results) {
  int v = 0;
  for (const auto& r : results) v += r.summary.violations;
  return v;
}

// ---------------------------------------------------------------------------
// sweep

/// Sets a numeric field named by `axis`: seed, tmax, npoints, gm.restarts,
/// gm.tol, or a model parameter (model.params.<name> or just <name>).
inline void apply_axis(RunConfig& cfg, const std::string& axis, double value) {
  if (axis == "seed") {
    if (!(value >= 0.0) || value != std::floor(value)) throw ConfigError("sweep: seed values must be nonnegative integers");
    cfg.seed = static_cast<std::uint64_t>(value);
  } else if (axis == "tmax" || axis == "time.t_max") {
    cfg.time.t_max = value;
    cfg.time.list.clear();
  } else if (axis == "npoints" || axis == "time.n_points") {
    cfg.time.n_points = static_cast<int>(value);
    cfg.time.list.clear();
  } else if (axis == "gm.restarts" || axis == "gm-restarts") {
    cfg.gm.restarts = static_cast<int>(value);
  } else if (axis == "gm.tol") {
    cfg.gm.tol = value;
  } else {
    if (!cfg.model) throw ConfigError("sweep: axis '" + axis + "' needs a generated model, not a fixture");
    const std::string prefix = "model.params.";
    const std::string key = axis.rfind(prefix, 0) == 0 ? axis.substr(prefix.size()) : axis;
    if (key.empty() || key.find('.') != std::string::npos) throw ConfigError("sweep: unknown axis '" + axis + "'");
    cfg.model->params[key] = value;
  }
}

struct SweepPoint {
  int index = 0;
  double value = 0.0;
  std::uint64_t seed = 0;
  int exit_code = kOk;
  std::string error;
  std::optional<EvolveResult> evolve;
  std::vector<CheckResult> checks;
};

inline int worker_count() {
  if (const char* env = std::getenv("KRYLOVLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs fn(i) for i in [0, n) on a pool of `workers` threads.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

template <class Fn>
int guarded(Fn&& fn, std::string& error) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    error = e.what();
    return kConfigError;
  } catch (const StructuralError& e) {
    error = e.what();
    return kConfigError;
  } catch (const ValidationError& e) {
    error = e.what();
    return kConfigError;
  } catch (const DiagnosticError& e) {
    error = e.what();
    return kNumericalError;
  } catch (const std::exception& e) {
    error = e.what();
    return kNumericalError;
  }
}

inline std::vector<SweepPoint> run_sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values,
                                         bool check_mode, int workers) {
  if (values.empty()) throw ConfigError("sweep: empty axis value list");
  if (axis.empty()) throw ConfigError("sweep: no axis given");
  if (check_mode && base.checks.empty()) throw ConfigError("sweep: check mode needs --checks");
  {
    RunConfig probe = base;
    apply_axis(probe, axis, values.front());  // reject unknown axes up front
  }
  std::vector<SweepPoint> points(values.size());
  parallel_for(static_cast<int>(values.size()), workers, [&](int i) {
    SweepPoint& p = points[static_cast<std::size_t>(i)];
    p.index = i;
    p.value = values[static_cast<std::size_t>(i)];
    p.exit_code = guarded(
        [&] {
          RunConfig cfg = base;
          cfg.seed = derive_seed(base.seed, static_cast<std::uint64_t>(i));
          apply_axis(cfg, axis, p.value);
          p.seed = cfg.seed;
          cfg.validate();
          if (check_mode) {
            p.checks = run_check(cfg);
            return total_violations(p.checks) > 0 ? int{kViolations} : int{kOk};
          }
          p.evolve = run_evolve(cfg);
          return int{kOk};
        },
        p.error);
  });
  return points;
}

inline std::vector<CheckSummary> aggregate_summaries(const std::vector<SweepPoint>& points) {
  std::vector<CheckSummary> agg;
  for (const auto& p : points)
    for (const auto& c : p.checks) {
      auto it = std::find_if(agg.begin(), agg.end(), [&](const CheckSummary& s) { return s.check == c.summary.check; });
      if (it == agg.end()) {
        agg.push_back(c.summary);
        agg.back().note.clear();
        continue;
      }
      ++it->instances;
      it->violations += c.summary.violations;
      it->min_slack = std::min(it->min_slack, c.summary.min_slack);
      if (c.summary.max_abs_deviation)
        it->max_abs_deviation = std::max(it->max_abs_deviation.value_or(0.0), *c.summary.max_abs_deviation);
    }
  return agg;
}

inline std::string render_sweep_csv(const std::vector<SweepPoint>& points, const std::string& axis, bool check_mode) {
  CsvWriter w;
  if (check_mode) {
    std::vector<std::string> cols{"point", axis};
    for (const auto& c : check_row_columns()) cols.push_back(c);
    w.header(cols);
    for (const auto& p : points)
      for (const auto& c : p.checks)
        for (const auto& row : c.rows) {
          w.cell(p.index).cell(p.value);
          write_check_row(w, c.summary.check, row);
          w.end_row();
        }
    w.blank_line();
    w.header(summary_columns());
    for (const auto& s : aggregate_summaries(points)) write_summary_row(w, s);
    return w.str();
  }
  bool any_entropy = false;
  for (const auto& p : points) any_entropy = any_entropy || (p.evolve && !p.evolve->entropy.empty());
  std::vector<std::string> cols{"point", axis, "t", "K", "IPR", "dim_k"};
  if (any_entropy) cols.push_back("S_A");
  w.header(cols);
  for (const auto& p : points) {
    if (!p.evolve) continue;
    const auto& tr = p.evolve->trajectory;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      w.cell(p.index).cell(p.value).cell(tr.times[i]).cell(tr.spread[i]).cell(tr.ipr[i]).cell(tr.dim_k());
      if (any_entropy) {
        if (p.evolve->entropy.empty()) w.empty();
        else w.cell(p.evolve->entropy[i]);
      }
      w.end_row();
    }
  }
  return w.str();
}

inline json failure_manifest(const std::vector<SweepPoint>& points) {
  json f = json::array();
  for (const auto& p : points)
    if (p.exit_code != kOk && p.exit_code != kViolations)
      f.push_back({{"point", p.index}, {"value", p.value}, {"exit_code", p.exit_code}, {"error", p.error}});
  return f;
}

inline json render_sweep_json(const std::vector<SweepPoint>& points, const std::string& axis, bool check_mode) {
  json arr = json::array();
  for (const auto& p : points) {
    json e{{"point", p.index}, {"value", p.value}, {"seed", p.seed}, {"exit_code", p.exit_code}};
    if (p.evolve) {
      const auto& tr = p.evolve->trajectory;
      e["dim_k"] = tr.dim_k();
      e["t"] = tr.times;
      e["K"] = tr.spread;
      e["IPR"] = tr.ipr;
      e["S_A"] = p.evolve->entropy.empty() ? json(nullptr) : json(p.evolve->entropy);
    }
    if (check_mode) {
      json cs = json::array();
      for (const auto& c : p.checks) cs.push_back(check_result_json(c));
      e["checks"] = cs;
    }
    arr.push_back(e);
  }
  json summary = json::array();
  for (const auto& s : aggregate_summaries(points)) summary.push_back(summary_json(s));
  return {{"schema", kSweepSchema},
          {"axis", axis},
          {"mode", check_mode ? "check" : "evolve"},
          {"points", arr},
          {"summary", summary},
          {"failures", failure_manifest(points)}};
}

inline int sweep_exit_code(const std::vector<SweepPoint>& points) {
  bool violations = false;
  for (const auto& p : points) {
    if (p.exit_code != kOk && p.exit_code != kViolations) return p.exit_code;
    violations = violations || p.exit_code == kViolations;
  }
  return violations ? kViolations : kOk;
}

// ---------------------------------------------------------------------------
// fixtures

inline json fixture_summary(const Fixture& fx) {
  const auto basis = build_krylov(fx.hamiltonian, fx.state);
  return {{"schema", kFixtureSummarySchema},
          {"party_dims", fx.state.structure().party_dims()},
          {"total_dim", fx.state.dim()},
          {"spectral_norm", fx.hamiltonian.spectral_norm()},
          {"state_norm", fx.state.amplitudes().norm()},
          {"dim_k", basis.dim()}};
}

// ---------------------------------------------------------------------------
// entry point

inline std::string dump_json(const json& j) { return j.dump(1) + "\n"; }

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_text_file(path, text);
}

inline std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + item + "'");
    }
    if (pos != item.size()) throw ConfigError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

inline std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::string checks;
  std::optional<double> tmax;
  std::optional<int> npoints;
  std::optional<int> gm_restarts;
  std::string cut;
};

inline void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--out", f.out, "Output path (default: stdout)");
  cmd->add_option("--format", f.format, "csv or json");
  cmd->add_option("--checks", f.checks, "Comma-separated check names");
  cmd->add_option("--tmax", f.tmax, "Final time of the uniform grid");
  cmd->add_option("--npoints", f.npoints, "Number of grid points");
  cmd->add_option("--gm-restarts", f.gm_restarts, "Random restarts of the geometric-measure optimizer");
  cmd->add_option("--cut", f.cut, "Comma-separated parties of subsystem A");
}

/// defaults < config file < flags
inline RunConfig resolve_config(const CommonFlags& f) {
  RunConfig cfg;
  if (!f.config.empty()) cfg = load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.format.empty()) cfg.format = f.format;
  if (!f.checks.empty()) cfg.checks = split_names(f.checks);
  if (f.tmax) {
    cfg.time.t_max = *f.tmax;
    cfg.time.list.clear();
  }
  if (f.npoints) {
    cfg.time.n_points = *f.npoints;
    cfg.time.list.clear();
  }
  if (f.gm_restarts) cfg.gm.restarts = *f.gm_restarts;
  if (!f.cut.empty()) {
    cfg.cut.clear();
    for (double v : parse_number_list(f.cut)) cfg.cut.push_back(static_cast<int>(v));
  }
  cfg.validate();
  return cfg;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"krylovlab: Krylov-space spreading, entanglement and coherence toolkit"};
  app.require_subcommand(1);
  CommonFlags evolve_flags, check_flags, sweep_flags;
  auto* evolve_cmd = app.add_subcommand("evolve", "Krylov amplitudes, K(t), IPR(t) on a time grid");
  add_common_flags(evolve_cmd, evolve_flags);
  auto* check_cmd = app.add_subcommand("check", "Evaluate bounds and closed forms");
  add_common_flags(check_cmd, check_flags);
  auto* sweep_cmd = app.add_subcommand("sweep", "Repeat evolve or check along one numeric axis");
  add_common_flags(sweep_cmd, sweep_flags);
  std::string axis, values, linspace, mode;
  sweep_cmd->add_option("--vary", axis, "Axis to vary (seed, tmax, npoints, gm.restarts, model.params.<name>)");
  sweep_cmd->add_option("--values", values, "Comma-separated axis values");
  sweep_cmd->add_option("--linspace", linspace, "START,STOP,COUNT");
  sweep_cmd->add_option("--mode", mode, "evolve or check (default: check when --checks is set)");
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Serialize or inspect (H, psi0) fixtures");
  fixtures_cmd->require_subcommand(1);
  CommonFlags dump_flags;
  auto* dump_cmd = fixtures_cmd->add_subcommand("dump", "Write the configured instance as a fixture");
  add_common_flags(dump_cmd, dump_flags);
  std::string load_path, load_out;
  auto* load_cmd = fixtures_cmd->add_subcommand("load", "Validate a fixture and print its summary");
  load_cmd->add_option("--in", load_path, "Fixture path")->required();
  load_cmd->add_option("--out", load_out, "Output path (default: stdout)");

  std::vector<const char*> argv{"krylovlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  std::string error;
  const int code = guarded(
      [&]() -> int {
        if (*evolve_cmd) {
          const auto cfg = resolve_config(evolve_flags);
          const auto r = run_evolve(cfg);
          emit(cfg.format == "json" ? dump_json(render_evolve_json(r)) : render_evolve_csv(r), cfg.out, out);
          return kOk;
        }
        if (*check_cmd) {
          const auto cfg = resolve_config(check_flags);
          const auto r = run_check(cfg);
          emit(cfg.format == "json" ? dump_json(render_check_json(r)) : render_check_csv(r), cfg.out, out);
          return total_violations(r) > 0 ? kViolations : kOk;
        }
        if (*sweep_cmd) {
          const auto cfg = resolve_config(sweep_flags);
          std::vector<double> vals = parse_number_list(values);
          if (!linspace.empty()) {
            const auto ls = parse_number_list(linspace);
            if (ls.size() != 3 || ls[2] < 1) throw ConfigError("sweep: --linspace needs START,STOP,COUNT");
            const int count = static_cast<int>(ls[2]);
            for (int i = 0; i < count; ++i) vals.push_back(count == 1 ? ls[0] : ls[0] + (ls[1] - ls[0]) * i / (count - 1));
          }
          bool check_mode = !cfg.checks.empty();
          if (mode == "evolve") check_mode = false;
          else if (mode == "check") check_mode = true;
          else if (!mode.empty()) throw ConfigError("sweep: --mode must be evolve or check");
          const auto points = run_sweep(cfg, axis, vals, check_mode, worker_count());
          if (cfg.format == "json") {
            emit(dump_json(render_sweep_json(points, axis, check_mode)), cfg.out, out);
          } else {
            emit(render_sweep_csv(points, axis, check_mode), cfg.out, out);
            const json failures = failure_manifest(points);
            if (!failures.empty()) {
              const std::string text = dump_json({{"schema", "krylovlab.sweep-failures/1"}, {"axis", axis}, {"failures", failures}});
              if (cfg.out.empty() || cfg.out == "-") err << text;
              else write_text_file(cfg.out + ".failures.json", text);
            }
          }
          return sweep_exit_code(points);
        }
        if (*dump_cmd) {
          const auto cfg = resolve_config(dump_flags);
          const auto inst = make_instance(cfg);
          emit(dump_json(fixture_to_json(inst.hamiltonian, inst.state)), cfg.out, out);
          return kOk;
        }
        if (*load_cmd) {
          const auto fx = fixture_from_json(read_json_file(load_path));
          emit(dump_json(fixture_summary(fx)), load_out, out);
          return kOk;
        }
        return kConfigError;
      },
      error);
  if (!error.empty()) err << "error: " << error << "\n";
  return code;
}

}  // namespace krylovlab::app
