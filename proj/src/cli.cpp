#include "svjd/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "svjd/errors.hpp"

namespace svjd {

namespace {

SuiteRunner& suite_runner() {
  static SuiteRunner r;
  return r;
}

void stamp(PriceReport& r, const RunConfig& cfg) {
  r.config_hash = cfg.hash;
  r.seed = cfg.seed;
}

PriceReport component(const std::string& method, const MCEstimate& e, const RunConfig& cfg) {
  PriceReport r;
  r.method = method;
  r.price = r.raw_price = e.mean;
  r.stderr_mc = e.stderr_;
  stamp(r, cfg);
  return r;
}

std::string summary(const std::string& command, const std::vector<PriceReport>& rows) {
  std::ostringstream ss;
  ss << command << ":";
  for (const auto& r : rows) {
    ss << ' ' << r.method << '=' << format_double(r.price);
    if (r.stderr_mc) ss << "(se " << format_double(*r.stderr_mc) << ')';
  }
  return ss.str();
}

// American pricing is time-homogeneous, so it runs on [0, T - t].
struct AmericanRun {
  LSMResult lsm;
  BoundaryCurve boundary;
};

AmericanRun american_run(const RunConfig& cfg) {
  const MarketState st = spot_state(cfg.model);
  const double tau = cfg.T - cfg.t;
  AmericanRun a;
  a.lsm = lsm_price(cfg.model, st, 0.0, tau, cfg.american);
  a.boundary = solve_boundary(cfg.model, st, tau, cfg.american, a.lsm.surface);
  return a;
}

std::vector<PriceReport> price_rows(const std::string& command, const RunConfig& cfg, const RunSpec& spec) {
  const MarketModel& m = cfg.model;
  const MarketState st = spot_state(m);
  std::vector<PriceReport> rows;
  if (command == "price-eu-fourier") {
    rows.push_back(exchange_price(m, st, cfg.t, cfg.T, cfg.quad));
  } else if (command == "price-eu-mc") {
    rows.push_back(price_exchange_mc(m, st, cfg.t, cfg.T, cfg.sim));
    if (!spec.dump_paths.empty()) {
      std::ofstream os(resolve_output_path(spec.dump_paths));
      if (!os) throw std::runtime_error("cannot write " + spec.dump_paths);
      dump_paths(os, m, st, cfg.t, cfg.T, cfg.sim, spec.dump_count);
    }
  } else if (command == "price-eu-decomp") {
    rows.push_back(exchange_price_decomposed(m, st, cfg.t, cfg.T, cfg.quad));
    rows.push_back(price_exchange_mc_decomposed(m, st, cfg.t, cfg.T, cfg.sim));
  } else if (command == "price-spread") {
    rows.push_back(spread_lower_bound(m, st, cfg.t, cfg.T, cfg.K, cfg.quad));
    rows.push_back(price_spread_mc(m, st, cfg.t, cfg.T, cfg.K, cfg.sim));
  } else if (command == "price-am") {
    const AmericanRun a = american_run(cfg);
    const EEPResult e = eep_decomposition(m, st, 0.0, cfg.T - cfg.t, a.boundary, cfg.american, a.lsm.surface);
    rows.push_back(e.report);
    rows.push_back(component("eep_premium_diffusive", e.premium_diffusive, cfg));
    rows.push_back(component("eep_premium_jump1", e.premium_jump1, cfg));
    rows.push_back(component("eep_premium_jump2", e.premium_jump2, cfg));
    rows.push_back(a.lsm.report);
  }
  for (auto& r : rows) stamp(r, cfg);
  return rows;
}

double axis_default(const std::string& axis, bool stop) {
  if (axis == "paths") return stop ? 1e6 : 1e3;
  if (axis == "steps") return stop ? 640 : 10;
  if (axis == "nodes") return stop ? 8192 : 256;
  return stop ? 400 : 25;  // zmax
}

// Caps the OpenMP worker count for one run and restores it afterwards.
class ThreadCap {
 public:
  explicit ThreadCap(int n) : saved_(omp_get_max_threads()) {
    if (n > 0) omp_set_num_threads(n);
  }
  ~ThreadCap() { omp_set_num_threads(saved_); }

 private:
  int saved_;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_.open(resolve_output_path(path));
      if (!file_) throw std::runtime_error("cannot write " + resolve_output_path(path));
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

int dispatch(const RunSpec& spec, std::ostream& out, std::ostream& log) {
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), spec.command) == cmds.end()) {
    log << "error: unknown command '" << spec.command << "'\n";
    return kExitUsage;
  }
  if (spec.threads < 0) {
    log << "error: --threads must be >= 0\n";
    return kExitUsage;
  }
  const ThreadCap cap(spec.threads);

  if (spec.command == "check-suite") {
    if (!suite_runner()) {
      log << "error: no acceptance suite linked into this binary\n";
      return kExitUsage;
    }
    Output o(spec.out_path, out);
    const int failures = suite_runner()(o.stream(), log);
    log << "check-suite: " << failures << " failing criteria\n";
    return failures == 0 ? kExitOk : kExitConvergence;
  }

  if (spec.config_path.empty()) {
    log << "error: --config is required for " << spec.command << "\n";
    return kExitUsage;
  }
  std::vector<Override> ov = spec.overrides;
  if (spec.seed) ov.emplace_back("seed", std::to_string(*spec.seed));
  RunConfig cfg = load_config_file(spec.config_path, ov);
  const Exec exec = spec.threads == 1 ? Exec::serial : Exec::parallel;
  cfg.quad.exec = cfg.sim.exec = cfg.american.exec = exec;

  if (spec.command == "convergence") {
    if (spec.axis != "paths" && spec.axis != "steps" && spec.axis != "nodes" && spec.axis != "zmax") {
      log << "error: --axis must be one of paths, steps, nodes, zmax\n";
      return kExitUsage;
    }
    Output o(spec.out_path, out);
    convergence_report(cfg, spec.axis, o.stream());
    log << "convergence: axis " << spec.axis << " done\n";
    return kExitOk;
  }

  if (spec.command == "solve-boundary") {
    const AmericanRun a = american_run(cfg);
    Output o(spec.out_path, out);
    std::ostream& os = o.stream();
    os << "t,B,residual\n";
    for (std::size_t k = 0; k < a.boundary.t.size(); ++k) {
      os << format_double(cfg.t + a.boundary.t[k]) << ',' << format_double(a.boundary.B[k]) << ','
         << format_double(a.boundary.residual[k]) << '\n';
    }
    log << "solve-boundary: " << a.boundary.t.size() << " nodes, B(t) = " << format_double(a.boundary.B.front())
        << "\n";
    return kExitOk;
  }

  const std::vector<PriceReport> rows = price_rows(spec.command, cfg, spec);
  Output o(spec.out_path, out);
  write_csv(o.stream(), rows);
  log << summary(spec.command, rows) << "\n";
  return kExitOk;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"price-eu-fourier", "price-eu-mc", "price-eu-decomp", "price-spread",
                                          "price-am",         "solve-boundary", "check-suite", "convergence"};
  return c;
}

void set_suite_runner(SuiteRunner runner) { suite_runner() = std::move(runner); }

void convergence_report(const RunConfig& cfg, const std::string& axis, std::ostream& os) {
  const double start = cfg.sweep.start > 0.0 ? cfg.sweep.start : axis_default(axis, false);
  const double stop = cfg.sweep.stop > 0.0 ? cfg.sweep.stop : axis_default(axis, true);
  if (!(cfg.sweep.factor > 1.0) || !(stop >= start)) {
    throw ValidationError("convergence: needs factor > 1 and stop >= start");
  }
  const MarketState st = spot_state(cfg.model);
  os << "axis_value,price,stderr_or_quaderr,wall_ms,seed,config_hash\n";
  for (double x = start; x <= stop * (1.0 + 1e-12); x *= cfg.sweep.factor) {
    const auto t0 = std::chrono::steady_clock::now();
    PriceReport r;
    if (axis == "nodes" || axis == "zmax") {
      QuadratureConfig q = cfg.quad;
      if (axis == "nodes") q.n_nodes = static_cast<int>(std::llround(x));
      else q.z_max = x;
      r = exchange_price(cfg.model, st, cfg.t, cfg.T, q);
    } else {
      SimConfig s = cfg.sim;
      if (axis == "paths") s.n_paths = std::llround(x);
      else s.n_steps = static_cast<int>(std::llround(x));
      if (s.antithetic && s.n_paths % 2 != 0) ++s.n_paths;
      r = price_exchange_mc(cfg.model, st, cfg.t, cfg.T, s);
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const double err = r.stderr_mc ? *r.stderr_mc : r.quad_err.value_or(0.0);
    os << format_double(x) << ',' << format_double(r.price) << ',' << format_double(err) << ','
       << format_double(std::round(ms * 1000.0) / 1000.0) << ',' << cfg.seed << ',' << cfg.hash << '\n';
  }
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& log) {
  try {
    return dispatch(spec, out, log);
  } catch (const ValidationError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    log << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ConvergenceError& e) {
    log << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace svjd
