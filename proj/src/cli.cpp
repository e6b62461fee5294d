#include "brl/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>

#include "brl/asymptotics.hpp"
#include "brl/charpoly.hpp"
#include "brl/errors.hpp"
#include "brl/parallel.hpp"
#include "brl/report.hpp"
#include "brl/shooting.hpp"

namespace brl::cli {

namespace {

using report::json;
using report::number;

struct Options {
  int N = 0;
  std::optional<double> p;
  std::string grid;
  bool compact = false;
  int k_max = -1;
  std::string family = "mode";
  int i = 1;
  double a = 1.0;
  std::optional<double> r_max;
  double tol = 1e-10;
  double rel_tol = 1e-8;
  std::string emit_csv;
  std::string mode = "minimal";
  double b_mult = 2.0;
};

constexpr double kRateTolerance = 0.3;
constexpr double kRateToleranceLog = 0.5;

struct Outcome {
  json outputs;
  int code = kOk;
};

Parameters params_of(const Options& o) {
  if (!o.p) fail(ErrorKind::InvalidConfig, "--p is required");
  return {o.N, *o.p};
}

Outcome cmd_constants(const Options& o) {
  const Parameters P = params_of(o);
  const DerivedConstants dc = derive_constants(P);
  return {{{"params", report::to_json(P)},
           {"constants", report::to_json(dc)},
           {"theorem_branch", to_string(classify_theorem_regime(P))},
           {"beta34", report::to_json(classify_beta_branch(P))}}};
}

charpoly::Family parse_family(const std::string& s) {
  if (s == "mode") return charpoly::Family::Mode;
  if (s == "nm-mode") return charpoly::Family::NmMode;
  if (s == "nm-mean") return charpoly::Family::NmMean;
  if (s == "nm-tilde") return charpoly::Family::NmTilde;
  fail(ErrorKind::InvalidConfig, "unknown --family '" + s + "'");
}

json root_row(const charpoly::Quartic& q, const charpoly::RootSet& closed) {
  charpoly::RootSet oracle = charpoly::solve_quartic(q);
  oracle.family = closed.family;
  oracle.index = closed.index;
  oracle.rho = closed.rho;
  const charpoly::RootMatch match = charpoly::match_roots(closed, oracle);
  return {{"quartic", report::to_json(q)},
          {"closed", report::to_json(closed)},
          {"oracle", report::to_json(oracle)},
          {"max_deviation", number(match.max_distance)}};
}

Outcome cmd_roots(const Options& o) {
  const charpoly::Family fam = parse_family(o.family);
  json rows = json::array();
  if (fam == charpoly::Family::Mode) {
    const Parameters P = params_of(o);
    const int k_max = o.k_max < 0 ? 3 : o.k_max;
    if (k_max > 10000) fail(ErrorKind::InvalidConfig, "--k-max must be at most 10000");
    for (int k = 0; k <= k_max; ++k) {
      json row = root_row(charpoly::mode_quartic(P, k), charpoly::mode_roots_closed(P, k));
      row["k"] = k;
      rows.push_back(row);
    }
  } else {
    if (o.N < 3) fail(ErrorKind::DomainError, "dimension N must be at least 3");
    const int i = fam == charpoly::Family::NmMean ? 0 : o.i;
    json row = root_row(charpoly::nonminimal_quartic(o.N, i, fam),
                        charpoly::nonminimal_roots_closed(o.N, i, fam));
    row["i"] = i;
    rows.push_back(row);
  }
  return {{{"family", o.family}, {"rows", rows}}};
}

Outcome cmd_verify_claims(const Options& o) {
  const Parameters P = params_of(o);
  const int k_max = o.k_max < 0 ? 10 : o.k_max;
  if (k_max < 2) fail(ErrorKind::InvalidConfig, "--k-max must be at least 2");
  require_admissible(P);
  const charpoly::ClaimReport rep = charpoly::verify_claims(P, k_max);
  return {report::to_json(rep), rep.passed() ? kOk : kCheckFailed};
}

shoot::ShootingConfig config_of(const Options& o, double default_r_max) {
  shoot::ShootingConfig cfg;
  cfg.r_max = o.r_max.value_or(default_r_max);
  cfg.tol = o.tol;
  cfg.rel_tol = o.rel_tol;
  shoot::validate(cfg);
  return cfg;
}

void write_file(const std::string& path, const auto& writer) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::InvalidConfig, "cannot open '" + path + "' for writing");
  writer(f);
  if (!f) fail(ErrorKind::InvalidConfig, "failed writing '" + path + "'");
}

Outcome cmd_shoot(const Options& o) {
  const Parameters P = params_of(o);
  require_admissible(P);
  const shoot::ShootingResult res = shoot::find_b_tilde(o.a, P, config_of(o, 500.0));
  json out = report::to_json(res);
  if (!o.emit_csv.empty()) {
    write_file(o.emit_csv, [&](std::ostream& f) { ode::write_csv(f, res.minimal_traj); });
    out["csv"] = o.emit_csv;
  }
  return {out};
}

Outcome cmd_rates(const Options& o) {
  const Parameters P = params_of(o);
  require_admissible(P);
  if (o.mode == "minimal") {
    const shoot::ShootingResult res = shoot::find_b_tilde(o.a, P, config_of(o, 500.0));
    const asym::MinimalRates rates = asym::minimal_rates(res);
    const double dev = std::abs(rates.fitted.exponent - rates.predicted.exponent);
    const bool pass = dev <= kRateTolerance;
    if (!o.emit_csv.empty())
      write_file(o.emit_csv, [&](std::ostream& f) { asym::write_csv(f, rates.tail.remainder); });
    return {{{"mode", "minimal"},
             {"b_tilde_est", number(res.b_tilde_est)},
             {"predicted", {{"exponent", number(rates.predicted.exponent)},
                            {"branch", asym::to_string(rates.predicted.branch)}}},
             {"fitted", report::to_json(rates.fitted)},
             {"t_handoff", number(rates.tail.t_handoff)},
             {"deviation", number(dev)},
             {"tolerance", kRateTolerance},
             {"pass", pass}},
            pass ? kOk : kCheckFailed};
  }
  if (o.mode == "nonminimal") {
    if (!(o.b_mult > 1.0)) fail(ErrorKind::InvalidConfig, "--b-mult must exceed 1");
    const shoot::ShootingConfig cfg = config_of(o, 1000.0);
    const shoot::ShootingResult res = shoot::find_b_tilde(o.a, P, cfg);
    const double b = o.b_mult * res.b_tilde_est;
    const ode::Trajectory traj = shoot::nonminimal_solution(o.a, b, P, cfg);
    const asym::NonminimalDiagnostics d = asym::nonminimal_diagnostics(traj, P);
    const double tol = d.log_correction ? kRateToleranceLog : kRateTolerance;
    const double dev = std::abs(-d.kappa_fitted.exponent - d.kappa_predicted);
    const bool pass = dev <= tol;
    if (!o.emit_csv.empty())
      write_file(o.emit_csv, [&](std::ostream& f) { asym::write_csv(f, d.rho); });
    return {{{"mode", "nonminimal"},
             {"b_tilde_est", number(res.b_tilde_est)},
             {"b", number(b)},
             {"diagnostics", report::to_json(d)},
             {"deviation", number(dev)},
             {"tolerance", tol},
             {"pass", pass}},
            pass ? kOk : kCheckFailed};
  }
  fail(ErrorKind::InvalidConfig, "--mode must be 'minimal' or 'nonminimal'");
}

json inputs_of(const std::string& cmd, const Options& o) {
  json j = {{"N", o.N}, {"p", o.p ? number(*o.p) : json(nullptr)}};
  if (cmd == "roots") {
    j["family"] = o.family;
    if (o.family == "mode") j["k_max"] = o.k_max < 0 ? 3 : o.k_max;
    if (o.family == "nm-mode" || o.family == "nm-tilde") j["i"] = o.i;
  } else if (cmd == "verify-claims") {
    j["k_max"] = o.k_max < 0 ? 10 : o.k_max;
  } else if (cmd == "shoot" || cmd == "rates") {
    j["a"] = number(o.a);
    j["tol"] = number(o.tol);
    j["rel_tol"] = number(o.rel_tol);
    const double def = cmd == "rates" && o.mode == "nonminimal" ? 1000.0 : 500.0;
    j["r_max"] = number(o.r_max.value_or(def));
    j["emit_csv"] = o.emit_csv.empty() ? json(nullptr) : json(o.emit_csv);
    if (cmd == "rates") {
      j["mode"] = o.mode;
      if (o.mode == "nonminimal") j["b_mult"] = number(o.b_mult);
    }
  }
  return j;
}

int code_for(ErrorKind k) { return is_input_error(k) ? kInputError : kNumericalFailure; }

// One complete report for a single parameter point.
std::pair<json, int> run_point(const std::string& cmd, const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  json rep = {{"command", cmd}, {"inputs", inputs_of(cmd, o)}, {"version", report::kSchemaVersion}};
  int code = kOk;
  try {
    Outcome out;
    if (cmd == "constants") out = cmd_constants(o);
    else if (cmd == "roots") out = cmd_roots(o);
    else if (cmd == "verify-claims") out = cmd_verify_claims(o);
    else if (cmd == "shoot") out = cmd_shoot(o);
    else out = cmd_rates(o);
    rep["outputs"] = out.outputs;
    code = out.code;
  } catch (const Error& e) {
    rep["outputs"] = nullptr;
    rep["error"] = report::to_json(e);
    code = code_for(e.kind());
  } catch (const std::exception& e) {
    rep["outputs"] = nullptr;
    rep["error"] = {{"kind", "NumericalFailure"}, {"message", e.what()}};
    code = kNumericalFailure;
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - t0);
  rep["wall_time_ms"] = static_cast<long long>(ms.count());
  return {rep, code};
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c2 == std::string::npos)
    fail(ErrorKind::InvalidConfig, "--grid expects start:stop:count");
  double start = 0, stop = 0;
  long count = 0;
  try {
    std::size_t pos = 0;
    start = std::stod(spec.substr(0, c1));
    stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const std::string cs = spec.substr(c2 + 1);
    count = std::stol(cs, &pos);
    if (pos != cs.size()) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidConfig, "--grid expects start:stop:count");
  }
  if (count < 1 || count > 1000000) fail(ErrorKind::InvalidConfig, "--grid count out of range");
  std::vector<double> ps(count);
  for (long i = 0; i < count; ++i)
    ps[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1);
  return ps;
}

void emit(std::ostream& out, const json& j, bool compact) {
  out << (compact ? j.dump() : j.dump(2)) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical lab for radial solutions of -Δ²u = u^(-p) in R^N", "brl"};
  app.require_subcommand(1);
  Options o;
  double p_in = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--N", o.N, "dimension N >= 3")->required();
    sub->add_option("--p", p_in, "exponent p > 1");
    sub->add_option("--grid", o.grid, "sweep p over start:stop:count (line-delimited JSON)");
    sub->add_flag("--json", o.compact, "compact single-line JSON");
  };
  auto* constants = app.add_subcommand("constants", "α, L, thresholds and regime of (N, p)");
  common(constants);
  auto* roots = app.add_subcommand("roots", "closed-form and oracle roots of the quartics");
  common(roots);
  roots->add_option("--k-max", o.k_max, "largest mode index (default 3)");
  roots->add_option("--family", o.family, "mode | nm-mode | nm-mean | nm-tilde");
  roots->add_option("--i", o.i, "mode index for nm-mode / nm-tilde");
  auto* claims = app.add_subcommand("verify-claims", "sign/ordering statements for the roots");
  common(claims);
  claims->add_option("--k-max", o.k_max, "largest mode index (default 10)");
  auto* shoot_cmd = app.add_subcommand("shoot", "bracket the critical b̃(a)");
  auto* rates = app.add_subcommand("rates", "fit asymptotic rates of minimal/non-minimal solutions");
  for (auto* sub : {shoot_cmd, rates}) {
    common(sub);
    sub->add_option("--a", o.a, "u(0) (default 1)");
    sub->add_option("--r-max", o.r_max, "outer radius");
    sub->add_option("--tol", o.tol, "integrator tolerance (default 1e-10)");
    sub->add_option("--rel-tol", o.rel_tol, "bisection relative tolerance (default 1e-8)");
    sub->add_option("--emit-csv", o.emit_csv, "write the trajectory / fitted series as CSV");
  }
  rates->add_option("--mode", o.mode, "minimal | nonminimal");
  rates->add_option("--b-mult", o.b_mult, "b = b_mult·b̃ for --mode nonminimal (default 2)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    const std::string cmd = app.get_subcommands().empty() ? "" : app.get_subcommands()[0]->get_name();
    json rep = {{"command", cmd},
                {"inputs", nullptr},
                {"outputs", nullptr},
                {"error", {{"kind", to_string(ErrorKind::InvalidConfig)}, {"message", e.what()}}},
                {"wall_time_ms", 0},
                {"version", report::kSchemaVersion}};
    emit(out, rep, true);
    err << e.what() << '\n';
    return kInputError;
  }

  const std::string cmd = app.get_subcommands()[0]->get_name();
  const CLI::App* sub = app.get_subcommands()[0];
  if (sub->count("--p")) o.p = p_in;

  if (o.grid.empty()) {
    auto [rep, code] = run_point(cmd, o);
    emit(out, rep, o.compact);
    return code;
  }

  std::vector<double> ps;
  try {
    if (o.p) fail(ErrorKind::InvalidConfig, "--p and --grid are mutually exclusive");
    if (!o.emit_csv.empty()) fail(ErrorKind::InvalidConfig, "--emit-csv cannot be combined with --grid");
    ps = parse_grid(o.grid);
  } catch (const Error& e) {
    json rep = {{"command", cmd},        {"inputs", inputs_of(cmd, o)},
                {"outputs", nullptr},    {"error", report::to_json(e)},
                {"wall_time_ms", 0},     {"version", report::kSchemaVersion}};
    emit(out, rep, true);
    return kInputError;
  }
  auto results = map_indices(ps.size(), [&](std::size_t i) {
    Options oi = o;
    oi.p = ps[i];
    return run_point(cmd, oi);
  });
  int code = kOk;
  for (const auto& [rep, c] : results) {
    emit(out, rep, true);
    code = std::max(code, c);
  }
  return code;
}

}  // namespace brl::cli
