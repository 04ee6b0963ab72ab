#include "frachs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "frachs/constants.hpp"
#include "frachs/corpus.hpp"
#include "frachs/error.hpp"
#include "frachs/hsm_bound.hpp"
#include "frachs/params.hpp"
#include "frachs/quadrature.hpp"
#include "frachs/symmetrization.hpp"
#include "frachs/verify.hpp"

namespace frachs::cli {

using json = nlohmann::ordered_json;

namespace {

json config_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"n", c.n},
              {"alpha", c.alpha},
              {"p", c.p},
              {"samples", c.samples},
              {"seed", c.seed},
              {"eps", c.eps},
              {"delta", c.delta},
              {"method", c.method},
              {"low_discrepancy", c.low_discrepancy},
              {"batches", c.batches},
              {"suite", c.suite},
              {"corpus", c.corpus},
              {"start", c.start},
              {"k_max", c.k_max},
              {"tol", c.tol},
              {"cells", c.cells},
              {"R_grid", c.R_grid},
              {"lambda_points", c.lambda_points},
              {"a1_samples", c.a1_samples},
              {"check_corpus", c.check_corpus},
              {"config", c.config_path},
              {"out", c.out_path},
              {"table", c.table_path},
              {"trace", c.trace_path},
              {"export_profile", c.export_profile},
              {"profile", c.profile_path}};
}

json estimate_json(const Estimate& e) {
  return json{{"value", e.value}, {"std_error", e.std_error}, {"samples", e.samples_used}};
}

json report_header(const RunConfig& c) {
  return json{{"tool", "frachs"},
              {"version", FRACHS_VERSION},
              {"command", c.command},
              {"config", config_json(c)},
              {"seeds", {{"base", c.seed}, {"batches", c.batches}, {"derivation", "splitmix64(seed, stream, batch)"}}}};
}

QuadratureConfig quadrature_config(const RunConfig& c) {
  QuadratureConfig q;
  q.method = method_from_string(c.method);
  q.samples = c.samples;
  q.seed = c.seed;
  q.singular_cutoff = c.eps;
  q.boundary_cutoff = c.delta;
  q.low_discrepancy = c.low_discrepancy;
  q.batches = c.batches;
  q.validate();
  return q;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParameterError("cannot open '" + path + "' for writing");
  return os;
}

void emit(const json& report, const RunConfig& c, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (c.out_path.empty()) {
    out << text;
  } else {
    auto os = open_output(c.out_path);
    os << text;
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ParameterError("not a number in grid: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<ScalarField> select_corpus(const std::string& selection, const Params& P) {
  std::vector<ScalarField> pool = standard_corpus(P.n());
  const std::size_t standard = pool.size();
  for (auto& f : profile_fields(P)) pool.push_back(f);
  if (selection == "standard") return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(standard)};
  if (selection == "profiles") return {pool.begin() + static_cast<std::ptrdiff_t>(standard), pool.end()};
  if (selection == "all") return pool;
  std::vector<ScalarField> out;
  for (const auto& name : split(selection, ',')) {
    auto it = std::find_if(pool.begin(), pool.end(), [&](const ScalarField& f) { return f.label() == name; });
    if (it == pool.end()) throw ParameterError("unknown corpus field '" + name + "'");
    out.push_back(*it);
  }
  if (out.empty()) throw ParameterError("empty corpus selection");
  return out;
}

ScalarField select_start(const std::string& name, const Params& P) {
  if (name == "off_center") return off_center_bump(P.n());
  return select_corpus(name, P).front();
}

}  // namespace

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Params P(c.n, c.alpha, c.p);
  const QuadratureConfig q = quadrature_config(c);
  const auto checks = run_suites(c.suite, P, q);
  json list = json::array();
  int failed = 0;
  for (const auto& k : checks) {
    list.push_back({{"suite", k.suite},
                    {"name", k.name},
                    {"measured", k.measured},
                    {"comparison", k.comparison},
                    {"tolerance", k.tolerance},
                    {"passed", k.passed}});
    if (!k.passed) {
      ++failed;
      err << "FAIL " << k.suite << ": " << k.name << " measured " << k.measured << ' ' << k.comparison << ' '
          << k.tolerance << '\n';
    }
  }
  json report = report_header(c);
  report["result"] = {{"checks", list}, {"total", checks.size()}, {"failed", failed}};
  report["status"] = failed == 0 ? "pass" : "fail";
  emit(report, c, out);
  err << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed\n";
  return failed == 0 ? kSuccess : kFailure;
}

int cmd_hardy(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Params P(c.n, c.alpha, c.p);
  const QuadratureConfig q = quadrature_config(c);
  const auto corpus = select_corpus(c.corpus, P);
  const ConstantEstimate D = estimate_hardy_constant(corpus, P, q);
  const double ground = hardy_constant_ground_state(P);
  json table = json::array();
  for (const auto& t : D.per_trial)
    table.push_back({{"field", t.label}, {"ratio", t.ratio.value}, {"std_error", t.ratio.std_error}});
  if (!c.table_path.empty()) {
    auto os = open_output(c.table_path);
    os.precision(17);
    os << "field,ratio,std_error\n";
    for (const auto& t : D.per_trial) os << t.label << ',' << t.ratio.value << ',' << t.ratio.std_error << '\n';
  }
  json report = report_header(c);
  report["result"] = {{"value", D.value},
                      {"std_error", D.std_error},
                      {"spread", D.spread},
                      {"trials", D.trials},
                      {"ground_state_quadrature", ground},
                      {"per_field", table}};
  report["status"] = "pass";
  emit(report, c, out);
  err << "hardy coefficient " << D.value << " +- " << D.std_error << ", spread " << D.spread << ", ground state "
      << ground << '\n';
  return kSuccess;
}

int cmd_symmetrize(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Params P(c.n, c.alpha, c.p);
  P.require_quadratic();
  const QuadratureConfig q = quadrature_config(c);
  if (c.k_max < 0) throw ParameterError("k_max must be nonnegative");
  if (!(c.tol >= 0.0)) throw ParameterError("tol must be nonnegative");
  SymmetrizationOptions opts;
  opts.cells_per_axis = c.cells;
  const ScalarField f0 = select_start(c.start, P);
  const SymmetrizationResult r = competing_symmetries_run(f0, P, c.k_max, c.tol, q, opts);

  json trace = json::array();
  bool monotone = true;
  double drift = 0.0;
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    const auto& s = r.trace[k];
    trace.push_back({{"k", s.k},
                     {"phi", s.phi.value},
                     {"phi_std_error", s.phi.std_error},
                     {"norm", s.norm},
                     {"increment", s.increment},
                     {"angular_cv", s.angular_cv}});
    drift = std::max(drift, std::abs(s.norm / r.trace.front().norm - 1.0));
    if (k > 0 && s.phi.value > r.trace[k - 1].phi.value + 3.0 * combined_error(s.phi, r.trace[k - 1].phi))
      monotone = false;
  }
  if (!c.trace_path.empty()) {
    auto os = open_output(c.trace_path);
    write_trace_csv(os, r.trace);
  }
  json result = {{"start", f0.label()},
                 {"cap_parameter", r.cap_parameter},
                 {"cells", r.final_grid.cells()},
                 {"steps", r.trace.size()},
                 {"converged", r.converged},
                 {"phi_nonincreasing_3sigma", monotone},
                 {"max_norm_drift", drift},
                 {"final_angular_cv", r.trace.back().angular_cv},
                 {"trace", trace}};
  if (!c.export_profile.empty()) {
    const RadialProfile h = extract_profile(r.final_grid.field(), P);
    auto os = open_output(c.export_profile);
    h.write_csv(os);
    result["profile_support"] = h.support_radius();
  }
  json report = report_header(c);
  report["result"] = result;
  report["status"] = "pass";
  emit(report, c, out);
  err << r.trace.size() << " iterates, final phi " << r.trace.back().phi.value << ", angular cv "
      << r.trace.back().angular_cv << '\n';
  return kSuccess;
}

int cmd_bound(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Params P(c.n, c.alpha, c.p);
  P.require_pipeline();
  P.require_quadratic();
  const QuadratureConfig q = quadrature_config(c);
  PipelineOptions opts;
  opts.R_grid = parse_grid(c.R_grid);
  validate_unit_grid(opts.R_grid, "R grid");
  if (c.lambda_points < 1) throw ParameterError("lambda_points must be positive");
  for (int i = 1; i <= c.lambda_points; ++i) opts.lambda_grid.push_back(static_cast<double>(i) / (c.lambda_points + 1));
  opts.corpus = select_corpus(c.corpus, P);
  opts.a1_samples = c.a1_samples;
  std::vector<ScalarField> checked = opts.corpus;
  if (!c.profile_path.empty()) {
    std::ifstream is(c.profile_path);
    if (!is) throw ParameterError("cannot open profile '" + c.profile_path + "'");
    checked.push_back(reconstruct_from_profile(RadialProfile::read_csv(is), P).with_label("profile"));
  }

  const BoundReport b = run_bound_pipeline(P, q, opts);

  json stages = json::array();
  for (const auto& s : b.stages)
    stages.push_back({{"name", s.name}, {"value", s.value}, {"std_error", s.std_error}, {"used", s.used}});
  json grid = json::array();
  for (const auto& g : b.grid)
    grid.push_back({{"R", g.R},
                    {"ok", g.ok},
                    {"failure", g.failure},
                    {"A1_estimate", estimate_json(g.A1_estimate)},
                    {"A1", g.A1},
                    {"A2", g.A2},
                    {"c", g.c_term},
                    {"d", g.d_term},
                    {"lambda_closed", g.lambda_closed},
                    {"lambda_grid", g.lambda_grid},
                    {"a_closed", g.a_closed},
                    {"a_grid", g.a_grid}});
  if (!c.table_path.empty()) {
    auto os = open_output(c.table_path);
    os.precision(17);
    os << "R,ok,A1,A2,c,d,lambda_closed,a_closed,a_grid\n";
    for (const auto& g : b.grid)
      os << g.R << ',' << g.ok << ',' << g.A1 << ',' << g.A2 << ',' << g.c_term << ',' << g.d_term << ','
         << g.lambda_closed << ',' << g.a_closed << ',' << g.a_grid << '\n';
  }

  bool ok = b.a_lower > 0.0;
  json result = {{"a_lower", b.a_lower},
                 {"R", b.R},
                 {"lambda", b.lambda},
                 {"A1", b.A1},
                 {"A2_coeff", b.A2_coeff},
                 {"c", b.c_term},
                 {"d", b.d_term},
                 {"lambda_cell", b.lambda_cell},
                 {"lambda_grid_at_best", b.lambda_grid_at_best},
                 {"stages", stages},
                 {"grid", grid}};
  if (c.check_corpus) {
    const double ground = hardy_constant_ground_state(P);
    json checks = json::array();
    for (const auto& f : checked) {
      const RayleighQuotient rq = rayleigh_quotient(f, P, q, ground);
      const bool pass = rq.phi.value + 3.0 * rq.phi.std_error >= b.a_lower;
      ok = ok && pass;
      checks.push_back({{"field", f.label()},
                        {"phi", rq.phi.value},
                        {"phi_std_error", rq.phi.std_error},
                        {"phi_hardy_route", rq.phi_hardy.value},
                        {"passed", pass}});
      if (!pass) err << "FAIL phi(" << f.label() << ") = " << rq.phi.value << " below a_lower " << b.a_lower << '\n';
    }
    result["corpus_check"] = checks;
  }
  json report = report_header(c);
  report["result"] = result;
  report["status"] = ok ? "pass" : "fail";
  emit(report, c, out);
  err << "a_lower = " << b.a_lower << " at R = " << b.R << ", lambda = " << b.lambda << '\n';
  return ok ? kSuccess : kFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Numerical checks for the fractional Hardy-Sobolev-Maz'ya inequality", "frachs"};
  app.set_config("--config", "", "Flat key = value file; flags override it");
  app.add_option("--n", c.n, "Dimension")->capture_default_str();
  app.add_option("--alpha", c.alpha, "Order alpha in (0, 2), alpha != 1")->capture_default_str();
  app.add_option("--p", c.p, "Exponent p >= 2")->capture_default_str();
  app.add_option("--samples", c.samples, "Quadrature budget per estimate")->capture_default_str();
  app.add_option("--seed", c.seed, "Base seed")->capture_default_str();
  app.add_option("--eps", c.eps, "Diagonal cutoff for the pair diagnostics")->capture_default_str();
  app.add_option("--delta", c.delta, "Boundary cutoff")->capture_default_str();
  app.add_option("--method", c.method, "mc or grid")->capture_default_str();
  app.add_option("--low-discrepancy", c.low_discrepancy, "Randomized Halton nodes")->capture_default_str();
  app.add_option("--batches", c.batches, "Independent batches")->capture_default_str();
  app.add_option("--suite", c.suite, "verify: all, exact, quadrature, stochastic")->capture_default_str();
  app.add_option("--corpus", c.corpus, "standard, profiles, all or field labels")->capture_default_str();
  app.add_option("--start", c.start, "symmetrize: off_center or a corpus field")->capture_default_str();
  app.add_option("--k-max", c.k_max, "symmetrize: maximum iterations")->capture_default_str();
  app.add_option("--tol", c.tol, "symmetrize: relative increment to stop at")->capture_default_str();
  app.add_option("--cells", c.cells, "symmetrize: cells per axis, 0 = default")->capture_default_str();
  app.add_option("--R-grid", c.R_grid, "bound: truncation radii in (0, 1)")->capture_default_str();
  app.add_option("--lambda-points", c.lambda_points, "bound: lambda grid size")->capture_default_str();
  app.add_option("--a1-samples", c.a1_samples, "bound: A1 budget, 0 = samples")->capture_default_str();
  app.add_flag("--check-corpus", c.check_corpus, "bound: assert phi(f) >= a_lower on the corpus");
  app.add_option("--out", c.out_path, "Report path (default stdout)");
  app.add_option("--table", c.table_path, "Per-field or per-R table CSV");
  app.add_option("--trace", c.trace_path, "symmetrize: trace CSV");
  app.add_option("--export-profile", c.export_profile, "symmetrize: write the radial profile CSV");
  app.add_option("--profile", c.profile_path, "bound: radial profile CSV to include in the corpus check");
  app.require_subcommand(1);
  for (const char* name : {"verify", "hardy", "symmetrize", "bound"}) app.add_subcommand(name)->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "frachs: " << e.what() << '\n';
    return kConfigError;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (auto* cfg = app.get_config_ptr(); cfg && cfg->count() > 0) c.config_path = cfg->as<std::string>();

  try {
    if (c.command == "verify") return cmd_verify(c, out, err);
    if (c.command == "hardy") return cmd_hardy(c, out, err);
    if (c.command == "symmetrize") return cmd_symmetrize(c, out, err);
    return cmd_bound(c, out, err);
  } catch (const ParameterError& e) {
    err << "frachs: configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    err << "frachs: divergence in " << e.where();
    if (e.step() >= 0) err << " at step " << e.step();
    err << ": " << e.what() << '\n';
    return kDivergence;
  } catch (const std::exception& e) {
    err << "frachs: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace frachs::cli
