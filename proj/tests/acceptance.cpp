// Acceptance run: one PASS/FAIL line per criterion, exit status = number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frachs/cli.hpp"
#include "frachs/constants.hpp"
#include "frachs/corpus.hpp"
#include "frachs/geometry.hpp"
#include "frachs/layer_cake.hpp"
#include "frachs/seminorms.hpp"
#include "frachs/symmetrization.hpp"
#include "frachs/verify.hpp"

using namespace frachs;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void criterion(int id, const char* title, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s criterion %d: %s | %s | %.1f s\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict suite_verdict(const char* suite, double time_limit) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = run_suite(suite, Params(2, 1.5), QuadratureConfig{});
  const double secs = elapsed_since(t0);
  std::string failed;
  for (const auto& c : checks)
    if (!c.passed) failed += " [" + c.name + ": " + fmt("%.3g", c.measured) + "]";
  const bool ok = failed.empty() && secs < time_limit;
  return {ok, std::to_string(checks.size()) + " checks" + (failed.empty() ? "" : ", failed:" + failed) +
                  ", " + fmt("%.2f", secs) + " s (limit " + fmt("%g", time_limit) + " s)"};
}

QuadratureConfig budget(std::uint64_t samples) {
  QuadratureConfig c;
  c.samples = samples;
  return c;
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "frachs_acceptance";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

}  // namespace

int main() {
  const Params P(2, 1.5);

  criterion(1, "exact identities", [] { return suite_verdict("exact", 1.0); });
  criterion(2, "closed-form quadrature", [] { return suite_verdict("quadrature", 30.0); });

  criterion(3, "conformal invariance of I at 1e6 samples", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto corpus = standard_corpus(2);
    const auto cfg = budget(1000000);
    bool ok = true;
    std::string d;
    for (int i = 0; i < 3; ++i) {
      const ScalarField& f = corpus[static_cast<std::size_t>(i)];
      const Estimate a = gagliardo(f, Domain::full_space(), P, cfg);
      const Estimate b = gagliardo(conjugate_field(f, P), Domain::full_space(), P, cfg);
      const double sig = std::abs(a.value - b.value) / combined_error(a, b);
      const double rel = std::abs(a.value - b.value) / a.value;
      ok = ok && sig <= 3.0 && rel < 0.03;
      d += f.label() + " " + fmt("%.2f", sig) + " sigma rel " + fmt("%.2e", rel) + "; ";
    }
    const double secs = elapsed_since(t0);
    ok = ok && secs < 300.0;
    return Verdict{ok, d + "limit 3 sigma, 3%, 300 s"};
  });

  criterion(4, "Hardy coefficient consistency", [&] {
    const auto corpus = standard_corpus(2);
    const ConstantEstimate a = estimate_hardy_constant(corpus, P, budget(1000000));
    const ConstantEstimate b = estimate_hardy_constant(corpus, P, budget(4000000));
    const bool ok = a.spread < 0.05 && b.spread < a.spread;
    return Verdict{ok, "D " + fmt("%.5f", a.value) + " spread " + fmt("%.4f", a.spread) + " at 1e6, D " +
                           fmt("%.5f", b.value) + " spread " + fmt("%.4f", b.spread) + " at 4e6 (limit 0.05, must shrink)"};
  });

  criterion(5, "competing-symmetries descent", [&] {
    const auto r = competing_symmetries_run(off_center_bump(2), P, 10, 0.0, budget(1000000));
    bool ok = r.trace.size() == 11;
    double worst = -INFINITY, drift = 0.0;
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      const auto &s = r.trace[k], &prev = r.trace[k - 1];
      worst = std::max(worst, (s.phi.value - prev.phi.value) / combined_error(s.phi, prev.phi));
    }
    for (const auto& s : r.trace) drift = std::max(drift, std::abs(s.norm / r.trace.front().norm - 1.0));
    const double cv = r.trace.back().angular_cv;
    ok = ok && worst <= 3.0 && drift < 5e-3 && cv < 1e-2;
    return Verdict{ok, "steps " + std::to_string(r.trace.size() - 1) + ", phi " + fmt("%.3f", r.trace.front().phi.value) +
                           " -> " + fmt("%.3f", r.trace.back().phi.value) + ", worst rise " + fmt("%.2f", worst) +
                           " sigma (limit 3), norm drift " + fmt("%.2e", drift) + " (limit 5e-3), final cv " +
                           fmt("%.2e", cv) + " (limit 1e-2)"};
  });

  criterion(6, "bound pipeline below every measured quotient", [] {
    const fs::path out = scratch_dir() / "bound.json";
    bool ok = true;
    std::string d;
    for (int n : {2, 3})
      for (double a : {1.25, 1.5, 1.75}) {
        std::ostringstream alpha;
        alpha << a;
        const int code = run_cli({"bound", "--n", std::to_string(n), "--alpha", alpha.str(), "--corpus", "all",
                              "--check-corpus", "--samples", "200000", "--out", out.string()});
        const auto j = nlohmann::json::parse(slurp(out));
        const double lower = j["result"]["a_lower"].get<double>();
        double min_phi = INFINITY;
        bool all = true;
        for (const auto& c : j["result"]["corpus_check"]) {
          min_phi = std::min(min_phi, c["phi"].get<double>());
          all = all && c["passed"].get<bool>();
        }
        ok = ok && code == 0 && lower > 0.0 && all;
        d += "(" + std::to_string(n) + "," + alpha.str() + ") a_lower " + fmt("%.3g", lower) + " min phi " +
             fmt("%.3g", min_phi) + "; ";
      }
    return Verdict{ok, d};
  });

  criterion(7, "convex-domain and weighted q-norm inequalities", [&] {
    const auto cfg = budget(400000);
    const auto corpus = standard_corpus(2);
    const ConstantEstimate S = estimate_sobolev_constant(corpus, P, cfg);
    const ConstantEstimate D = estimate_hardy_constant(corpus, P, cfg);
    const double chain = convex_sobolev_chain(P, S.value - 3.0 * S.std_error, D.value - 3.0 * D.std_error);
    bool ok = chain > 0.0;
    double worst = INFINITY;
    std::vector<ScalarField> fields = corpus;
    for (const auto& f : profile_fields(P)) fields.push_back(f);
    for (const auto& f : fields) {
      const double R = enclosing_cap_parameter(f.sampling_box());
      const Estimate I = gagliardo(f, Domain::cap(R), P, cfg);
      const Estimate N = power(lp_norm(f, P.p_star(), cfg), P.p());
      const double rhs = chain * N.value;
      ok = ok && I.value + 3.0 * std::hypot(I.std_error, chain * N.std_error) >= rhs;
      worst = std::min(worst, I.value / rhs);
    }
    const ConstantEstimate dh = theorem22_verify(corpus, P, cfg);
    const double rel = dh.std_error / dh.value;
    ok = ok && dh.value > 0.0 && rel < 0.1;
    return Verdict{ok, "chain " + fmt("%.4g", chain) + ", min I_cap / (chain ||f||^2) " + fmt("%.3g", worst) +
                           " over " + std::to_string(fields.size()) + " fields (limit >= 1 within 3 sigma), d " +
                           fmt("%.4g", dh.value) + " rel error " + fmt("%.2e", rel) + " (limit 0.1)"};
  });

  criterion(8, "reports independent of FRACHS_THREADS", [] {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "det.json", side = dir / "det.csv";
    const std::vector<std::vector<std::string>> commands{
        {"verify", "--suite", "stochastic", "--samples", "40000"},
        {"hardy", "--samples", "100000", "--table", side.string()},
        {"symmetrize", "--samples", "20000", "--k-max", "3", "--trace", side.string()},
        {"bound", "--samples", "50000", "--R-grid", "0.1,0.4", "--check-corpus", "--table", side.string()}};
    bool ok = true;
    std::string d;
    for (const auto& base : commands) {
      std::vector<std::string> args = base;
      args.insert(args.end(), {"--seed", "2024", "--out", out.string()});
      std::vector<std::string> reports, sides;
      std::vector<int> codes;
      for (const char* threads : {"1", "2", "1"}) {
        setenv("FRACHS_THREADS", threads, 1);
        codes.push_back(run_cli(args));
        reports.push_back(slurp(out));
        sides.push_back(fs::exists(side) ? slurp(side) : std::string());
        fs::remove(side);
      }
      unsetenv("FRACHS_THREADS");
      const bool same = reports[0] == reports[1] && reports[1] == reports[2] && sides[0] == sides[1] &&
                        sides[1] == sides[2] && !reports[0].empty() && codes[0] == codes[1] && codes[1] == codes[2];
      ok = ok && same;
      d += base[0] + (same ? " identical; " : " DIFFERS; ");
    }
    return Verdict{ok, d + "threads 1, 2, 1"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
