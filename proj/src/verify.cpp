#include "frachs/verify.hpp"

#include <algorithm>
#include <cmath>

#include "frachs/constants.hpp"
#include "frachs/corpus.hpp"
#include "frachs/error.hpp"
#include "frachs/geometry.hpp"
#include "frachs/hsm_bound.hpp"
#include "frachs/layer_cake.hpp"
#include "frachs/seminorms.hpp"
#include "frachs/symmetrization.hpp"

namespace frachs {

Check make_check(std::string suite, std::string name, double measured, std::string comparison, double tolerance) {
  Check c{std::move(suite), std::move(name), measured, tolerance, std::move(comparison), false};
  if (c.comparison == "<=")
    c.passed = measured <= tolerance;
  else if (c.comparison == ">=")
    c.passed = measured >= tolerance;
  else
    throw ParameterError("make_check: comparison must be <= or >=");
  if (std::isnan(measured)) c.passed = false;
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"exact", "quadrature", "stochastic"};
  return names;
}

namespace {

const std::vector<int> kDims{2, 3, 4, 5, 6};
const std::vector<double> kAlphas{1.1, 1.5, 1.9};
const std::vector<double> kPowers{2.0, 3.0};

Point random_halfspace_point(Rng& rng, int n) {
  Point x(n);
  for (int i = 0; i + 1 < n; ++i) x[i] = 6.0 * rng.uniform() - 3.0;
  x.last() = 1e-3 + 5.0 * rng.uniform();
  return x;
}

Point random_ball_point(Rng& rng, int n) {
  Point u = rng.unit_vector(n);
  u *= 0.999 * std::pow(rng.uniform(), 1.0 / n);
  return u;
}

std::vector<Check> exact_suite() {
  const std::string s = "exact";
  std::vector<Check> out;

  double inv = 0.0, weight = 0.0, modulus = 0.0;
  Rng rng(0x7e57ULL);
  for (int n : {2, 3, 4, 5, 6}) {
    for (int i = 0; i < 2000; ++i) {
      const Point x = random_halfspace_point(rng, n);
      const Point w = random_ball_point(rng, n);
      inv = std::max(inv, distance(map_T(map_T(x)), x) / std::max(1.0, x.norm()));
      inv = std::max(inv, distance(map_T(map_T(w)), w));
      weight = std::max(weight, std::abs(eta(map_T(x)) * eta(x) - 1.0));
      weight = std::max(weight, std::abs(eta(map_T(w)) * eta(w) - 1.0));
      const double t = x.tangential_norm2();
      const double expect = (t + (x.last() - 1.0) * (x.last() - 1.0)) / (t + (x.last() + 1.0) * (x.last() + 1.0));
      modulus = std::max(modulus, std::abs(map_T(x).norm2() - expect));
    }
  }
  out.push_back(make_check(s, "T(T(x)) = x on 10^4 points", inv, "<=", 1e-12));
  out.push_back(make_check(s, "eta(T x) eta(x) = 1 on 10^4 points", weight, "<=", 1e-12));
  out.push_back(make_check(s, "|T x|^2 closed form", modulus, "<=", 1e-12));

  out.push_back(make_check(s, "cp_min(2) = 1", std::abs(cp_min(2.0) - 1.0), "<=", 1e-12));
  double flat = 0.0;
  for (int i = 1; i < 1000; ++i) flat = std::max(flat, std::abs(cp_objective(0.5 * i / 1000.0, 2.0) - 1.0));
  out.push_back(make_check(s, "p = 2 objective constant on 10^3 grid", flat, "<=", 1e-12));
  double cp_range = 0.0;
  for (double p : {2.5, 3.0, 4.0, 6.0}) {
    const double c = cp_min(p);
    if (!(c > 0.0 && c <= 1.0)) cp_range += 1.0;
  }
  out.push_back(make_check(s, "0 < cp_min(p) <= 1", cp_range, "<=", 0.0));

  double gap_q = 0.0, gap_w = 0.0;
  for (int n : kDims)
    for (double p : kPowers)
      for (double a : kAlphas) {
        const Exponents e = exponents(Params(n, a, p));
        gap_q = std::max(gap_q, e.identity_gap_q);
        gap_w = std::max(gap_w, e.identity_gap_weight);
      }
  out.push_back(make_check(s, "q exponent identity 1 - p/q = (alpha+1)/(2n+alpha-1)", gap_q, "<=", 1e-14));
  out.push_back(make_check(s, "weight exponent identity", gap_w, "<=", 1e-14));

  std::size_t violations = 0;
  for (const auto& h : profile_corpus()) {
    for (double R : {0.1, 0.25, 0.3, 0.45, 0.5, 0.7}) {
      const Truncation t = truncate_profile(h, R);
      for (std::size_t i = 0; i < t.h0.knots.size(); ++i) {
        const double r = t.h0.knots[i];
        if (t.h0.values[i] + t.h1.values[i] != h(r)) ++violations;
        if (r >= R && t.h1.values[i] != 0.0) ++violations;
      }
    }
  }
  out.push_back(make_check(s, "truncation h0 + h1 = h and supp h1 in [0, R] at knots", static_cast<double>(violations),
                           "<=", 0.0));

  // Conjugating twice and rotating a radial field are pointwise identities.
  double twice = 0.0, radial = 0.0;
  for (int n : {2, 3}) {
    const Params P(n, 1.5);
    const auto fields = standard_corpus(n);
    const ScalarField back = conjugate_field(conjugate_field(fields[0], P), P);
    const ScalarField prof = profile_fields(P)[0];
    const ScalarField rot = rotate_conformal(prof, P);
    const Box box = prof.sampling_box();
    const Box fbox = fields[0].sampling_box();
    for (int i = 0; i < 500; ++i) {
      const Point x = rng.in_box(fbox);
      const double v = fields[0](x);
      twice = std::max(twice, std::abs(back(x) - v) / std::max(1.0, std::abs(v)));
      const Point y = rng.in_box(box);
      const double u = prof(y);
      radial = std::max(radial, std::abs(rot(y) - u) / std::max(1.0, std::abs(u)));
    }
  }
  out.push_back(make_check(s, "conjugation is an involution on fields", twice, "<=", 1e-12));
  out.push_back(make_check(s, "rotation fixes ball-radial fields", radial, "<=", 1e-10));
  return out;
}

// Shell integral beyond d as MC over 0 < |z| < 4d plus the closed tail beyond 4d.
Estimate shell_integral_mc(double d, const Params& params, const QuadratureConfig& cfg) {
  const int n = params.n();
  const double a = params.alpha(), L = 4.0 * d;
  const Estimate inner = integrate(
      [d, L, n, a](const Point& z) {
        const double r = z.norm();
        return (r > d && r < L) ? std::pow(r, -n - a) : 0.0;
      },
      Box::cube(n, -L, L), cfg, 31);
  Estimate e = inner;
  e.value += shell_integral(L, params);
  return e;
}

std::vector<Check> quadrature_suite(const QuadratureConfig& cfg) {
  const std::string s = "quadrature";
  std::vector<Check> out;

  double tail_closed = 0.0, tail_numeric = 0.0;
  for (int n : kDims)
    for (double a : kAlphas) {
      const Params P(n, a);
      const double expect = 2.0 / (a + 1.0) - 1.0 / (n + a);
      tail_closed = std::max(tail_closed, std::abs(tail_t_integral(P) - expect));
      tail_numeric = std::max(tail_numeric, std::abs(tail_t_integral_numeric(P) - expect));
    }
  out.push_back(make_check(s, "tail_t_integral = 2/(alpha+1) - 1/(n+alpha)", tail_closed, "<=", 1e-8));
  out.push_back(make_check(s, "tail_t_integral by quadrature", tail_numeric, "<=", 1e-8));

  double shell_radial = 0.0, shell_mc = 0.0, shell_scaling = 0.0;
  for (int n : {2, 3})
    for (double a : kAlphas) {
      const Params P(n, a);
      for (double d : {0.25, 1.0, 3.0}) {
        const double exact = shell_integral(d, P);
        shell_radial = std::max(shell_radial, std::abs(shell_integral_radial(d, P) - exact) / exact);
        shell_scaling = std::max(shell_scaling, std::abs(shell_integral(2.0 * d, P) / exact - std::pow(2.0, -a)));
      }
      const double exact = shell_integral(1.0, P);
      shell_mc = std::max(shell_mc, std::abs(shell_integral_mc(1.0, P, cfg.with_samples(400000)).value - exact) / exact);
    }
  out.push_back(make_check(s, "shell_integral vs radial quadrature (relative)", shell_radial, "<=", 1e-10));
  out.push_back(make_check(s, "shell_integral vs n-dim Monte Carlo (relative)", shell_mc, "<=", 1e-2));
  out.push_back(make_check(s, "shell_integral(2d) = 2^-alpha shell_integral(d)", shell_scaling, "<=", 1e-14));

  double sandwich = 0.0;
  for (int n : kDims)
    for (int i = 1; i <= 50; ++i) {
      const Sandwich w = sandwich_check(0.98 * i / 50.0, n);
      if (!w.holds()) sandwich += 1.0;
    }
  out.push_back(make_check(s, "sandwich bounds on 50 x 5 (S, n) grid, violations", sandwich, "<=", 0.0));

  std::vector<double> samples;
  Rng rng(0x1a7e5ULL);
  for (int i = 0; i < 100; ++i) samples.push_back(0.05 + 4.95 * rng.uniform());
  out.push_back(make_check(s, "layer-cake identities on 100 samples", layer_identities(samples, 2.5, 3.0, 1.5).max_error(),
                           "<=", 1e-8));

  double cancel = 0.0;
  for (int n : {2, 3})
    for (double a : kAlphas)
      for (double eps : {0.5, 0.9}) cancel = std::max(cancel, std::abs(cancellation_check(eps, Params(n, a))));
  out.push_back(make_check(s, "cancellation integral at eps in {0.5, 0.9}", cancel, "<=", 1e-6));

  double subst = 0.0, dpolar = 0.0;
  for (int n : {2, 3})
    for (double a : kAlphas) {
      const Params P(n, a);
      const double D = d_constant_polar(P);
      for (double lb : {0.05, 0.4, 2.0}) subst = std::max(subst, substitution_check(lb, D, P).relative_gap());
      if (n == 2) {
        // D at n = 2 is int_0^pi int_0^1 r^{1+b} sin^b dr dt.
        const double b = P.reference_weight_exponent();
        const double ref =
            quad::endpoint_singular([b](double t) { return std::pow(std::sin(t), b); }, 0.0, M_PI, 1e-15) / (2.0 + b);
        dpolar = std::max(dpolar, std::abs(D - ref) / ref);
      }
    }
  out.push_back(make_check(s, "c-substitution closed form vs direct quadrature", subst, "<=", 1e-8));
  out.push_back(make_check(s, "D polar reduction vs 2-D polar integral", dpolar, "<=", 1e-10));

  double radial_cap = 0.0;
  for (int n : {2, 3})
    for (double R : {0.2, 0.5, 0.8}) {
      const Params P(n, 1.5);
      const double b = cap_weight_integral_radial(R, P);
      // int_0^R r^{n-1}(1-r^2)^{-n} dr in closed form for n = 2 and 3.
      const double inner = n == 2 ? 0.5 * R * R / (1.0 - R * R)
                                  : 0.125 * (R * (1.0 + R * R) / ((1.0 - R * R) * (1.0 - R * R)) -
                                            0.5 * std::log((1.0 + R) / (1.0 - R)));
      const double ref = std::pow(2.0, n) * sphere_area(n) * inner;
      radial_cap = std::max(radial_cap, std::abs(b - ref) / ref);
    }
  out.push_back(make_check(s, "cap weight radial integral vs closed form", radial_cap, "<=", 1e-10));
  return out;
}

std::vector<Check> stochastic_suite(const Params& P, const QuadratureConfig& cfg) {
  const std::string s = "stochastic";
  std::vector<Check> out;
  const auto corpus = standard_corpus(P.n());

  {
    const ScalarField& f = corpus[0];
    const Estimate a = gagliardo(f, Domain::full_space(), P, cfg);
    const Estimate b = gagliardo(conjugate_field(f, P), Domain::full_space(), P, cfg);
    out.push_back(make_check(s, "I(f) = I(f~) in combined std errors", std::abs(a.value - b.value) / combined_error(a, b),
                             "<=", 3.0));
  }
  {
    const Params P2(P.n(), 1.5);
    const double exact = shell_integral(1.0, P2);
    const Estimate e = shell_integral_mc(1.0, P2, cfg);
    out.push_back(make_check(s, "shell integral Monte Carlo in std errors", std::abs(e.value - exact) / e.std_error, "<=",
                             3.0));
  }
  if (P.alpha() > 1.0) {
    const DConstant d = d_constant(P, cfg);
    out.push_back(make_check(s, "D Monte Carlo vs polar (relative)", std::abs(d.monte_carlo.value - d.polar) / d.polar,
                             "<=", 1e-2));
    const double R = 0.5;
    const Estimate w = cap_weight_integral(R, P, cfg);
    out.push_back(make_check(s, "cap weight integral Monte Carlo in std errors",
                             std::abs(w.value - cap_weight_integral_radial(R, P)) / w.std_error, "<=", 3.0));
  }
  if (P.p() == 2.0) {
    const ConstantEstimate D = estimate_hardy_constant(corpus, P, cfg);
    const double gs = hardy_constant_ground_state(P);
    out.push_back(make_check(s, "Hardy coefficient vs ground-state quadrature in std errors",
                             std::abs(D.value - gs) / D.std_error, "<=", 3.0));
    const RayleighQuotient rq = rayleigh_quotient(corpus[0], P, cfg, gs);
    out.push_back(make_check(s, "Rayleigh quotient routes agree in std errors",
                             rq.discrepancy / rq.combined_error, "<=", 3.0));
  }
  if (P.alpha() > 1.0 && P.alpha() < std::min<double>(P.n(), P.p())) {
    const ConstantEstimate d = theorem22_verify(corpus, P, cfg);
    out.push_back(make_check(s, "weighted q-norm constant positive", d.value, ">=", 0.0));
    out.push_back(make_check(s, "weighted q-norm constant relative std error", d.std_error / d.value, "<=", 0.1));
  }
  return out;
}

}  // namespace

std::vector<Check> run_suite(const std::string& name, const Params& params, const QuadratureConfig& cfg) {
  if (name == "exact") return exact_suite();
  if (name == "quadrature") return quadrature_suite(cfg);
  if (name == "stochastic") return stochastic_suite(params, cfg);
  throw ParameterError("unknown suite '" + name + "'");
}

std::vector<Check> run_suites(const std::string& selection, const Params& params, const QuadratureConfig& cfg) {
  std::vector<std::string> names;
  if (selection == "all") {
    names = suite_names();
  } else {
    std::size_t start = 0;
    while (start <= selection.size()) {
      const std::size_t end = std::min(selection.find(',', start), selection.size());
      names.push_back(selection.substr(start, end - start));
      start = end + 1;
    }
  }
  for (const auto& n : names)
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
      throw ParameterError("unknown suite '" + n + "'");
  std::vector<Check> out;
  for (const auto& n : names) {
    auto part = run_suite(n, params, cfg);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace frachs
