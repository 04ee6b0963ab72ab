#include "frachs/constants.hpp"

#include <algorithm>
#include <cmath>

#include "frachs/error.hpp"
#include "frachs/seminorms.hpp"

namespace frachs {

double cp_objective(double tau, double p) {
  return std::pow(1.0 - tau, p) - std::pow(tau, p) + p * std::pow(tau, p - 1.0);
}

double cp_min(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw ParameterError("cp_min: p must be >= 2");
  constexpr int kGrid = 10000;
  const double h = 0.5 / kGrid;
  int best = 1;
  double best_val = cp_objective(h, p);
  for (int i = 2; i < kGrid; ++i) {
    const double v = cp_objective(i * h, p);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = std::max((best - 1) * h, 0.0), b = std::min((best + 1) * h, 0.5);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = cp_objective(c, p), fd = cp_objective(d, p);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = cp_objective(c, p);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = cp_objective(d, p);
    }
  }
  return std::min({best_val, fc, fd});
}

double sphere_area(int n) {
  if (n < 1) throw ParameterError("sphere_area: n must be >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

Exponents exponents(const Params& params) {
  const double n = params.n(), a = params.alpha(), p = params.p();
  Exponents e{params.p_star(), params.two_star(), params.q(), 0.0, 0.0};
  e.identity_gap_q = std::abs((1.0 - p / e.q) - (a + 1.0) / (2.0 * n + a - 1.0));
  e.identity_gap_weight = std::abs((0.5 * (a - 1.0) - e.q * (a - 1.0) / p) - (-n + n * e.q / e.p_star));
  if (e.identity_gap_q > 1e-13 || e.identity_gap_weight > 1e-13)
    throw ContractError("exponent identities violated for " + params.describe());
  return e;
}

double shell_integral(double d, const Params& params) {
  if (!(d > 0.0)) throw ParameterError("shell_integral: d must be positive");
  return sphere_area(params.n()) * std::pow(d, -params.alpha()) / params.alpha();
}

double shell_integral_radial(double d, const Params& params) {
  if (!(d > 0.0)) throw ParameterError("shell_integral: d must be positive");
  const double a = params.alpha();
  const int n = params.n();
  // r = d / u maps (d, infinity) onto (0, 1]; r^{n-1} r^{-n-alpha} dr
  // becomes (d/u)^{-alpha} du / u.
  auto h = [a, d](double u) { return std::pow(d / u, -a) / u; };
  return sphere_area(n) * quad::endpoint_singular(h, 0.0, 1.0, 1e-15);
}

double tail_t_integral(const Params& params) {
  const double a = params.alpha();
  return 2.0 / (a + 1.0) - 1.0 / (params.n() + a);
}

double tail_t_integral_numeric(const Params& params) {
  const double n = params.n(), a = params.alpha();
  auto g = [n, a](double t) {
    return std::pow(t, -n - a - 1.0) * (std::pow(t, n + 0.5 * (a - 1.0)) - 1.0);
  };
  return quad::to_infinity(g, 1.0, 1e-14);
}

double ball_weight_integral(double b, int n) {
  if (!(b >= 0.0 && b < 1.0)) throw ParameterError("ball_weight_integral: b must lie in [0, 1)");
  if (b == 0.0) return 0.0;
  // r = b u keeps the integrand of order one for small b.
  auto g = [n, b](double u) { return std::pow(u, n - 1.0) * std::pow(1.0 - b * b * u * u, -n); };
  return std::pow(b, n) * quad::finite(g, 0.0, 1.0, 1e-14);
}

Sandwich sandwich_check(double S, int n) {
  if (!(S > 0.0 && S < 1.0)) throw ParameterError("sandwich_check: S must lie in (0, 1)");
  if (n < 2) throw ParameterError("sandwich_check: n must be >= 2");
  const double factor = std::pow(1.0 - S * S, n - 1.0) / std::pow(S, n);
  return {factor * ball_weight_integral(S, n), 0.5 / (n - 1.0), 1.0 / (n - 1.0)};
}

ConstantEstimate estimate_hardy_constant(const std::vector<ScalarField>& corpus, const Params& params,
                                         const QuadratureConfig& cfg) {
  params.require_quadratic();
  if (corpus.empty()) throw ParameterError("estimate_hardy_constant: empty corpus");
  ConstantEstimate out;
  double var = 0.0;
  for (const auto& f : corpus) {
    const HardyDecomposition hd = hardy_decomposition(f, params, cfg);
    const Estimate h = hardy_term(f, params, cfg);
    if (hd.I_minus_J.divergent || h.divergent)
      throw DivergenceError("divergent Hardy estimate", f.label());
    if (!(h.value > 0.0)) throw ParameterError("estimate_hardy_constant: vanishing Hardy term for " + f.label());
    const Estimate r = ratio(hd.I_minus_J, h);
    out.per_trial.push_back({f.label(), r});
    out.value += r.value;
    var += r.std_error * r.std_error;
  }
  const double m = static_cast<double>(corpus.size());
  out.value /= m;
  out.std_error = std::sqrt(var) / m;
  out.trials = static_cast<int>(corpus.size());
  for (const auto& t : out.per_trial)
    out.spread = std::max(out.spread, std::abs(t.ratio.value - out.value) / std::abs(out.value));
  return out;
}

double hardy_constant_ground_state(const Params& params) {
  const int n = params.n();
  const double a = params.alpha(), b = params.reference_weight_exponent();
  const double c = std::pow(M_PI, 0.5 * (n - 1)) * std::tgamma(0.5 * (1.0 + a)) / std::tgamma(0.5 * (n + a));
  // Principal value around t = 1 folded onto u = |t - 1| in (0, 1).
  auto folded = [a, b](double u) {
    if (u <= 0.0) return 0.0;
    if (u < 1e-3) {
      const double c2 = b * (1.0 - b), c4 = -b * (b - 1.0) * (b - 2.0) * (b - 3.0) / 12.0;
      return (c2 + c4 * u * u) * std::pow(u, 1.0 - a);
    }
    const double s = -std::expm1(b * std::log1p(u)) - std::expm1(b * std::log1p(-u));
    return s * std::pow(u, -1.0 - a);
  };
  auto tail = [a, b](double t) { return (1.0 - std::pow(t, b)) * std::pow(t - 1.0, -1.0 - a); };
  const double pv = quad::endpoint_singular(folded, 0.0, 1.0, 1e-13) + quad::to_infinity(tail, 2.0, 1e-13);
  return 2.0 * c * pv;
}

ConstantEstimate estimate_sobolev_constant(const std::vector<ScalarField>& corpus, const Params& params,
                                           const QuadratureConfig& cfg) {
  if (corpus.empty()) throw ParameterError("estimate_sobolev_constant: empty corpus");
  ConstantEstimate out;
  out.value = INFINITY;
  const double p = params.p();
  for (const auto& f : corpus) {
    const Estimate I = gagliardo(f, Domain::full_space(), params, cfg);
    if (I.divergent) throw DivergenceError("divergent seminorm", f.label());
    const Estimate norm = power(lp_norm(f, params.p_star(), cfg), p);
    const Estimate r = ratio(I, norm);
    out.per_trial.push_back({f.label(), r});
    if (r.value < out.value) {
      out.value = r.value;
      out.std_error = r.std_error;
    }
  }
  out.trials = static_cast<int>(corpus.size());
  for (const auto& t : out.per_trial)
    out.spread = std::max(out.spread, std::abs(t.ratio.value - out.value) / std::abs(out.value));
  return out;
}

double convex_sobolev_chain(const Params& params, double S_est, double D_est) {
  if (!(S_est > 0.0) || !(D_est > 0.0))
    throw ParameterError("convex_sobolev_chain: S and D must be positive");
  return S_est / (1.0 + 2.0 * sphere_area(params.n()) / (params.alpha() * D_est));
}

}  // namespace frachs
