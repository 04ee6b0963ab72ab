#include "frachs/hsm_bound.hpp"

#include <algorithm>
#include <cmath>

#include "frachs/error.hpp"
#include "frachs/geometry.hpp"
#include "frachs/layer_cake.hpp"
#include "frachs/seminorms.hpp"

namespace frachs {

namespace {

enum Stream : std::uint64_t {
  kStreamCapWeight = 21,
  kStreamA1 = 22,
};

std::vector<double> with_knot(const std::vector<double>& knots, double R) {
  std::vector<double> k = knots;
  if (!std::binary_search(k.begin(), k.end(), R)) k.insert(std::upper_bound(k.begin(), k.end(), R), R);
  return k;
}

}  // namespace

Truncation truncate_profile(const RadialProfile& h, double R) {
  if (!(R > 0.0 && R < 1.0)) throw ParameterError("truncate_profile: R must lie in (0, 1)");
  h.validate();
  // The level is h(R) rounded up to a multiple of ulp(max h): every
  // difference v - level is then exact, so h0 + h1 == h holds in floating
  // point, and h1 still vanishes for r >= R.
  const double top = *std::max_element(h.values.begin(), h.values.end());
  const double grid = top > 0.0 ? std::nextafter(top, INFINITY) - top : 0.0;
  const double hR = grid > 0.0 ? std::ceil(h(R) / grid) * grid : 0.0;
  Truncation t;
  t.h0.knots = t.h1.knots = with_knot(h.knots, R);
  for (double r : t.h0.knots) {
    auto it = std::lower_bound(h.knots.begin(), h.knots.end(), r);
    const double v = (it != h.knots.end() && *it == r) ? h.values[static_cast<std::size_t>(it - h.knots.begin())] : h(R);
    const double v0 = std::min(v, hR);
    t.h0.values.push_back(v0);
    t.h1.values.push_back(v - v0);
  }
  return t;
}

Estimate a1_constant(double R, const Params& params, const QuadratureConfig& cfg) {
  const CapRegion cap = cap_region(R);
  const double e = 0.5 * (1.0 - params.n()), b = params.reference_weight_exponent();
  PairProblem pb;
  pb.n = params.n();
  pb.alpha = params.alpha();
  pb.p = 2.0;
  pb.box = cap.bounding_box(params.n());
  pb.domain = Domain::cap(R);
  pb.integrand = [e, b](const Point& x, const Point& y, double* out) {
    const double d = std::pow(y.last(), e) - std::pow(x.last(), e);
    out[0] = d * d * std::pow(x.last() * y.last(), b);
  };
  return pair_integral(pb, cfg, kStreamA1).values[0];
}

Estimate cap_weight_integral(double R, const Params& params, const QuadratureConfig& cfg) {
  const CapRegion cap = cap_region(R);
  const int n = params.n();
  auto g = [&cap, n](const Point& x) { return cap.contains(x) ? std::pow(x.last(), -n) : 0.0; };
  return integrate_box(g, cap.bounding_box(n), cfg, kStreamCapWeight);
}

double cap_weight_integral_radial(double R, const Params& params) {
  if (!(R > 0.0 && R < 1.0)) throw ParameterError("cap weight integral: R must lie in (0, 1)");
  const int n = params.n();
  return std::pow(2.0, n) * sphere_area(n) * ball_weight_integral(R, n);
}

Estimate a2_coefficient(double R, const Params& params, double d_est, const QuadratureConfig& cfg) {
  if (!(d_est > 0.0)) throw ParameterError("a2_coefficient: d must be positive");
  Estimate v = power(cap_weight_integral(R, params, cfg), 2.0 / params.q());
  v.value *= d_est;
  v.std_error *= d_est;
  return v;
}

double a2_coefficient_radial(double R, const Params& params, double d_est) {
  if (!(d_est > 0.0)) throw ParameterError("a2_coefficient: d must be positive");
  return d_est * std::pow(cap_weight_integral_radial(R, params), 2.0 / params.q());
}

double f1_bound_constant(double R, const Params& params, double c_est, double A1, double A2) {
  if (!(R > 0.0 && R < 1.0)) throw ParameterError("f1_bound_constant: R must lie in (0, 1)");
  if (!(c_est > 0.0) || !(A1 >= 0.0) || !(A2 > 0.0))
    throw ParameterError("f1_bound_constant: constants must be positive");
  const double w = std::pow((1.0 - R) / (1.0 + R), 2.0 * params.alpha() - 2.0);
  return 0.5 * c_est * w / (1.0 + A1 / A2);
}

F0Bound f0_bound_detail(double R, const Params& params, double d_est) {
  if (!(R > 0.0 && R < 1.0)) throw ParameterError("f0_bound_constant: R must lie in (0, 1)");
  if (!(d_est > 0.0)) throw ParameterError("f0_bound_constant: d must be positive");
  const int n = params.n();
  const double ts = params.two_star(), q = params.q();
  if (!(ts > q)) throw ContractError("f0_bound_constant: requires 2^* > q");
  const double k = ts / q;
  F0Bound out;
  out.tail_exponent = (n - 1.0) * k - n;
  if (!(out.tail_exponent > -1.0)) throw ContractError("f0_bound_constant: tail integrand not integrable");
  auto tail = [n, k](double r) {
    const double s = 1.0 - r * r;
    return std::pow(r, n - 1.0 - n * k) * std::pow(s, (n - 1.0) * k - n);
  };
  const double head = std::pow(std::pow(1.0 - R * R, n - 1.0) / std::pow(R, n), k - 1.0) / (n - 1.0);
  out.bracket = head + quad::endpoint_singular(tail, R, 1.0, 1e-12);
  const double area = sphere_area(n);
  out.prefactor = std::pow(2.0, n) * area * std::pow(d_est, -0.5 * ts) *
                  std::pow(std::pow(2.0, n - 1.0) * area / (n - 1.0), -k);
  out.value = std::pow(out.prefactor * out.bracket, -2.0 / ts);
  return out;
}

double f0_bound_constant(double R, const Params& params, double d_est) {
  return f0_bound_detail(R, params, d_est).value;
}

double combined_bound(double c, double d, double lambda) {
  return 0.5 * std::min(lambda * c, (1.0 - lambda) * d);
}

double optimal_lambda(double c, double d) {
  if (!(c > 0.0) || !(d > 0.0)) throw ParameterError("optimal_lambda: c and d must be positive");
  return d / (c + d);
}

void validate_unit_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw ParameterError(std::string(what) + ": grid is empty");
  for (double v : grid)
    if (!(v > 0.0 && v < 1.0)) throw ParameterError(std::string(what) + ": grid values must lie in (0, 1)");
}

void combine_and_optimize(BoundReport& report, const std::vector<double>& lambda_grid) {
  validate_unit_grid(lambda_grid, "lambda grid");
  report.lambda_cell = lambda_grid.size() > 1 ? (lambda_grid.back() - lambda_grid.front()) / (lambda_grid.size() - 1)
                                              : 1.0;
  const GridPoint* best = nullptr;
  for (auto& g : report.grid) {
    if (!g.ok) continue;
    g.lambda_closed = optimal_lambda(g.c_term, g.d_term);
    g.a_closed = combined_bound(g.c_term, g.d_term, g.lambda_closed);
    g.a_grid = -1.0;
    for (double l : lambda_grid) {
      const double a = combined_bound(g.c_term, g.d_term, l);
      if (a > g.a_grid) {
        g.a_grid = a;
        g.lambda_grid = l;
      }
    }
    if (!best || g.a_closed > best->a_closed) best = &g;
  }
  if (!best) throw DivergenceError("bound pipeline: every grid point failed", "combine_and_optimize");
  report.R = best->R;
  report.lambda = best->lambda_closed;
  report.lambda_grid_at_best = best->lambda_grid;
  report.A1 = best->A1;
  report.A2_coeff = best->A2;
  report.c_term = best->c_term;
  report.d_term = best->d_term;
  report.a_lower = best->a_closed;
}

RayleighQuotient rayleigh_quotient(const ScalarField& f, const Params& params, const QuadratureConfig& cfg,
                                   double hardy_coefficient, double hardy_coefficient_error) {
  params.require_quadratic();
  const Estimate norm = lp_norm(f, params.two_star(), cfg);
  if (!(norm.value > 0.0)) throw ParameterError("rayleigh_quotient: zero norm");
  const Estimate n2 = power(norm, 2.0);
  const HardyDecomposition hd = hardy_decomposition(f, params, cfg);
  if (hd.J.divergent) throw DivergenceError("divergent J in Rayleigh quotient", f.label());
  const Estimate H = hardy_term(f, params, cfg);
  RayleighQuotient out;
  out.phi = ratio(hd.J, n2);
  Estimate alt;
  alt.value = hd.I.value - hardy_coefficient * H.value;
  alt.std_error = std::sqrt(hd.I.std_error * hd.I.std_error +
                            std::pow(hardy_coefficient * H.std_error, 2) +
                            std::pow(hardy_coefficient_error * H.value, 2));
  alt.samples_used = hd.I.samples_used;
  out.phi_hardy = ratio(alt, n2);
  out.discrepancy = std::abs(out.phi.value - out.phi_hardy.value);
  out.combined_error = combined_error(out.phi, out.phi_hardy);
  return out;
}

BoundReport run_bound_pipeline(const Params& params, const QuadratureConfig& cfg, const PipelineOptions& options) {
  params.require_pipeline();
  params.require_quadratic();
  validate_unit_grid(options.R_grid, "R grid");
  if (options.corpus.empty()) throw ParameterError("bound pipeline: empty corpus");
  std::vector<double> lambda_grid = options.lambda_grid;
  if (lambda_grid.empty())
    for (int i = 1; i < 1000; ++i) lambda_grid.push_back(i / 1000.0);

  BoundReport rep;
  auto stage = [&rep](std::string name, double value, double se, double used) {
    rep.stages.push_back({std::move(name), value, se, used});
    return used;
  };

  const ConstantEstimate D = estimate_hardy_constant(options.corpus, params, cfg);
  const double D_lo = stage("hardy_constant", D.value, D.std_error, D.value - 3.0 * D.std_error);
  const ConstantEstimate S = estimate_sobolev_constant(options.corpus, params, cfg);
  const double S_lo = stage("sobolev_constant", S.value, S.std_error, S.value - 3.0 * S.std_error);
  const ConstantEstimate dh = theorem22_verify(options.corpus, params, cfg);
  const double d_lo = stage("weighted_sobolev_constant", dh.value, dh.std_error, dh.value - 3.0 * dh.std_error);
  if (!(D_lo > 0.0) || !(S_lo > 0.0) || !(d_lo > 0.0))
    throw DivergenceError("bound pipeline: an empirical constant is not resolved at 3 sigma", "constants");
  const double c_est = convex_sobolev_chain(params, S_lo, D_lo);
  stage("convex_chain", c_est, 0.0, c_est);

  const QuadratureConfig a1_cfg = options.a1_samples ? cfg.with_samples(options.a1_samples) : cfg;
  for (double R : options.R_grid) {
    GridPoint g;
    g.R = R;
    try {
      g.A1_estimate = a1_constant(R, params, a1_cfg);
      if (g.A1_estimate.divergent) throw DivergenceError("A1 diverged", "a1_constant");
      g.A1 = g.A1_estimate.value + 3.0 * g.A1_estimate.std_error;
      g.A2 = a2_coefficient_radial(R, params, d_lo);
      g.c_term = f1_bound_constant(R, params, c_est, g.A1, g.A2);
      g.d_term = f0_bound_constant(R, params, d_lo);
      g.ok = g.c_term > 0.0 && g.d_term > 0.0 && std::isfinite(g.c_term) && std::isfinite(g.d_term);
      if (!g.ok) g.failure = "nonpositive stage constant";
    } catch (const Error& e) {
      g.ok = false;
      g.failure = e.what();
    }
    rep.grid.push_back(g);
  }
  combine_and_optimize(rep, lambda_grid);
  return rep;
}

}  // namespace frachs
