#include "frachs/layer_cake.hpp"

#include <algorithm>
#include <cmath>

#include "frachs/error.hpp"
#include "frachs/seminorms.hpp"

namespace frachs {

namespace {

enum Stream : std::uint64_t {
  kStreamLevel = 11,
  kStreamQ = 12,
  kStreamD = 13,
  kStreamPairMeasure = 14,
};

double beta_of(const Params& params) { return params.reference_weight_exponent(); }

}  // namespace

ScalarField level_field(const ScalarField& f, const Params& params) {
  if (!f.support().inside_half_space()) throw ParameterError("level_field: field must live in the halfspace");
  const double e = (1.0 - params.alpha()) / params.p();
  auto eval = [f, e](const Point& x) {
    const double v = std::abs(f(x));
    return v == 0.0 ? 0.0 : std::pow(x.last(), e) * v;
  };
  return ScalarField(f.dim(), eval, f.support(), f.box(), f.label() + "^g");
}

LevelData level_data(const ScalarField& g, std::vector<double> levels, const Params& params,
                     const QuadratureConfig& cfg) {
  if (!std::is_sorted(levels.begin(), levels.end())) throw ParameterError("level_data: levels must increase");
  for (double a : levels)
    if (!(a > 0.0)) throw ParameterError("level_data: levels must be positive");
  const double b = beta_of(params), delta = cfg.boundary_cutoff;
  const int k = static_cast<int>(levels.size());
  auto integrand = [&](const Point& x, double* out) {
    if (x.last() <= delta) return;
    const double v = g(x);
    if (!(v > levels.front())) return;
    const double w = std::pow(x.last(), b);
    for (int i = 0; i < k && v > levels[static_cast<std::size_t>(i)]; ++i) out[i] = w;
  };
  const auto series = integrate_box_multi(integrand, k, g.sampling_box(), cfg, kStreamLevel);
  LevelData d;
  d.levels = std::move(levels);
  for (const auto& s : series) d.lambda_vals.push_back(s.estimate());
  return d;
}

Estimate level_measure(const ScalarField& g, double a, const Params& params, const QuadratureConfig& cfg) {
  return level_data(g, {a}, params, cfg).lambda_vals[0];
}

Estimate mu_q_norm_power(const ScalarField& g, const Params& params, const QuadratureConfig& cfg) {
  const double b = beta_of(params), q = params.q(), delta = cfg.boundary_cutoff;
  auto integrand = [&](const Point& x) {
    if (x.last() <= delta) return 0.0;
    const double v = g(x);
    return v == 0.0 ? 0.0 : std::pow(v, q) * std::pow(x.last(), b);
  };
  return integrate_box(integrand, g.sampling_box(), cfg, kStreamQ);
}

double d_constant_polar(const Params& params) {
  const double b = beta_of(params);
  if (!(b > 0.0)) throw ParameterError("d_constant: requires alpha > 1");
  const int n = params.n();
  auto ang = [b, n](double th) { return std::pow(std::cos(th), b) * std::pow(std::sin(th), n - 2.0); };
  return sphere_area(n - 1) / (n + b) * quad::endpoint_singular(ang, 0.0, 0.5 * M_PI, 1e-14);
}

DConstant d_constant(const Params& params, const QuadratureConfig& cfg) {
  const double b = beta_of(params);
  if (!(b > 0.0)) throw ParameterError("d_constant: requires alpha > 1");
  const int n = params.n();
  Box box = Box::cube(n, -1.0, 1.0);
  box.lo.last() = 0.0;
  auto integrand = [b](const Point& y) {
    if (y.norm2() >= 1.0 || y.last() <= 0.0) return 0.0;
    return std::pow(y.last(), b);
  };
  return {integrate_box(integrand, box, cfg, kStreamD), d_constant_polar(params)};
}

PairMeasure pair_measure_lower(const ScalarField& g, double a, double c, const Params& params,
                               const QuadratureConfig& cfg) {
  const int n = params.n();
  if (2 * n > kMaxDim) throw ParameterError("pair_measure_lower: supported for n <= 4");
  if (!(a > 0.0) || !(c > 0.0)) throw ParameterError("pair_measure_lower: a and c must be positive");
  const double b = beta_of(params), delta = cfg.boundary_cutoff;
  const Box& gb = g.sampling_box();
  // Product of the support box with the cube holding (y - x)/c.
  Box box{Point(2 * n), Point(2 * n)};
  for (int i = 0; i < n; ++i) {
    box.lo[i] = gb.lo[i];
    box.hi[i] = gb.hi[i];
    box.lo[n + i] = -1.0;
    box.hi[n + i] = 1.0;
  }
  const double aux_volume = std::pow(2.0, n);
  auto integrand = [&](const Point& z, double* out) {
    Point x(n);
    double v2 = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = z[i];
      v2 += z[n + i] * z[n + i];
    }
    if (x.last() <= delta || !(g(x) > a)) return;
    const double wx = std::pow(x.last(), b);
    out[1] = wx / aux_volume;
    if (v2 >= 1.0) return;
    const double yn = x.last() + c * z[2 * n - 1];
    if (yn <= delta) return;
    out[0] = wx * std::pow(yn, b) * std::pow(c, n);
  };
  const auto series = integrate_box_multi(integrand, 2, box, cfg, kStreamPairMeasure);
  PairMeasure pm;
  pm.u = series[0].estimate();
  pm.lambda = series[1].estimate();
  pm.bound = d_constant_polar(params) * std::pow(c, n + b) * pm.lambda.value;
  return pm;
}

double LayerIdentityReport::max_error() const noexcept {
  return std::max({max_error_power, max_error_tail, max_error_level});
}

LayerIdentityReport layer_identities(const std::vector<double>& samples, double p, double q, double s) {
  if (!(p >= 2.0) || !(q > 0.0) || !(s > 0.0)) throw ParameterError("layer_identities: need p >= 2, q > 0, s > 0");
  LayerIdentityReport r;
  r.samples = static_cast<int>(samples.size());
  auto rel = [](double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); };
  for (double t : samples) {
    if (!(t > 0.0)) throw ParameterError("layer_identities: samples must be positive");
    const double pw = p * (p - 1.0) *
                      quad::endpoint_singular([t, p](double a) { return (t - a) * std::pow(a, p - 2.0); }, 0.0, t,
                                              1e-14);
    r.max_error_power = std::max(r.max_error_power, rel(pw, std::pow(t, p)));
    const double tail = quad::to_infinity([s](double u) { return s * std::pow(u, -s - 1.0); }, t, 1e-14);
    r.max_error_tail = std::max(r.max_error_tail, rel(tail, std::pow(t, -s)));
    const double lv = quad::endpoint_singular([q](double a) { return q * std::pow(a, q - 1.0); }, 0.0, t, 1e-14);
    r.max_error_level = std::max(r.max_error_level, rel(lv, std::pow(t, q)));
  }
  return r;
}

double SubstitutionCheck::relative_gap() const noexcept {
  return std::abs(direct - formula) / std::abs(formula);
}

SubstitutionCheck substitution_check(double lambda_b, double D, const Params& params) {
  if (!(lambda_b > 0.0) || !(D > 0.0)) throw ParameterError("substitution_check: inputs must be positive");
  const double n = params.n(), a = params.alpha(), b = beta_of(params);
  const double c0 = std::pow(lambda_b / D, 1.0 / (n + b));
  auto g = [=](double c) { return std::pow(c, -n - a - 1.0) * (D * std::pow(c, n + b) - lambda_b); };
  SubstitutionCheck out;
  out.direct = quad::to_infinity(g, c0, 1e-14);
  const double m = 2.0 * n + a - 1.0;
  out.formula = std::pow(lambda_b, -(a + 1.0) / m) * std::pow(D, 2.0 * (n + a) / m) * tail_t_integral(params);
  return out;
}

ConstantEstimate theorem22_verify(const std::vector<ScalarField>& corpus, const Params& params,
                                  const QuadratureConfig& cfg) {
  if (corpus.empty()) throw ParameterError("theorem22_verify: empty corpus");
  params.require_pipeline();
  ConstantEstimate out;
  out.value = INFINITY;
  for (const auto& f : corpus) {
    const Estimate J = weighted_gagliardo(f, params, cfg);
    const Estimate Q = weighted_q_norm(f, params, cfg);
    if (J.divergent || Q.divergent) throw DivergenceError("divergent estimate in weighted Sobolev ratio", f.label());
    const Estimate r = ratio(J, Q);
    out.per_trial.push_back({f.label(), r});
    if (r.value < out.value) {
      out.value = r.value;
      out.std_error = r.std_error;
    }
  }
  out.trials = static_cast<int>(corpus.size());
  for (const auto& t : out.per_trial)
    out.spread = std::max(out.spread, std::abs(t.ratio.value - out.value) / std::abs(out.value));
  if (!(out.value > 0.0)) throw ContractError("theorem22_verify: nonpositive constant");
  return out;
}

}  // namespace frachs
