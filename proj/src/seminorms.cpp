#include "frachs/seminorms.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "frachs/constants.hpp"
#include "frachs/error.hpp"

namespace frachs {

namespace {

constexpr int kBands = 4;
// Accumulator slots per channel: total, below eps, band [eps, 2eps), bands below eps.
constexpr int kSlots = 3 + kBands;

struct PairNode {
  Point x;
  Point u_near;
  double uniform_near;  // in (0, 1]
  Point u_tail;
  double uniform_tail;  // in (0, 1]
};

std::uint64_t grid_side(std::uint64_t samples, int dims) {
  auto m = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(samples), 1.0 / dims) + 1e-9));
  return std::max<std::uint64_t>(m, 2);
}

}  // namespace

PairResult pair_integral(const PairProblem& pb, const QuadratureConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  const int n = pb.n;
  const int C = pb.channels;
  if (pb.box.dim() != n) throw ParameterError("pair_integral: box dimension mismatch");
  if (!(pb.p > pb.alpha)) throw ParameterError("pair_integral: requires p > alpha");
  if (cfg.method == Method::TensorGrid && n != 2)
    throw ParameterError("tensor-grid pair integrals are implemented for n = 2 only");

  const double vol = pb.box.volume();
  const double rc = pb.box.diameter();
  const double area = sphere_area(n);
  const double s = pb.p - pb.alpha;
  const double a_near = area * std::pow(rc, s) / s;
  const double a_tail = area * std::pow(rc, -pb.alpha) / pb.alpha;
  const double eps = cfg.singular_cutoff;
  const double delta = cfg.boundary_cutoff;
  const int batches = cfg.batches;

  // acc[b][c * kSlots + slot]
  std::vector<std::vector<double>> acc(static_cast<std::size_t>(batches),
                                       std::vector<double>(static_cast<std::size_t>(C * kSlots), 0.0));
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(batches), 0);

  auto process = [&](const PairNode& node, std::vector<double>& a, std::vector<double>& g) {
    const Point& x = node.x;
    if (!pb.domain.contains(x, delta)) return;
    const double r = rc * std::pow(node.uniform_near, 1.0 / s);
    if (r > 0.0) {
      Point y = x;
      for (int i = 0; i < n; ++i) y[i] += r * node.u_near[i];
      if (pb.domain.contains(y, delta)) {
        std::fill(g.begin(), g.end(), 0.0);
        pb.integrand(x, y, g.data());
        const double overlap = pb.box.contains(y) ? 0.5 : 1.0;
        const double w = 2.0 * vol * a_near * overlap / std::pow(r, pb.p);
        int band = -1;
        if (r < eps) band = static_cast<int>(std::floor(std::log2(eps / r)));
        for (int c = 0; c < C; ++c) {
          const double v = w * g[c];
          double* slot = &a[static_cast<std::size_t>(c * kSlots)];
          slot[0] += v;
          if (r < eps) {
            slot[1] += v;
            if (band < kBands) slot[3 + band] += v;
          } else if (r < 2.0 * eps) {
            slot[2] += v;
          }
        }
      }
    }
    const double r2 = rc * std::pow(node.uniform_tail, -1.0 / pb.alpha);
    Point y2 = x;
    for (int i = 0; i < n; ++i) y2[i] += r2 * node.u_tail[i];
    if (std::isfinite(r2) && pb.domain.contains(y2, delta)) {
      std::fill(g.begin(), g.end(), 0.0);
      pb.integrand(x, y2, g.data());
      const double w = 2.0 * vol * a_tail;
      for (int c = 0; c < C; ++c) a[static_cast<std::size_t>(c * kSlots)] += w * g[c];
    }
  };

  if (cfg.method == Method::MonteCarlo) {
    const std::uint64_t per = (cfg.samples + batches - 1) / batches;
    const int dd = direction_dims(n);
    const int dims = n + 2 * dd + 2;
    run_batches(batches, [&](int b) {
      UniformSource src(cfg, dims, stream, static_cast<std::uint64_t>(b), per * static_cast<std::uint64_t>(b));
      std::vector<double> u(static_cast<std::size_t>(dims));
      std::vector<double>& a = acc[static_cast<std::size_t>(b)];
      std::vector<double> g(static_cast<std::size_t>(C));
      PairNode node;
      node.x = Point(n);
      for (std::uint64_t i = 0; i < per; ++i) {
        src.next(u.data());
        for (int d = 0; d < n; ++d) node.x[d] = pb.box.lo[d] + (pb.box.hi[d] - pb.box.lo[d]) * u[static_cast<std::size_t>(d)];
        node.u_near = direction_from_uniforms(n, &u[static_cast<std::size_t>(n)]);
        node.uniform_near = 1.0 - u[static_cast<std::size_t>(n + dd)];
        node.u_tail = direction_from_uniforms(n, &u[static_cast<std::size_t>(n + dd + 1)]);
        node.uniform_tail = 1.0 - u[static_cast<std::size_t>(n + 2 * dd + 1)];
        process(node, a, g);
      }
      counts[static_cast<std::size_t>(b)] = per;
    });
  } else {
    // Product rule in (x_1, x_2, angle, radial quantile).
    const std::uint64_t m = grid_side(cfg.samples, 4);
    const std::uint64_t total = m * m * m * m;
    run_batches(batches, [&](int b) {
      std::vector<double>& a = acc[static_cast<std::size_t>(b)];
      std::vector<double> g(static_cast<std::size_t>(C));
      const std::uint64_t begin = total * b / batches, end = total * (b + 1) / batches;
      PairNode node;
      node.x = Point(2);
      node.u_near = Point(2);
      node.u_tail = Point(2);
      const double md = static_cast<double>(m);
      for (std::uint64_t idx = begin; idx < end; ++idx) {
        std::uint64_t r = idx;
        const auto i0 = r % m;
        r /= m;
        const auto i1 = r % m;
        r /= m;
        const auto it = r % m;
        const auto ir = r / m;
        node.x[0] = pb.box.lo[0] + (pb.box.hi[0] - pb.box.lo[0]) * (static_cast<double>(i0) + 0.5) / md;
        node.x[1] = pb.box.lo[1] + (pb.box.hi[1] - pb.box.lo[1]) * (static_cast<double>(i1) + 0.5) / md;
        const double th = 2.0 * M_PI * (static_cast<double>(it) + 0.5) / md;
        node.u_near[0] = std::cos(th);
        node.u_near[1] = std::sin(th);
        node.u_tail[0] = std::cos(th + M_PI / md);
        node.u_tail[1] = std::sin(th + M_PI / md);
        node.uniform_near = (static_cast<double>(ir) + 0.5) / md;
        node.uniform_tail = node.uniform_near;
        process(node, a, g);
      }
      counts[static_cast<std::size_t>(b)] = end - begin;
    });
    // The rule is the full node sum; spread it evenly over the batches.
    std::uint64_t all = 0;
    for (auto c : counts) all += c;
    std::vector<double> sum(static_cast<std::size_t>(C * kSlots), 0.0);
    for (const auto& a : acc)
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += a[k];
    for (int b = 0; b < batches; ++b) {
      acc[static_cast<std::size_t>(b)] = sum;
      counts[static_cast<std::size_t>(b)] = all;
    }
  }

  std::uint64_t used = 0;
  if (cfg.method == Method::MonteCarlo)
    for (auto c : counts) used += c;
  else
    used = counts[0];

  PairResult res;
  res.values.resize(static_cast<std::size_t>(C));
  res.diagnostics.resize(static_cast<std::size_t>(C));
  res.series.resize(static_cast<std::size_t>(C));
  const double rich = 1.0 / (std::pow(2.0, s) - 1.0);
  for (int c = 0; c < C; ++c) {
    BatchSeries total, below, band_m1, growth;
    for (int b = 0; b < batches; ++b) {
      const auto& a = acc[static_cast<std::size_t>(b)];
      const double cnt = static_cast<double>(counts[static_cast<std::size_t>(b)]);
      const double* slot = &a[static_cast<std::size_t>(c * kSlots)];
      total.means.push_back(slot[0] / cnt);
      below.means.push_back(slot[1] / cnt);
      band_m1.means.push_back(slot[2] / cnt);
      growth.means.push_back(((slot[3 + 2] + slot[3 + 3]) - (slot[3 + 0] + slot[3 + 1])) / cnt);
    }
    total.samples = below.samples = band_m1.samples = growth.samples = used;
    const BatchSeries cut = total - below;
    const BatchSeries extrapolated = cut + band_m1.scaled(rich);

    CutoffDiagnostics d;
    d.cutoff = eps;
    d.with_cutoff = cut.estimate();
    d.richardson = extrapolated.estimate();
    d.refinement_growth = growth.estimate();

    Estimate v = total.estimate();
    // Deeper bands carrying significantly more mass than shallower ones means
    // the estimate grows without bound as the cutoff is refined.
    const bool divergent = cfg.method == Method::MonteCarlo && d.refinement_growth.value > 0.0 &&
                           d.refinement_growth.value > 3.0 * d.refinement_growth.std_error;
    if (divergent) {
      v = d.with_cutoff;
      v.divergent = true;
    }
    res.values[static_cast<std::size_t>(c)] = v;
    res.diagnostics[static_cast<std::size_t>(c)] = d;
    res.series[static_cast<std::size_t>(c)] = total;
  }
  return res;
}

namespace {

void require_dim(const ScalarField& f, const Params& params, const char* op) {
  if (f.dim() != params.n()) throw ParameterError(std::string(op) + ": field/params dimension mismatch");
}

void require_halfspace(const ScalarField& f, const char* op) {
  if (!f.support().inside_half_space() || !f.box() || !(f.box()->lo.last() >= 0.0))
    throw ParameterError(std::string(op) + ": field must be supported in a bounded part of the halfspace");
}

// Streams keep estimators that share a seed on distinct random sequences.
enum Stream : std::uint64_t {
  kStreamPair = 1,
  kStreamHardy = 2,
  kStreamQNorm = 3,
  kStreamLp = 4,
  kStreamBoundaryProbe = 5,
};

// Strip integrals of g over x_n in [d, 2d) for d = d0 / 4^k; divergence when they
// fail to decay twice in a row.
bool boundary_divergence(const PointFunction& g, const Box& box, const QuadratureConfig& cfg) {
  if (box.lo.last() > 0.02) return false;
  std::array<double, 4> strips{};
  auto probe = cfg.with_samples(std::max<std::uint64_t>(cfg.samples / 16, 4096));
  double d = 0.01;
  for (double& s : strips) {
    Box strip = box;
    strip.lo.last() = d;
    strip.hi.last() = 2.0 * d;
    s = std::abs(integrate_box(g, strip, probe, kStreamBoundaryProbe).value);
    d *= 0.25;
  }
  int growing = 0;
  for (std::size_t k = 0; k + 1 < strips.size(); ++k)
    growing = (strips[k + 1] > 0.0 && strips[k + 1] >= strips[k]) ? growing + 1 : 0;
  return growing >= 2;
}

Estimate single_weighted(const PointFunction& g, const Box& box, const QuadratureConfig& cfg,
                         std::uint64_t stream) {
  Estimate e = integrate_box(g, box, cfg, stream);
  if (boundary_divergence(g, box, cfg)) e.divergent = true;
  return e;
}

}  // namespace

Estimate gagliardo(const ScalarField& f, const Domain& domain, const Params& params,
                   const QuadratureConfig& cfg) {
  require_dim(f, params, "gagliardo");
  const double p = params.p();
  PairProblem pb;
  pb.n = params.n();
  pb.alpha = params.alpha();
  pb.p = p;
  pb.box = f.sampling_box();
  pb.domain = domain;
  pb.integrand = [&f, p](const Point& x, const Point& y, double* out) {
    const double d = std::abs(f(x) - f(y));
    out[0] = p == 2.0 ? d * d : std::pow(d, p);
  };
  return pair_integral(pb, cfg, kStreamPair).values[0];
}

Estimate weighted_gagliardo(const ScalarField& f, const Params& params, const QuadratureConfig& cfg) {
  require_dim(f, params, "weighted_gagliardo");
  require_halfspace(f, "weighted_gagliardo");
  const double p = params.p();
  const double ge = (1.0 - params.alpha()) / p;
  const double we = params.reference_weight_exponent();
  PairProblem pb;
  pb.n = params.n();
  pb.alpha = params.alpha();
  pb.p = p;
  pb.box = f.sampling_box();
  pb.domain = Domain::half_space();
  pb.integrand = [&f, p, ge, we](const Point& x, const Point& y, double* out) {
    const double xn = x.last(), yn = y.last();
    const double fx = f(x), fy = f(y);
    const double gx = fx == 0.0 ? 0.0 : std::pow(xn, ge) * fx;
    const double gy = fy == 0.0 ? 0.0 : std::pow(yn, ge) * fy;
    const double d = std::abs(gx - gy);
    if (d == 0.0) return;
    out[0] = (p == 2.0 ? d * d : std::pow(d, p)) * std::pow(xn * yn, we);
  };
  return pair_integral(pb, cfg, kStreamPair).values[0];
}

HardyDecomposition hardy_decomposition(const ScalarField& f, const Params& params,
                                       const QuadratureConfig& cfg) {
  require_dim(f, params, "hardy_decomposition");
  require_halfspace(f, "hardy_decomposition");
  params.require_quadratic();
  const double ge = 0.5 * (1.0 - params.alpha());
  const double we = params.reference_weight_exponent();
  PairProblem pb;
  pb.n = params.n();
  pb.alpha = params.alpha();
  pb.p = 2.0;
  pb.box = f.sampling_box();
  pb.domain = Domain::half_space();
  pb.channels = 2;
  pb.integrand = [&f, ge, we](const Point& x, const Point& y, double* out) {
    const double xn = x.last(), yn = y.last();
    const double fx = f(x), fy = f(y);
    const double d = fx - fy;
    out[0] = d * d;
    const double gx = fx == 0.0 ? 0.0 : std::pow(xn, ge) * fx;
    const double gy = fy == 0.0 ? 0.0 : std::pow(yn, ge) * fy;
    const double e = gx - gy;
    out[1] = e == 0.0 ? 0.0 : e * e * std::pow(xn * yn, we);
  };
  const PairResult r = pair_integral(pb, cfg, kStreamPair);
  HardyDecomposition out;
  out.I = r.values[0];
  out.J = r.values[1];
  out.I_minus_J = (r.series[0] - r.series[1]).estimate();
  out.I_minus_J.divergent = out.I.divergent || out.J.divergent;
  return out;
}

Estimate hardy_term(const ScalarField& f, const Params& params, const QuadratureConfig& cfg) {
  require_dim(f, params, "hardy_term");
  require_halfspace(f, "hardy_term");
  const double p = params.p(), a = params.alpha(), delta = cfg.boundary_cutoff;
  auto g = [&f, p, a, delta](const Point& x) {
    if (x.last() <= delta) return 0.0;
    const double v = std::abs(f(x));
    if (v == 0.0) return 0.0;
    return (p == 2.0 ? v * v : std::pow(v, p)) * std::pow(x.last(), -a);
  };
  return single_weighted(g, f.sampling_box(), cfg, kStreamHardy);
}

double weighted_q_norm_exponent(const Params& params) {
  return -params.n() + params.n() * params.q() / params.p_star();
}

Estimate weighted_q_norm(const ScalarField& f, const Params& params, const QuadratureConfig& cfg) {
  require_dim(f, params, "weighted_q_norm");
  require_halfspace(f, "weighted_q_norm");
  const double q = params.q(), e = weighted_q_norm_exponent(params), delta = cfg.boundary_cutoff;
  auto g = [&f, q, e, delta](const Point& x) {
    if (x.last() <= delta) return 0.0;
    const double v = std::abs(f(x));
    if (v == 0.0) return 0.0;
    return std::pow(v, q) * std::pow(x.last(), e);
  };
  const Estimate raw = single_weighted(g, f.sampling_box(), cfg, kStreamQNorm);
  Estimate out = power(raw, params.p() / q);
  out.divergent = raw.divergent;
  return out;
}

Estimate lp_norm(const ScalarField& f, double r, const QuadratureConfig& cfg) {
  if (!(r >= 1.0)) throw ParameterError("lp_norm: r must be >= 1");
  auto g = [&f, r](const Point& x) {
    const double v = std::abs(f(x));
    if (v == 0.0) return 0.0;
    return r == 2.0 ? v * v : std::pow(v, r);
  };
  const Estimate raw = integrate_box(g, f.sampling_box(), cfg, kStreamLp);
  return power(raw, 1.0 / r);
}

Estimate integrate(const PointFunction& g, const Box& box, const QuadratureConfig& cfg,
                   std::uint64_t stream) {
  return integrate_box(g, box, cfg, stream);
}

double radial_angular_kernel(double t, const Params& params) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("radial_angular_kernel: t must be positive");
  if (t == 1.0) throw DomainError("radial_angular_kernel: singular at t = 1");
  const int n = params.n();
  const double m = 0.5 * (n + params.alpha());
  // s = cos(theta) removes the (1 - s^2)^{-1/2} endpoint singularity at n = 2.
  auto integrand = [t, m, n](double th) {
    const double sh = std::sin(0.5 * th);
    const double base = (1.0 - t) * (1.0 - t) + 4.0 * t * sh * sh;
    const double jac = n == 2 ? 1.0 : std::pow(std::sin(th), n - 2);
    return jac * std::pow(base, -m);
  };
  // The integrand peaks in a window of width ~ |1 - t| around theta = 0.
  const double split = std::min(M_PI, 8.0 * std::abs(1.0 - t));
  double v = quad::finite(integrand, 0.0, split, 1e-13);
  if (split < M_PI) v += quad::finite(integrand, split, M_PI, 1e-13);
  return v;
}

CancellationParts cancellation_parts(double eps, const Params& params) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("cancellation_check: eps must lie in (0, 1)");
  const double a = params.alpha();
  const int n = params.n();
  auto weight = [a, n](double t) { return std::pow(t, a - 1.0) - std::pow(t, n - 1.0); };
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    return weight(t) * radial_angular_kernel(t, params);
  };
  CancellationParts parts;
  const double lo_end = 1.0 - eps;
  parts.lower = quad::endpoint_singular(integrand, 0.0, lo_end, 1e-12);
  parts.upper = quad::to_infinity(integrand, 1.0 / lo_end, 1e-12);
  return parts;
}

double cancellation_check(double eps, const Params& params) {
  return cancellation_parts(eps, params).sum();
}

}  // namespace frachs
