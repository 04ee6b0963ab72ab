#include "frachs/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "frachs/error.hpp"

namespace frachs {

double eta(const Point& w) {
  const double d = w.tangential_norm2() + (w.last() + 1.0) * (w.last() + 1.0);
  if (d == 0.0) throw DomainError("eta: evaluation at the pole (0, ..., 0, -1)");
  return 2.0 / d;
}

Point map_T(const Point& w) {
  const double e = eta(w);
  Point out = w;
  out.last() = 0.5 * (1.0 - w.norm2());
  out *= e;
  return out;
}

Point rotate_R(const Point& x) {
  const int n = x.dim();
  Point out = x;
  out[n - 2] = x[n - 1];
  out[n - 1] = -x[n - 2];
  return out;
}

bool CapRegion::contains(const Point& x) const noexcept {
  const double dz = x.last() - center_height;
  return x.tangential_norm2() + dz * dz <= radius * radius;
}

Box CapRegion::bounding_box(int n) const {
  Box b = Box::cube(n, -radius, radius);
  b.lo.last() = lowest_height();
  b.hi.last() = highest_height();
  return b;
}

CapRegion cap_region(double R) {
  if (!(R > 0.0 && R < 1.0)) throw ParameterError("cap_region: R must lie in (0, 1)");
  const double r2 = R * R;
  return {R, (1.0 + r2) / (1.0 - r2), 2.0 * R / (1.0 - r2)};
}

double enclosing_cap_parameter(const Box& box) {
  if (!(box.lo.last() > 0.0)) throw ParameterError("box must lie in the open halfspace");
  // |Tx|^2 = 1 - 4 x_n / (|x'|^2 + (x_n + 1)^2) is maximised at a corner:
  // increasing in |x'|^2, and unimodal in x_n for fixed |x'|.
  double best = 0.0;
  for (const Point& c : box.corners()) best = std::max(best, map_T(c).norm());
  return best;
}

namespace {

// Radius of a ball centred at the origin containing T(box), for boxes that
// avoid the pole. Interval bound on |x'|^2 and (x_n -+ 1)^2.
double image_radius_bound(const Box& box) {
  double tmin = 0.0, tmax = 0.0;
  for (int i = 0; i + 1 < box.dim(); ++i) {
    const double lo = box.lo[i], hi = box.hi[i];
    const double m = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(lo * lo, hi * hi);
    tmin += m;
    tmax += std::max(lo * lo, hi * hi);
  }
  auto sq_range = [](double lo, double hi, double shift) {
    const double a = lo + shift, b = hi + shift;
    const double mn = (a <= 0.0 && b >= 0.0) ? 0.0 : std::min(a * a, b * b);
    return std::pair{mn, std::max(a * a, b * b)};
  };
  const auto [num_min, num_max] = sq_range(box.lo.last(), box.hi.last(), -1.0);
  const auto [den_min, den_max] = sq_range(box.lo.last(), box.hi.last(), 1.0);
  (void)num_min;
  (void)den_max;
  const double den = tmin + den_min;
  if (den <= 0.0) throw DomainError("conjugate_field: support box contains the pole");
  return std::sqrt((tmax + num_max) / den);
}

}  // namespace

ScalarField conjugate_field(const ScalarField& f, const Params& params) {
  const int n = f.dim();
  if (n != params.n()) throw ParameterError("conjugate_field: dimension mismatch");
  const double a = params.conformal_exponent();
  auto eval = [f, a](const Point& w) {
    const double v = f(map_T(w));
    if (v == 0.0) return 0.0;
    return std::pow(eta(w), a) * v;
  };

  Domain dom = Domain::full_space();
  std::optional<Box> box;
  const Domain& s = f.support();
  if (s.kind == DomainKind::Cap) {
    dom = Domain::ball(s.radius);
    box = dom.bounding_box(n);
  } else if (s.kind == DomainKind::HalfSpace) {
    if (f.box()) {
      const double rho = std::min(enclosing_cap_parameter(*f.box()) * (1.0 + 1e-12), 1.0);
      dom = Domain::ball(rho);
      box = dom.bounding_box(n);
    } else {
      dom = Domain::ball(1.0);
      box = dom.bounding_box(n);
    }
  } else if (s.kind == DomainKind::Ball && s.radius < 1.0) {
    dom = Domain::cap(s.radius);
    box = dom.bounding_box(n);
  } else if (s.kind == DomainKind::Ball) {
    dom = Domain::half_space();
  } else if (f.box()) {
    const double rho = image_radius_bound(*f.box());
    box = Box::cube(n, -rho, rho);
  }
  return {n, std::move(eval), dom, box, f.label().empty() ? "" : f.label() + "~"};
}

}  // namespace frachs
