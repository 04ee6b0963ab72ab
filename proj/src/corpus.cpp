#include "frachs/corpus.hpp"

#include <cmath>

#include "frachs/error.hpp"

namespace frachs {

namespace {

Box box_around(const Point& c, const Point& r) {
  Box b{c, c};
  for (int i = 0; i < c.dim(); ++i) {
    b.lo[i] -= r[i];
    b.hi[i] += r[i];
  }
  return b;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

ScalarField bump(const Point& center, double rho, int k, std::string label) {
  Point r(center.dim());
  for (int i = 0; i < center.dim(); ++i) r[i] = rho;
  return anisotropic_bump(center, r, k, std::move(label));
}

ScalarField anisotropic_bump(const Point& center, const Point& radii, int k, std::string label) {
  const int n = center.dim();
  if (radii.dim() != n) throw ParameterError("anisotropic_bump: dimension mismatch");
  if (!(center.last() - radii.last() > 0.0)) throw ParameterError("anisotropic_bump: support must stay in x_n > 0");
  if (k < 1) throw ParameterError("anisotropic_bump: k must be >= 1");
  auto eval = [center, radii, k, n](const Point& x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = (x[i] - center[i]) / radii[i];
      s += d * d;
    }
    return s < 1.0 ? ipow(1.0 - s, k) : 0.0;
  };
  return ScalarField(n, eval, Domain::half_space(), box_around(center, radii), std::move(label));
}

ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g, std::string label) {
  if (f.dim() != g.dim()) throw ParameterError("linear_combination: dimension mismatch");
  auto eval = [a, f, b, g](const Point& x) { return a * f(x) + b * g(x); };
  return ScalarField(f.dim(), eval, Domain::half_space(), f.sampling_box().hull(g.sampling_box()), std::move(label));
}

std::vector<ScalarField> standard_corpus(int n) {
  auto at = [n](double shift, double height) {
    Point c(n);
    c[0] = shift;
    c.last() = height;
    return c;
  };
  std::vector<ScalarField> out;
  out.push_back(bump(at(0.0, 1.0), 0.5, 2, "bump_k2"));
  out.push_back(bump(at(0.3, 0.8), 0.4, 3, "bump_k3_low"));
  Point radii(n);
  for (int i = 0; i < n; ++i) radii[i] = 0.6;
  radii.last() = 0.35;
  out.push_back(anisotropic_bump(at(-0.2, 1.2), radii, 2, "aniso_k2"));
  out.push_back(linear_combination(1.0, bump(at(-0.4, 1.0), 0.3, 2), 0.7, bump(at(0.4, 1.3), 0.35, 2),
                                   "two_bumps"));
  return out;
}

std::vector<RadialProfile> profile_corpus(int knots) {
  constexpr double s = 0.5;
  std::vector<RadialProfile> out;
  out.push_back(RadialProfile::sample([](double r) { return r < s ? ipow(1.0 - (r / s) * (r / s), 2) : 0.0; }, knots));
  out.push_back(RadialProfile::sample([](double r) { return r < s ? (s - r) / s : 0.0; }, knots));
  out.push_back(RadialProfile::sample(
      [](double r) { return r < 0.2 ? 1.0 : r < s ? (s - r) / (s - 0.2) : 0.0; }, knots));
  out.push_back(RadialProfile::sample([](double r) { return r < s ? ipow(1.0 - r / s, 3) : 0.0; }, knots));
  out.push_back(RadialProfile::sample(
      [](double r) { return r < s ? std::cos(0.5 * M_PI * r / s) * std::cos(0.5 * M_PI * r / s) : 0.0; }, knots));
  return out;
}

std::vector<ScalarField> profile_fields(const Params& params) {
  static const char* names[] = {"profile_quartic", "profile_linear", "profile_plateau", "profile_cubic",
                                "profile_cos2"};
  std::vector<ScalarField> out;
  const auto profiles = profile_corpus();
  for (std::size_t i = 0; i < profiles.size(); ++i)
    out.push_back(reconstruct_from_profile(profiles[i], params).with_label(names[i]));
  return out;
}

ScalarField off_center_bump(int n) {
  Point c(n);
  c[0] = 0.45;
  c.last() = 1.1;
  return bump(c, 0.35, 2, "off_center_bump");
}

}  // namespace frachs
