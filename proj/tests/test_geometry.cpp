#include <doctest.h>

#include <cmath>

#include "frachs/corpus.hpp"
#include "frachs/error.hpp"
#include "frachs/geometry.hpp"
#include "frachs/params.hpp"
#include "frachs/quadrature.hpp"

using namespace frachs;

namespace {

Point ball_point(Rng& rng, int n) {
  Point u = rng.unit_vector(n);
  u *= 0.99 * std::pow(rng.uniform(), 1.0 / n);
  return u;
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_THROWS_AS(Params(2, 1.0), ParameterError);
  CHECK_THROWS_AS(Params(1, 1.5), ParameterError);
  CHECK_THROWS_AS(Params(2, 0.0), ParameterError);
  CHECK_THROWS_AS(Params(2, 1.5, 1.5), ParameterError);
  CHECK_THROWS_AS(Params(2, 0.5).require_pipeline(), ParameterError);
  const Params P(2, 1.5);
  CHECK(P.p_star() == doctest::Approx(8.0));
  CHECK(P.two_star() == doctest::Approx(8.0));
  CHECK(P.q() == doctest::Approx(4.5));
  CHECK(P.conformal_exponent() == doctest::Approx(0.25));
}

TEST_CASE("eta special values") {
  CHECK(eta(Point{0.0, 0.0}) == 2.0);
  CHECK(eta(Point{0.0, 1.0}) == 0.5);
  CHECK_THROWS_AS(eta(Point{0.0, -1.0}), DomainError);
}

TEST_CASE("T maps the origin to e_n and is an involution") {
  const Point e = map_T(Point{0.0, 0.0, 0.0});
  CHECK(e[0] == 0.0);
  CHECK(e[1] == 0.0);
  CHECK(e[2] == 1.0);
  Rng rng(7);
  for (int n : {2, 3, 5}) {
    for (int i = 0; i < 1000; ++i) {
      const Point w = ball_point(rng, n);
      const Point x = map_T(w);
      CHECK(x.last() > 0.0);
      CHECK(distance(map_T(x), w) < 1e-12);
      CHECK(std::abs(eta(x) * eta(w) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("|T x|^2 closed form on random halfspace points") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Point x{4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0, 0.01 + 3.0 * rng.uniform()};
    const double t = x.tangential_norm2();
    const double want = (t + (x.last() - 1.0) * (x.last() - 1.0)) / (t + (x.last() + 1.0) * (x.last() + 1.0));
    CHECK(std::abs(map_T(x).norm2() - want) < 1e-12);
  }
}

TEST_CASE("rotation R") {
  const Point r = rotate_R(Point{1.0, 2.0, 3.0});
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 3.0);
  CHECK(r[2] == -2.0);
  CHECK(rotate_R(rotate_R(rotate_R(rotate_R(Point{0.3, -0.2})))).norm2() == doctest::Approx(0.13));
}

TEST_CASE("cap region") {
  const CapRegion c = cap_region(0.5);
  CHECK(c.center_height == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(c.radius == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  for (double R : {0.1, 0.5, 0.9}) {
    const CapRegion k = cap_region(R);
    CHECK(std::abs(k.lowest_height() - (1.0 - R) / (1.0 + R)) < 1e-14);
    CHECK(k.contains(Point{0.0, 1.0}));
  }
  CHECK_THROWS_AS(cap_region(1.0), ParameterError);
  CHECK_THROWS_AS(cap_region(0.0), ParameterError);
  // T(B(0, R)) = B^R: ball points of radius < R land inside, > R outside.
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    Point u = rng.unit_vector(2);
    Point in = u, out = u;
    in *= 0.49 * rng.uniform();
    out *= 0.51 + 0.4 * rng.uniform();
    CHECK(c.contains(map_T(in)));
    CHECK_FALSE(c.contains(map_T(out)));
  }
}

TEST_CASE("enclosing cap parameter") {
  const Box b{Point{-0.2, 0.8}, Point{0.2, 1.2}};
  const double R = enclosing_cap_parameter(b);
  for (const Point& c : b.corners()) CHECK(map_T(c).norm() <= R + 1e-12);
  CHECK(R < 1.0);
}

TEST_CASE("conjugate field") {
  const Params P(2, 1.5);
  const ScalarField f = standard_corpus(2)[0];
  const ScalarField g = conjugate_field(f, P);
  const ScalarField back = conjugate_field(g, P);
  Rng rng(5);
  const Box box = f.sampling_box();
  for (int i = 0; i < 1000; ++i) {
    const Point x = rng.in_box(box);
    CHECK(std::abs(back(x) - f(x)) < 1e-10);
  }
  // f~(w) = eta(w)^{n/2*} f(T w) by definition.
  for (int i = 0; i < 200; ++i) {
    const Point w = ball_point(rng, 2);
    CHECK(std::abs(g(w) - std::pow(eta(w), 0.25) * f(map_T(w))) < 1e-12);
  }
  const ScalarField zero = conjugate_field(ScalarField::zero(2, Domain::half_space(), box), P);
  for (int i = 0; i < 100; ++i) CHECK(zero(ball_point(rng, 2)) == 0.0);
}

TEST_CASE("ball support of radius 1/2 maps into the cap") {
  const Params P(2, 1.5);
  const ScalarField ball(
      2, [](const Point& w) { return std::max(0.0, 0.25 - w.norm2()); }, Domain::ball(0.5),
      Box::cube(2, -0.5, 0.5), "ball_bump");
  const ScalarField f = conjugate_field(ball, P);
  const CapRegion cap = cap_region(0.5);
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const Point x{8.0 * rng.uniform() - 4.0, 0.01 + 5.0 * rng.uniform()};
    if (!cap.contains(x)) CHECK(f(x) == 0.0);
  }
}
