#include <doctest.h>

#include <cmath>

#include "frachs/corpus.hpp"
#include "frachs/error.hpp"
#include "frachs/hsm_bound.hpp"

using namespace frachs;

TEST_CASE("truncation of h = 1 - r at R = 0.5") {
  const RadialProfile h = RadialProfile::sample([](double r) { return 1.0 - r; }, 11);
  const Truncation t = truncate_profile(h, 0.5);
  for (std::size_t i = 0; i < t.h0.knots.size(); ++i) {
    const double r = t.h0.knots[i];
    CHECK(t.h0.values[i] == doctest::Approx(std::min(1.0 - r, 0.5)).epsilon(1e-15));
    CHECK(t.h0.values[i] + t.h1.values[i] == h(r));
    if (r >= 0.5) CHECK(t.h1.values[i] == 0.0);
  }
  CHECK(t.h1(0.0) == doctest::Approx(0.5));
  t.h0.validate();
  t.h1.validate();
  // R off the knots is inserted.
  const Truncation u = truncate_profile(h, 0.33);
  CHECK(u.h0.knots.size() == 12);
  CHECK(u.h1(0.33) == 0.0);
  CHECK_THROWS_AS(truncate_profile(h, 1.0), ParameterError);
  CHECK_THROWS_AS(truncate_profile(h, 0.0), ParameterError);
}

TEST_CASE("truncation is exact on the profile corpus") {
  for (const auto& h : profile_corpus())
    for (double R : {0.1, 0.25, 0.3, 0.45, 0.5, 0.7}) {
      const Truncation t = truncate_profile(h, R);
      for (std::size_t i = 0; i < t.h0.knots.size(); ++i) {
        const double r = t.h0.knots[i];
        CHECK(t.h0.values[i] + t.h1.values[i] == h(r));
        CHECK(t.h1.values[i] >= 0.0);
        if (r >= R) CHECK(t.h1.values[i] == 0.0);
      }
    }
}

TEST_CASE("A1 and the cap weight") {
  const Params P(2, 1.5);
  QuadratureConfig c;
  c.samples = 100000;
  double last = 0.0;
  for (double R : {0.1, 0.3, 0.5}) {
    const Estimate a = a1_constant(R, P, c);
    CHECK(a.value > last);
    last = a.value;
  }
  const Estimate a = a1_constant(0.3, P, c), b = a1_constant(0.3, P, c.with_seed(99));
  CHECK(std::abs(a.value - b.value) < 3.0 * combined_error(a, b));
  c.samples = 400000;
  for (int n : {2, 3})
    for (double R : {0.2, 0.5}) {
      const Params Q(n, 1.5);
      const Estimate w = cap_weight_integral(R, Q, c);
      const double want = cap_weight_integral_radial(R, Q);
      CHECK(std::abs(w.value / want - 1.0) < 2e-2);
      CHECK(std::abs(a2_coefficient(R, Q, 2.0, c).value / a2_coefficient_radial(R, Q, 2.0) - 1.0) < 2e-2);
    }
  // n = 2 closed form 16 pi * 0.5 R^2 / (1 - R^2) over the radial integral.
  CHECK(cap_weight_integral_radial(0.5, P) == doctest::Approx(4.0 * 2.0 * M_PI * 0.5 * 0.25 / 0.75).epsilon(1e-10));
}

TEST_CASE("f1 and f0 constants") {
  const Params P(2, 1.5);
  // ((1 - 0.5)/(1 + 0.5))^{2 alpha - 2} = 1/3.
  CHECK(f1_bound_constant(0.5, P, 2.0, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(f1_bound_constant(0.5, P, 2.0, 1.0, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(f1_bound_constant(0.5, P, 0.0, 1.0, 1.0), ParameterError);
  for (int n : {2, 3})
    for (double a : {1.25, 1.5, 1.75}) {
      const Params Q(n, a);
      double last = 0.0;
      for (double R = 0.1; R < 0.95; R += 0.1) {
        const F0Bound d = f0_bound_detail(R, Q, 0.7);
        CHECK(d.value > last);
        CHECK(d.tail_exponent > -1.0);
        last = d.value;
      }
    }
  CHECK_THROWS_AS(f0_bound_constant(0.5, P, -1.0), ParameterError);
}

TEST_CASE("combination") {
  CHECK(optimal_lambda(1.0, 1.0) == 0.5);
  CHECK(combined_bound(1.0, 1.0, 0.5) == 0.25);
  CHECK(optimal_lambda(3.0, 1.0) == 0.25);
  CHECK(combined_bound(3.0, 1.0, 0.25) == 0.375);
  // The closed form beats every grid point.
  for (int i = 1; i < 100; ++i) CHECK(combined_bound(3.0, 1.0, i / 100.0) <= 0.375);
  BoundReport r;
  GridPoint g;
  g.R = 0.3;
  g.ok = true;
  g.c_term = 3.0;
  g.d_term = 1.0;
  r.grid = {g};
  std::vector<double> lgrid;
  for (int i = 1; i <= 999; ++i) lgrid.push_back(i / 1000.0);
  combine_and_optimize(r, lgrid);
  CHECK(r.a_lower == 0.375);
  CHECK(std::abs(r.lambda_grid_at_best - 0.25) <= r.lambda_cell);
  r.grid[0].ok = false;
  CHECK_THROWS_AS(combine_and_optimize(r, lgrid), DivergenceError);
  CHECK_THROWS_AS(validate_unit_grid({0.5, 1.0}, "R grid"), ParameterError);
  CHECK_THROWS_AS(validate_unit_grid({}, "R grid"), ParameterError);
}

TEST_CASE("Rayleigh quotient is scale invariant") {
  const Params P(2, 1.5);
  QuadratureConfig c;
  c.samples = 100000;
  const ScalarField f = standard_corpus(2)[0];
  const RayleighQuotient a = rayleigh_quotient(f, P, c, hardy_constant_ground_state(P));
  const RayleighQuotient b = rayleigh_quotient(f.scaled(2.0), P, c, hardy_constant_ground_state(P));
  CHECK(b.phi.value == doctest::Approx(a.phi.value).epsilon(1e-12));
  CHECK(a.discrepancy < 3.0 * a.combined_error);
  CHECK_THROWS_AS(rayleigh_quotient(f, Params(2, 1.5, 3.0), c, 0.7), ParameterError);
}

TEST_CASE("bound pipeline") {
  const Params P(2, 1.5);
  QuadratureConfig c;
  c.samples = 100000;
  PipelineOptions o;
  o.R_grid = {0.1, 0.3};
  o.corpus = standard_corpus(2);
  const BoundReport r = run_bound_pipeline(P, c, o);
  CHECK(r.a_lower > 0.0);
  CHECK(r.grid.size() == 2);
  CHECK(r.a_lower <= r.c_term);
  CHECK(!r.stages.empty());
  PipelineOptions bad = o;
  bad.R_grid = {0.5, 1.0};
  CHECK_THROWS_AS(run_bound_pipeline(P, c, bad), ParameterError);
  bad = o;
  bad.corpus.clear();
  CHECK_THROWS_AS(run_bound_pipeline(P, c, bad), ParameterError);
  CHECK_THROWS_AS(run_bound_pipeline(Params(2, 0.5), c, o), ParameterError);
}
