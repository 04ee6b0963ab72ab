#pragma once

#include <string>
#include <utility>
#include <vector>

#include "frachs/constants.hpp"
#include "frachs/field.hpp"
#include "frachs/params.hpp"
#include "frachs/quadrature.hpp"
#include "frachs/symmetrization.hpp"

namespace frachs {

struct Truncation {
  RadialProfile h0;  ///< min(h, h(R)), the level rounded up by at most ulp(max h)
  RadialProfile h1;  ///< h - h0, supported in [0, R]
};
/// Splits h at R; R is inserted as a knot so both pieces stay piecewise
/// linear and h0 + h1 == h at every knot in floating point.
Truncation truncate_profile(const RadialProfile& h, double R);

/// A_1 = pair integral over B^R x B^R of |y_n^{(1-n)/2} - x_n^{(1-n)/2}|^2
/// with the reference weights (x_n y_n)^{(alpha-1)/2}.
Estimate a1_constant(double R, const Params& params, const QuadratureConfig& cfg);

/// integral over B^R of x_n^{-n} dx by Monte Carlo.
Estimate cap_weight_integral(double R, const Params& params, const QuadratureConfig& cfg);
/// The same integral as 2^n |S^{n-1}| int_0^R r^{n-1} (1 - r^2)^{-n} dr.
double cap_weight_integral_radial(double R, const Params& params);

/// A_2 = d (integral over B^R of x_n^{-n})^{2/q}, Monte Carlo route.
Estimate a2_coefficient(double R, const Params& params, double d_est, const QuadratureConfig& cfg);
/// A_2 through the radial integral.
double a2_coefficient_radial(double R, const Params& params, double d_est);

/// c(R) = c_est ((1-R)/(1+R))^{2 alpha - 2} / (2 (1 + A_1/A_2)).
double f1_bound_constant(double R, const Params& params, double c_est, double A1, double A2);

struct F0Bound {
  double value = 0.0;      ///< d(R)
  double bracket = 0.0;
  double prefactor = 0.0;
  double tail_exponent = 0.0;  ///< (n-1) 2^*/q - n, must exceed -1
};
/// d(R) with J >= d(R) ||f_0||_{2^*}^2. Throws ContractError if 2^* <= q
/// or the tail integrand is not integrable.
F0Bound f0_bound_detail(double R, const Params& params, double d_est);
double f0_bound_constant(double R, const Params& params, double d_est);

struct GridPoint {
  double R = 0.0;
  bool ok = false;
  std::string failure;
  Estimate A1_estimate;
  double A1 = 0.0;        ///< degraded (+3 sigma)
  double A2 = 0.0;        ///< degraded
  double c_term = 0.0;
  double d_term = 0.0;
  double lambda_closed = 0.0;
  double lambda_grid = 0.0;
  double a_closed = 0.0;  ///< a(R, lambda_closed)
  double a_grid = 0.0;    ///< best over the lambda grid
};

struct StageEstimate {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  /// Value entering the composition after the 3 sigma degradation.
  double used = 0.0;
};

struct BoundReport {
  double R = 0.0;
  double lambda = 0.0;
  double A1 = 0.0;
  double A2_coeff = 0.0;
  double c_term = 0.0;
  double d_term = 0.0;
  double a_lower = 0.0;
  std::vector<GridPoint> grid;
  std::vector<StageEstimate> stages;
  /// Grid cell size of the lambda grid, for comparing against the closed form.
  double lambda_cell = 0.0;
  double lambda_grid_at_best = 0.0;
};

/// a(R, lambda) = min(lambda c, (1 - lambda) d) / 2
double combined_bound(double c, double d, double lambda);
/// lambda* = d / (c + d)
double optimal_lambda(double c, double d);

/// Fills lambda and a for each grid point from its c and d, and picks the
/// maximizer. Throws DivergenceError if no grid point succeeded.
void combine_and_optimize(BoundReport& report, const std::vector<double>& lambda_grid);

struct RayleighQuotient {
  Estimate phi;        ///< J / ||f||^2
  Estimate phi_hardy;  ///< (I - D hardy) / ||f||^2
  double discrepancy = 0.0;
  double combined_error = 0.0;
};
/// Both routes of the Rayleigh quotient (p = 2). The second route uses the
/// supplied Hardy coefficient.
RayleighQuotient rayleigh_quotient(const ScalarField& f, const Params& params, const QuadratureConfig& cfg,
                                   double hardy_coefficient, double hardy_coefficient_error = 0.0);

struct PipelineOptions {
  std::vector<double> R_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  /// Lambda grid for the comparison with the closed form; empty = 999 points.
  std::vector<double> lambda_grid;
  /// Fields for the empirical constants.
  std::vector<ScalarField> corpus;
  /// Budget for the A_1 pair integrals; 0 = cfg.samples.
  std::uint64_t a1_samples = 0;
};

/// Validates a grid inside (0, 1); throws ParameterError otherwise.
void validate_unit_grid(const std::vector<double>& grid, const char* what);

/// Empirical constants, then A_1, A_2, c(R), d(R) on the R grid, then the
/// (lambda, R) combination, every stage degraded by 3 sigma.
BoundReport run_bound_pipeline(const Params& params, const QuadratureConfig& cfg, const PipelineOptions& options);

}  // namespace frachs
