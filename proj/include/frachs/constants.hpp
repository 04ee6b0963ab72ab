#pragma once

#include <string>
#include <vector>

#include "frachs/field.hpp"
#include "frachs/params.hpp"
#include "frachs/quadrature.hpp"

namespace frachs {

/// c_p = min over tau in (0, 1/2) of (1 - tau)^p - tau^p + p tau^{p-1}.
/// Throws ParameterError for p < 2.
double cp_min(double p);
/// The objective minimized by cp_min.
double cp_objective(double tau, double p);

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

struct Exponents {
  double p_star;
  double two_star;
  double q;
  /// |1 - p/q - (alpha + 1)/(2n + alpha - 1)|
  double identity_gap_q;
  /// |(alpha - 1)/2 - q (alpha - 1)/p - (-n + n q / p^*)|
  double identity_gap_weight;
};
/// Derived exponents; throws ContractError if either identity gap exceeds 1e-13.
Exponents exponents(const Params& params);

/// (1/alpha) |S^{n-1}| d^{-alpha}, the integral of |x - y|^{-n-alpha} over |x - y| > d.
double shell_integral(double d, const Params& params);
/// Same integral by 1-D radial quadrature.
double shell_integral_radial(double d, const Params& params);

/// Integral over (1, infinity) of t^{-n-alpha-1} (t^{n+(alpha-1)/2} - 1) dt in closed form.
double tail_t_integral(const Params& params);
/// The same integral by adaptive quadrature.
double tail_t_integral_numeric(const Params& params);

struct Sandwich {
  double ratio;
  double lower;  ///< 1/(2(n-1))
  double upper;  ///< 1/(n-1)
  /// At n = 2 the ratio equals the lower bound identically, so the test
  /// allows rounding slack of 1e-12 relative.
  bool holds() const noexcept {
    return lower * (1.0 - 1e-12) <= ratio && ratio <= upper * (1.0 + 1e-12);
  }
};
/// ((1-S^2)^{n-1}/S^n) * integral over (0, S) of r^{n-1} (1-r^2)^{-n} dr, with its bounds.
Sandwich sandwich_check(double S, int n);

/// Integral over (0, b) of r^{n-1} (1 - r^2)^{-n} dr, b < 1.
double ball_weight_integral(double b, int n);

struct TrialRatio {
  std::string label;
  Estimate ratio;
};

/// Empirical constant over a set of trial fields.
struct ConstantEstimate {
  double value = 0.0;
  /// max over trials of |ratio - value| / |value|
  double spread = 0.0;
  int trials = 0;
  /// Standard error of `value` (of the mean or of the minimizing trial).
  double std_error = 0.0;
  std::vector<TrialRatio> per_trial;
};

/// D = (I - J) / hardy_term averaged over the corpus (p = 2). Throws
/// DivergenceError naming the offending field.
ConstantEstimate estimate_hardy_constant(const std::vector<ScalarField>& corpus, const Params& params,
                                         const QuadratureConfig& cfg);

/// The Hardy coefficient by 1-D quadrature of its ground-state form
/// 2 pi^{(n-1)/2} Gamma((1+alpha)/2)/Gamma((n+alpha)/2) PV int_0^inf (1 - t^{(alpha-1)/2}) |1-t|^{-1-alpha} dt,
/// used as the second route for comparison with estimate_hardy_constant.
double hardy_constant_ground_state(const Params& params);

/// min over the corpus of I^{R^n}(f) / ||f||_{p^*}^p, an empirical stand-in
/// for the full-space Sobolev constant.
ConstantEstimate estimate_sobolev_constant(const std::vector<ScalarField>& corpus, const Params& params,
                                           const QuadratureConfig& cfg);

/// S / (1 + 2 |S^{n-1}| / (alpha D)). Throws ParameterError for nonpositive inputs.
double convex_sobolev_chain(const Params& params, double S_est, double D_est);

}  // namespace frachs
