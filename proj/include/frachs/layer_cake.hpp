#pragma once

#include <vector>

#include "frachs/constants.hpp"
#include "frachs/field.hpp"
#include "frachs/params.hpp"
#include "frachs/quadrature.hpp"

namespace frachs {

/// g = x_n^{(1-alpha)/p} |f|, the function whose level sets carry the
/// layer-cake argument.
ScalarField level_field(const ScalarField& f, const Params& params);

/// lambda(a) = integral of 1{g > a} x_n^{(alpha-1)/2} dx.
Estimate level_measure(const ScalarField& g, double a, const Params& params, const QuadratureConfig& cfg);

struct LevelData {
  std::vector<double> levels;
  std::vector<Estimate> lambda_vals;
};
/// lambda at increasing levels, all on shared nodes.
LevelData level_data(const ScalarField& g, std::vector<double> levels, const Params& params,
                     const QuadratureConfig& cfg);

/// ||g||_{q(mu)}^q = integral of g^q x_n^{(alpha-1)/2} dx.
Estimate mu_q_norm_power(const ScalarField& g, const Params& params, const QuadratureConfig& cfg);

struct DConstant {
  Estimate monte_carlo;
  double polar = 0.0;  ///< 1-D reduction
};
/// D = integral over the unit half ball of y_n^{(alpha-1)/2} dy, by Monte
/// Carlo and by polar reduction. Requires alpha > 1.
DConstant d_constant(const Params& params, const QuadratureConfig& cfg);
/// The polar value alone.
double d_constant_polar(const Params& params);

struct PairMeasure {
  Estimate u;
  double bound = 0.0;  ///< D c^{n+(alpha-1)/2} lambda(a)
  Estimate lambda;
};
/// u(a, c) = integral of 1{g(x) > a} 1{|x - y| < c} x_n^{(alpha-1)/2} y_n^{(alpha-1)/2}
/// over pairs in the halfspace, with its lower bound. Supports n <= 4.
PairMeasure pair_measure_lower(const ScalarField& g, double a, double c, const Params& params,
                               const QuadratureConfig& cfg);

struct LayerIdentityReport {
  int samples = 0;
  double max_error_power = 0.0;     ///< t^p = p(p-1) int (t-a)_+ a^{p-2} da
  double max_error_tail = 0.0;      ///< int s t^{-s-1} 1{v<t} dt = v^{-s}
  double max_error_level = 0.0;     ///< v^q = int q a^{q-1} 1{v>a} da
  double max_error() const noexcept;
};
/// Relative errors of the three scalar layer-cake identities at each sample.
LayerIdentityReport layer_identities(const std::vector<double>& samples, double p, double q, double s);

struct SubstitutionCheck {
  double direct = 0.0;   ///< int dc c^{-n-alpha-1} (D c^{n+(alpha-1)/2} - lambda)_+
  double formula = 0.0;  ///< lambda^{-(alpha+1)/(2n+alpha-1)} D^{2(n+alpha)/(2n+alpha-1)} tail_t_integral
  double relative_gap() const noexcept;
};
/// Compares the c-integral with its substituted closed form at one lambda(b).
SubstitutionCheck substitution_check(double lambda_b, double D, const Params& params);

/// Per field J(f) / weighted_q_norm(f); the value is the corpus infimum.
ConstantEstimate theorem22_verify(const std::vector<ScalarField>& corpus, const Params& params,
                                  const QuadratureConfig& cfg);

}  // namespace frachs
