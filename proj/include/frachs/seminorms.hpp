#pragma once

#include <functional>
#include <string>
#include <vector>

#include "frachs/field.hpp"
#include "frachs/params.hpp"
#include "frachs/quadrature.hpp"

namespace frachs {

/// Generic symmetric double integral
///
///   integral over Omega x Omega of G(x, y) |x - y|^{-n-alpha} dx dy
///
/// where G is symmetric, of order |x - y|^p on the diagonal, and vanishes
/// unless x or y lies in the sampling box. The integrand callback receives
/// pairs with both points in the domain (after the boundary cutoff) and
/// writes one value per channel; all channels share the same nodes.
struct PairProblem {
  int n = 2;
  double alpha = 1.5;
  /// Diagonal order of G; sets the radial importance density r^{p-1-alpha}.
  double p = 2.0;
  Box box;
  Domain domain = Domain::half_space();
  int channels = 1;
  std::function<void(const Point& x, const Point& y, double* out)> integrand;
};

/// Cutoff diagnostics of one channel.
struct CutoffDiagnostics {
  double cutoff = 0.0;
  Estimate with_cutoff;   ///< pairs with |x - y| >= eps only
  Estimate richardson;    ///< extrapolated from eps and 2 eps
  Estimate refinement_growth;  ///< mass in [eps/16, eps/4) minus mass in [eps/4, eps)
};

struct PairResult {
  std::vector<Estimate> values;
  std::vector<CutoffDiagnostics> diagnostics;
  std::vector<BatchSeries> series;
};

PairResult pair_integral(const PairProblem& problem, const QuadratureConfig& cfg,
                         std::uint64_t stream = 0);

/// I^Omega_{alpha,p}(f) = integral over Omega x Omega of |f(x) - f(y)|^p / |x - y|^{n+alpha}.
Estimate gagliardo(const ScalarField& f, const Domain& domain, const Params& params,
                   const QuadratureConfig& cfg);

/// J_{alpha,p}(f) over the halfspace: the kernel applied to
/// g = x_n^{(1-alpha)/p} f with reference weights x_n^{(alpha-1)/2} y_n^{(alpha-1)/2}.
Estimate weighted_gagliardo(const ScalarField& f, const Params& params, const QuadratureConfig& cfg);

/// I, J and I - J over the halfspace on shared nodes (p = 2).
struct HardyDecomposition {
  Estimate I;
  Estimate J;
  Estimate I_minus_J;
};
HardyDecomposition hardy_decomposition(const ScalarField& f, const Params& params,
                                       const QuadratureConfig& cfg);

/// integral of |f|^p x_n^{-alpha} over the halfspace.
Estimate hardy_term(const ScalarField& f, const Params& params, const QuadratureConfig& cfg);

/// (integral of |f|^q x_n^{-n + n q / p^*})^{p/q}.
Estimate weighted_q_norm(const ScalarField& f, const Params& params, const QuadratureConfig& cfg);

/// Exponent -n + n q / p^* of the weight in weighted_q_norm.
double weighted_q_norm_exponent(const Params& params);

/// (integral of |f|^r)^{1/r}, r >= 1.
Estimate lp_norm(const ScalarField& f, double r, const QuadratureConfig& cfg);

/// Integral of an arbitrary function over a box.
Estimate integrate(const PointFunction& g, const Box& box, const QuadratureConfig& cfg,
                   std::uint64_t stream = 0);

/// K(t) = integral over [-1, 1] of (1 - s^2)^{(n-3)/2} (t^2 + 1 - 2 s t)^{-(n+alpha)/2} ds.
/// Throws DomainError at t = 1 and ParameterError for t <= 0.
double radial_angular_kernel(double t, const Params& params);

struct CancellationParts {
  double lower = 0.0;  ///< over (0, 1 - eps)
  double upper = 0.0;  ///< over (1/(1 - eps), infinity)
  double sum() const noexcept { return lower + upper; }
};

/// Both pieces of the integral of (t^{alpha-1} - t^{n-1}) K(t) off [1-eps, 1/(1-eps)].
CancellationParts cancellation_parts(double eps, const Params& params);
/// Their sum, which vanishes for every eps in (0, 1).
double cancellation_check(double eps, const Params& params);

}  // namespace frachs
