#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "frachs/field.hpp"
#include "frachs/params.hpp"
#include "frachs/quadrature.hpp"

namespace frachs {

/// Cell-centred Cartesian grid over a halfspace box, read as a stack of
/// slabs x_n = const. The tangential box must be symmetric about x' = 0.
class SlabGrid {
 public:
  SlabGrid(const Box& box, std::vector<int> cells);

  /// Samples f at the cell centres.
  static SlabGrid sample(const ScalarField& f, const Box& box, std::vector<int> cells);

  int dim() const noexcept { return box_.dim(); }
  const Box& box() const noexcept { return box_; }
  const std::vector<int>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return values_->size(); }
  std::size_t slab_size() const noexcept { return slab_size_; }
  int slab_count() const noexcept { return cells_.back(); }
  double cell_measure() const noexcept { return cell_measure_; }

  /// Ordered x_n levels of the slabs.
  std::vector<double> heights() const;
  Point center(std::size_t index) const;
  double tangential_radius(std::size_t index) const;

  const std::vector<double>& values() const noexcept { return *values_; }
  std::vector<double>& mutable_values();

  /// Cubic convolution interpolant of the cell values, zero outside the box
  /// and clipped at zero when every cell value is nonnegative.
  ScalarField field(std::string label = "grid") const;

  /// (sum |v|^r * cell measure)^{1/r}
  double norm(double r) const;
  /// Grid L^r distance to a grid of identical shape.
  double distance(const SlabGrid& other, double r) const;

  /// CSV with columns height, radius, value, measure.
  void write_csv(std::ostream& os) const;

 private:
  Box box_;
  std::vector<int> cells_;
  std::vector<double> spacing_;
  std::size_t slab_size_;
  double cell_measure_;
  std::shared_ptr<std::vector<double>> values_;
};

/// Slab-wise symmetric decreasing rearrangement: in each slab the values are
/// permuted so that they decrease with |x'|. Cells at equal radius share the
/// power mean of order `tie_power` of the values they receive, which keeps the
/// result mirror symmetric and the L^tie_power norm unchanged. Throws
/// ContractError on negative values.
SlabGrid rearrange_slabwise(const SlabGrid& grid, double tie_power = 2.0);

/// U f(x) = eta(x)^{n/2^*} f~(R T x).
ScalarField rotate_conformal(const ScalarField& f, const Params& params);

/// Up to `count` radii in (0, rho) spread over the range where the spherical
/// mean of f~ is at least min_relative_mean times its peak.
std::vector<double> test_sphere_radii(const ScalarField& f, const Params& params, double rho,
                                      double min_relative_mean = 0.3, int count = 3);

/// Max over test spheres |w| = r of the coefficient of variation of f~.
double angular_variation(const ScalarField& f, const Params& params, const std::vector<double>& radii);

struct SymmetrizationStep {
  int k = 0;
  Estimate phi;             ///< J(F_k) / ||F_k||_{2*}^2
  double norm = 0.0;        ///< ||F_k||_{2*} on the grid
  double increment = 0.0;   ///< ||F_k - F_{k-1}||_{2*} / ||F_k||_{2*}
  double angular_cv = 0.0;  ///< angular_variation of F_k
};

struct SymmetrizationOptions {
  /// Cells per axis; 0 picks a dimension-dependent default.
  int cells_per_axis = 0;
  /// Test spheres are taken where the spherical mean of F~ is at least this
  /// fraction of its peak.
  double min_relative_mean = 0.3;
  int sphere_count = 3;
};

struct SymmetrizationResult {
  std::vector<SymmetrizationStep> trace;
  SlabGrid final_grid;
  double cap_parameter = 0.0;
  bool converged = false;
};

/// F_{k+1} = V U F_k starting from the grid sample of |f0|, for at most k_max
/// steps or until the relative 2^*-increment drops below tol. Throws
/// DivergenceError with the step index if J diverges.
SymmetrizationResult competing_symmetries_run(const ScalarField& f0, const Params& params, int k_max,
                                              double tol, const QuadratureConfig& cfg,
                                              const SymmetrizationOptions& options = {});

void write_trace_csv(std::ostream& os, const std::vector<SymmetrizationStep>& trace);

/// Piecewise linear h on knots in [0, 1], zero beyond the last knot.
struct RadialProfile {
  std::vector<double> knots;
  std::vector<double> values;

  double operator()(double r) const;
  /// Smallest knot beyond which h vanishes.
  double support_radius() const;
  /// Throws ContractError unless knots are increasing in [0, 1], values are
  /// nonnegative and nonincreasing, and h(1) = 0 when 1 is a knot.
  void validate() const;

  static RadialProfile sample(const std::function<double(double)>& h, int knots);
  void write_csv(std::ostream& os) const;
  static RadialProfile read_csv(std::istream& is);
};

/// Pool-adjacent-violators projection onto nonincreasing sequences
/// (unit weights).
std::vector<double> isotonic_nonincreasing(const std::vector<double>& v);

/// h(r) = F((2r/sqrt(1-r^2)) e_1, 1) on `knots` uniform knots, projected to
/// be nonincreasing and with h(1) = 0. Throws ContractError if the angular
/// variation of F~ exceeds `radial_tolerance`.
RadialProfile extract_profile(const ScalarField& F, const Params& params, int knots = 201,
                              double radial_tolerance = 0.05);

/// x -> x_n^{-n/2^*} h(|T x|), supported in the cap of the profile's support.
ScalarField reconstruct_from_profile(const RadialProfile& h, const Params& params);

}  // namespace frachs
