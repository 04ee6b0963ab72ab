#pragma once

#include "frachs/field.hpp"
#include "frachs/params.hpp"
#include "frachs/point.hpp"

namespace frachs {

/// eta(w) = 2 / (|w'|^2 + (w_n + 1)^2). Throws DomainError at the pole
/// (0, ..., 0, -1).
double eta(const Point& w);

/// The conformal involution T w = eta(w) (w', (1 - |w|^2)/2) exchanging the
/// unit ball and the upper halfspace. Its Jacobian is eta(w)^n and
/// eta(T x) = 1 / eta(x).
Point map_T(const Point& w);

/// Rotation (x_1, ..., x_{n-1}, x_n) -> (x_1, ..., x_{n-2}, x_n, -x_{n-1}).
Point rotate_R(const Point& x);

/// The halfspace ball B^R = T(B(0, R)).
struct CapRegion {
  double R;
  double center_height;  ///< (1 + R^2) / (1 - R^2)
  double radius;         ///< 2 R / (1 - R^2)

  double lowest_height() const noexcept { return center_height - radius; }   ///< (1-R)/(1+R)
  double highest_height() const noexcept { return center_height + radius; }  ///< (1+R)/(1-R)
  bool contains(const Point& x) const noexcept;
  Box bounding_box(int n) const;
};

/// Throws ParameterError unless 0 < R < 1.
CapRegion cap_region(double R);

/// Smallest R with box inside B^R, i.e. max |T x| over the box. The box must
/// lie in the open halfspace.
double enclosing_cap_parameter(const Box& halfspace_box);

/// f~(w) = eta(w)^{n/2^*} f(T w). Halfspace/cap fields map to ball fields and
/// ball fields to cap fields, with the support box transported accordingly.
/// Applying it twice returns f.
ScalarField conjugate_field(const ScalarField& f, const Params& params);

}  // namespace frachs
