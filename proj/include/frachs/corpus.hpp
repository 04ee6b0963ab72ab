#pragma once

#include <vector>

#include "frachs/field.hpp"
#include "frachs/params.hpp"
#include "frachs/symmetrization.hpp"

namespace frachs {

/// (1 - |x - c|^2 / rho^2)_+^k, supported in the halfspace.
ScalarField bump(const Point& center, double rho, int k, std::string label = "bump");

/// (1 - sum ((x_i - c_i) / rho_i)^2)_+^k.
ScalarField anisotropic_bump(const Point& center, const Point& radii, int k, std::string label = "aniso");

/// a f + b g on the hull of both boxes.
ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g,
                               std::string label = "sum");

/// Four smooth halfspace fields of different shape and position.
std::vector<ScalarField> standard_corpus(int n);

/// Radial profiles supported in [0, 0.5].
std::vector<RadialProfile> profile_corpus(int knots = 401);

/// Fields x_n^{-n/2^*} h(|T x|) for each profile of profile_corpus.
std::vector<ScalarField> profile_fields(const Params& params);

/// A bump away from the symmetry axis, the starting point of the symmetrization runs.
ScalarField off_center_bump(int n);

}  // namespace frachs
