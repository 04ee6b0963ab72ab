#pragma once

#include <string>
#include <vector>

#include "frachs/params.hpp"
#include "frachs/quadrature.hpp"

namespace frachs {

/// One verified invariant: `measured` compared against `tolerance` with the
/// relation in `comparison` ("<=" or ">=").
struct Check {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string comparison = "<=";
  bool passed = false;
};

Check make_check(std::string suite, std::string name, double measured, std::string comparison, double tolerance);

/// exact, quadrature, stochastic.
const std::vector<std::string>& suite_names();

/// Runs one suite. The exact and quadrature suites sweep their own parameter
/// grids; `params` and `cfg` pick the working point of the stochastic one.
std::vector<Check> run_suite(const std::string& name, const Params& params, const QuadratureConfig& cfg);

/// "all" runs every suite in order; a comma separated list runs those.
/// Throws ParameterError on an unknown suite name.
std::vector<Check> run_suites(const std::string& selection, const Params& params, const QuadratureConfig& cfg);

}  // namespace frachs
