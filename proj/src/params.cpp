#include "frachs/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frachs/error.hpp"
#include "frachs/point.hpp"

namespace frachs {

Params::Params(int n, double alpha, double p) : n_(n), alpha_(alpha), p_(p) {
  if (n < 2 || n > kMaxDim)
    throw ParameterError("dimension n must lie in [2, " + std::to_string(kMaxDim) + "]");
  if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("alpha must lie in (0, 2)");
  if (alpha == 1.0) throw ParameterError("alpha = 1 is excluded");
  if (!(p >= 2.0) || !std::isfinite(p)) throw ParameterError("p must be finite and >= 2");
}

void Params::require_pipeline() const {
  if (!(alpha_ > 1.0 && alpha_ < std::min<double>(n_, p_)))
    throw ParameterError("bound pipeline requires 1 < alpha < min(n, p)");
}

void Params::require_quadratic() const {
  if (p_ != 2.0) throw ParameterError("operation is defined for p = 2 only");
}

std::string Params::describe() const {
  std::ostringstream os;
  os << "n=" << n_ << " alpha=" << alpha_ << " p=" << p_;
  return os.str();
}

}  // namespace frachs
