#pragma once

#include <string>

namespace frachs {

/// Dimension n, order alpha and exponent p of the inequalities, with the
/// derived critical exponents.
///
/// Construction validates n >= 2, 0 < alpha < 2, alpha != 1, p >= 2. The
/// bound pipelines additionally need 1 < alpha < min(n, p); call
/// require_pipeline() before using them.
class Params {
 public:
  Params(int n, double alpha, double p = 2.0);

  int n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  double p() const noexcept { return p_; }

  /// n / 2^* = (n - alpha) / 2, the exponent of eta in the conjugated field.
  /// Every module reads the exponent from here.
  double conformal_exponent() const noexcept { return 0.5 * (n_ - alpha_); }

  /// p^* = n p / (n - alpha)
  double p_star() const noexcept { return n_ * p_ / (n_ - alpha_); }
  /// 2^* = 2 n / (n - alpha)
  double two_star() const noexcept { return 2.0 * n_ / (n_ - alpha_); }
  /// q = p (n + (alpha - 1)/2) / (n - 1)
  double q() const noexcept { return p_ * (n_ + 0.5 * (alpha_ - 1.0)) / (n_ - 1); }

  /// Exponent (alpha - 1)/2 of the reference weight x_n^{(alpha-1)/2}.
  double reference_weight_exponent() const noexcept { return 0.5 * (alpha_ - 1.0); }

  /// Throws ParameterError unless 1 < alpha < min(n, p).
  void require_pipeline() const;
  /// Throws ParameterError unless p == 2.
  void require_quadratic() const;

  std::string describe() const;

 private:
  int n_;
  double alpha_;
  double p_;
};

}  // namespace frachs
