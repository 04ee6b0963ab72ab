#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "frachs/point.hpp"

namespace frachs {

enum class Method { MonteCarlo, TensorGrid };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct QuadratureConfig {
  Method method = Method::MonteCarlo;
  std::uint64_t samples = 200000;
  std::uint64_t seed = 12345;
  /// Diagonal cutoff |x - y| < eps used for the refinement probe and the
  /// cutoff/Richardson diagnostics of pair integrals.
  double singular_cutoff = 1e-2;
  /// Points with x_n < delta (or within delta of a ball boundary) are
  /// excluded from every weighted integral.
  double boundary_cutoff = 1e-9;
  bool report_error = true;
  /// Monte Carlo nodes from a randomly shifted Halton set instead of a
  /// pseudo-random stream; each batch draws its own shift, so estimates stay
  /// unbiased and the batch standard error stays valid.
  bool low_discrepancy = true;
  /// Independent batches; fixed so results do not depend on thread count.
  int batches = 32;

  void validate() const;
  QuadratureConfig with_samples(std::uint64_t s) const {
    auto c = *this;
    c.samples = s;
    return c;
  }
  QuadratureConfig with_seed(std::uint64_t s) const {
    auto c = *this;
    c.seed = s;
    return c;
  }
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples_used = 0;
  bool divergent = false;

  double relative_error() const noexcept {
    return value != 0.0 ? std_error / std::abs(value) : 0.0;
  }
};

/// sqrt(sa^2 + sb^2)
inline double combined_error(const Estimate& a, const Estimate& b) noexcept {
  return std::hypot(a.std_error, b.std_error);
}

/// Ratio a/b with first-order error propagation for independent inputs.
Estimate ratio(const Estimate& a, const Estimate& b);
/// x^e with first-order error propagation.
Estimate power(const Estimate& x, double e);

/// Per-batch means of one quantity; reduction happens in batch order.
struct BatchSeries {
  std::vector<double> means;
  std::uint64_t samples = 0;

  Estimate estimate() const;
  BatchSeries operator-(const BatchSeries& o) const;
  BatchSeries operator+(const BatchSeries& o) const;
  BatchSeries scaled(double s) const;
};

/// Worker cap: FRACHS_THREADS if set, else hardware concurrency.
unsigned worker_count();

/// Runs body(batch) for batch in [0, batches) on up to worker_count() threads.
void run_batches(int batches, const std::function<void(int)>& body);

/// Deterministic per-batch seed from (seed, stream, batch).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t batch);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  /// Uniform in (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }
  double normal() { return normal_(gen_); }
  /// Uniform on the unit sphere of R^n.
  Point unit_vector(int n);
  /// Uniform in the box.
  Point in_box(const Box& box);

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Points of [0, 1)^dims for one batch.
class UniformSource {
 public:
  UniformSource(const QuadratureConfig& cfg, int dims, std::uint64_t stream, std::uint64_t batch,
                std::uint64_t first_index);
  void next(double* u);
  int dims() const noexcept { return dims_; }

 private:
  bool halton_;
  int dims_;
  std::uint64_t index_;
  std::vector<double> shift_;
  Rng rng_;
};

/// Number of uniforms consumed by direction_from_uniforms.
int direction_dims(int n);
/// Unit vector in R^n from direction_dims(n) uniforms, uniform on the sphere
/// when the inputs are uniform.
Point direction_from_uniforms(int n, const double* u);

using PointFunction = std::function<double(const Point&)>;

/// Estimate of the integral of g over the box, by Monte Carlo or by the
/// midpoint tensor rule (std_error 0). `stream` decorrelates callers
/// sharing a seed.
Estimate integrate_box(const PointFunction& g, const Box& box, const QuadratureConfig& cfg,
                       std::uint64_t stream = 0);

/// Several integrands over the same nodes; returns one BatchSeries per
/// integrand so that differences keep their correlation.
std::vector<BatchSeries> integrate_box_multi(
    const std::function<void(const Point&, double*)>& g, int count, const Box& box,
    const QuadratureConfig& cfg, std::uint64_t stream = 0);

namespace quad {

/// Adaptive Gauss-Kronrod on [a, b].
double finite(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);
/// Tanh-sinh on [a, b]; tolerates integrable endpoint singularities.
double endpoint_singular(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12);
/// Integral over [a, infinity).
double to_infinity(const std::function<double(double)>& f, double a, double tol = 1e-12);

}  // namespace quad

}  // namespace frachs
