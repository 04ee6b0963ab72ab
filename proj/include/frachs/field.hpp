#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "frachs/point.hpp"

namespace frachs {

enum class DomainKind { FullSpace, HalfSpace, Ball, Cap };

/// Support / integration domain tag. `radius` is the ball radius for
/// Ball and the parameter R of the cap B^R for Cap.
struct Domain {
  DomainKind kind = DomainKind::FullSpace;
  double radius = 0.0;

  static Domain full_space() { return {DomainKind::FullSpace, 0.0}; }
  static Domain half_space() { return {DomainKind::HalfSpace, 0.0}; }
  static Domain ball(double r);
  static Domain cap(double R);

  /// Membership with a boundary cutoff: halfspace-type domains require
  /// x_n > delta, balls require |x| < radius - delta.
  bool contains(const Point& x, double boundary_cutoff = 0.0) const noexcept;
  /// Tight bounding box, or nullopt for unbounded domains.
  std::optional<Box> bounding_box(int n) const;
  /// True for the halfspace and for caps (domains inside x_n > 0).
  bool inside_half_space() const noexcept;

  std::string name() const;
};

/// Immutable real function on R^n with a declared support domain and an
/// optional bounding box of its support. Evaluation returns 0 outside the
/// declared support and outside the box. Copies share the evaluator.
class ScalarField {
 public:
  using Evaluator = std::function<double(const Point&)>;

  ScalarField(int dim, Evaluator f, Domain support, std::optional<Box> box, std::string label = {});

  double operator()(const Point& x) const {
    if (box_ && !box_->contains(x)) return 0.0;
    if (!support_.contains(x)) return 0.0;
    return (*eval_)(x);
  }

  int dim() const noexcept { return dim_; }
  const Domain& support() const noexcept { return support_; }
  const std::optional<Box>& box() const noexcept { return box_; }
  /// Bounding box for sampling; throws ParameterError if unbounded.
  const Box& sampling_box() const;
  const std::string& label() const noexcept { return label_; }

  ScalarField with_label(std::string label) const;
  /// x -> s * f(x)
  ScalarField scaled(double s) const;
  /// x -> |f(x)|
  ScalarField modulus() const;
  /// x -> f(x - shift); shift must keep the support inside the domain.
  ScalarField translated(const Point& shift) const;
  /// x -> f(lambda x), full-space fields only.
  ScalarField dilated(double lambda) const;

  static ScalarField zero(int dim, Domain support, const Box& box);

 private:
  int dim_;
  std::shared_ptr<const Evaluator> eval_;
  Domain support_;
  std::optional<Box> box_;
  std::string label_;
};

}  // namespace frachs
