#include "frachs/field.hpp"

#include <cmath>
#include <sstream>

#include "frachs/error.hpp"
#include "frachs/geometry.hpp"

namespace frachs {

Domain Domain::ball(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("ball radius must be positive");
  return {DomainKind::Ball, r};
}

Domain Domain::cap(double R) {
  if (!(R > 0.0 && R < 1.0)) throw ParameterError("cap parameter R must lie in (0, 1)");
  return {DomainKind::Cap, R};
}

bool Domain::contains(const Point& x, double delta) const noexcept {
  switch (kind) {
    case DomainKind::FullSpace:
      return true;
    case DomainKind::HalfSpace:
      return x.last() > delta;
    case DomainKind::Ball:
      return x.norm() < radius - delta;
    case DomainKind::Cap: {
      if (x.last() <= delta) return false;
      const double r2 = radius * radius;
      const double c = (1.0 + r2) / (1.0 - r2);
      const double rad = 2.0 * radius / (1.0 - r2);
      const double dz = x.last() - c;
      return x.tangential_norm2() + dz * dz <= rad * rad;
    }
  }
  return false;
}

std::optional<Box> Domain::bounding_box(int n) const {
  switch (kind) {
    case DomainKind::Ball:
      return Box::cube(n, -radius, radius);
    case DomainKind::Cap:
      return cap_region(radius).bounding_box(n);
    default:
      return std::nullopt;
  }
}

bool Domain::inside_half_space() const noexcept {
  return kind == DomainKind::HalfSpace || kind == DomainKind::Cap;
}

std::string Domain::name() const {
  std::ostringstream os;
  switch (kind) {
    case DomainKind::FullSpace:
      return "fullspace";
    case DomainKind::HalfSpace:
      return "halfspace";
    case DomainKind::Ball:
      os << "ball(" << radius << ")";
      return os.str();
    case DomainKind::Cap:
      os << "cap(" << radius << ")";
      return os.str();
  }
  return "unknown";
}

ScalarField::ScalarField(int dim, Evaluator f, Domain support, std::optional<Box> box, std::string label)
    : dim_(dim),
      eval_(std::make_shared<const Evaluator>(std::move(f))),
      support_(support),
      box_(std::move(box)),
      label_(std::move(label)) {
  if (dim < 1 || dim > kMaxDim) throw ParameterError("field dimension out of range");
  if (box_ && box_->dim() != dim) throw ParameterError("field box dimension mismatch");
}

const Box& ScalarField::sampling_box() const {
  if (!box_) throw ParameterError("field '" + label_ + "' has no bounded support box");
  return *box_;
}

ScalarField ScalarField::with_label(std::string label) const {
  ScalarField g = *this;
  g.label_ = std::move(label);
  return g;
}

ScalarField ScalarField::scaled(double s) const {
  auto self = *this;
  return {dim_, [self, s](const Point& x) { return s * self(x); }, support_, box_, label_};
}

ScalarField ScalarField::modulus() const {
  auto self = *this;
  return {dim_, [self](const Point& x) { return std::abs(self(x)); }, support_, box_, label_};
}

ScalarField ScalarField::translated(const Point& shift) const {
  auto self = *this;
  std::optional<Box> b = box_;
  if (b) {
    b->lo += shift;
    b->hi += shift;
  }
  return {dim_, [self, shift](const Point& x) { return self(x - shift); }, support_, b, label_};
}

ScalarField ScalarField::dilated(double lambda) const {
  if (support_.kind != DomainKind::FullSpace)
    throw ParameterError("dilation is only defined for full-space fields");
  if (!(lambda > 0.0)) throw ParameterError("dilation factor must be positive");
  auto self = *this;
  std::optional<Box> b = box_;
  if (b) {
    b->lo *= 1.0 / lambda;
    b->hi *= 1.0 / lambda;
  }
  return {dim_, [self, lambda](const Point& x) { return self(lambda * x); }, support_, b, label_};
}

ScalarField ScalarField::zero(int dim, Domain support, const Box& box) {
  return {dim, [](const Point&) { return 0.0; }, support, box, "zero"};
}

}  // namespace frachs
