#include "frachs/point.hpp"

#include <algorithm>
#include <stdexcept>

#include "frachs/error.hpp"

namespace frachs {

Point::Point(int n) : n_(n) {
  if (n < 1 || n > kMaxDim) throw ParameterError("point dimension out of range");
}

Point::Point(std::initializer_list<double> coords) : Point(static_cast<int>(coords.size())) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point::Point(std::span<const double> coords) : Point(static_cast<int>(coords.size())) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point& Point::operator+=(const Point& o) noexcept {
  for (int i = 0; i < n_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) noexcept {
  for (int i = 0; i < n_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) noexcept {
  for (int i = 0; i < n_; ++i) c_[i] *= s;
  return *this;
}

Point operator+(Point a, const Point& b) noexcept { return a += b; }
Point operator-(Point a, const Point& b) noexcept { return a -= b; }
Point operator*(double s, Point a) noexcept { return a *= s; }

double distance(const Point& a, const Point& b) noexcept { return (a - b).norm(); }

double Box::volume() const noexcept {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
  return v;
}

double Box::diameter() const noexcept { return distance(lo, hi); }

bool Box::contains(const Point& x) const noexcept {
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

Box Box::hull(const Box& other) const {
  Box b = *this;
  for (int i = 0; i < dim(); ++i) {
    b.lo[i] = std::min(lo[i], other.lo[i]);
    b.hi[i] = std::max(hi[i], other.hi[i]);
  }
  return b;
}

std::vector<Point> Box::corners() const {
  const int n = dim();
  std::vector<Point> out;
  out.reserve(std::size_t{1} << n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Point c(n);
    for (int i = 0; i < n; ++i) c[i] = (mask >> i) & 1u ? hi[i] : lo[i];
    out.push_back(c);
  }
  return out;
}

Box Box::cube(int n, double lo, double hi) {
  Box b{Point(n), Point(n)};
  for (int i = 0; i < n; ++i) {
    b.lo[i] = lo;
    b.hi[i] = hi;
  }
  return b;
}

}  // namespace frachs
