#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace frachs {

inline constexpr int kMaxDim = 8;

/// Dense point of R^n, n <= kMaxDim. The last coordinate is x_n, the
/// others form the tangential part x'.
class Point {
 public:
  Point() = default;
  explicit Point(int n);
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  int dim() const noexcept { return n_; }
  double& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }

  double last() const noexcept { return c_[static_cast<std::size_t>(n_ - 1)]; }
  double& last() noexcept { return c_[static_cast<std::size_t>(n_ - 1)]; }

  /// |x'|^2
  double tangential_norm2() const noexcept {
    double s = 0.0;
    for (int i = 0; i + 1 < n_; ++i) s += c_[i] * c_[i];
    return s;
  }
  double norm2() const noexcept { return tangential_norm2() + last() * last(); }
  double norm() const noexcept { return std::sqrt(norm2()); }

  std::span<const double> coords() const noexcept {
    return {c_.data(), static_cast<std::size_t>(n_)};
  }
  std::vector<double> to_vector() const { return {c_.begin(), c_.begin() + n_}; }

  Point& operator+=(const Point& o) noexcept;
  Point& operator-=(const Point& o) noexcept;
  Point& operator*=(double s) noexcept;

 private:
  std::array<double, kMaxDim> c_{};
  int n_ = 0;
};

Point operator+(Point a, const Point& b) noexcept;
Point operator-(Point a, const Point& b) noexcept;
Point operator*(double s, Point a) noexcept;
double distance(const Point& a, const Point& b) noexcept;

/// Axis-aligned box [lo, hi].
struct Box {
  Point lo;
  Point hi;

  int dim() const noexcept { return lo.dim(); }
  double volume() const noexcept;
  double diameter() const noexcept;
  bool contains(const Point& x) const noexcept;
  /// Smallest box containing both.
  Box hull(const Box& other) const;
  /// All 2^n corners.
  std::vector<Point> corners() const;

  static Box cube(int n, double lo, double hi);
};

}  // namespace frachs
