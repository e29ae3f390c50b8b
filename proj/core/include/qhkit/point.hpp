#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>

#include "qhkit/error.hpp"

namespace qhkit {

inline constexpr std::size_t kMaxDim = 3;

/// A point (or displacement) of R^2 or R^3. Unused trailing coordinates are
/// kept at zero so arithmetic never needs to look at the dimension.
class Point {
 public:
  constexpr Point() = default;

  Point(std::initializer_list<double> coords) {
    if (coords.size() < 2 || coords.size() > kMaxDim) {
      throw Error(ErrorCode::kInvalidInput, "point dimension must be 2 or 3");
    }
    dim_ = coords.size();
    std::size_t i = 0;
    for (double c : coords) c_[i++] = c;
  }

  static Point zero(std::size_t dim) {
    if (dim < 2 || dim > kMaxDim) {
      throw Error(ErrorCode::kInvalidInput, "point dimension must be 2 or 3");
    }
    Point p;
    p.dim_ = dim;
    return p;
  }

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }

  bool finite() const noexcept {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!std::isfinite(c_[i])) return false;
    }
    return true;
  }

  Point& operator+=(const Point& o) noexcept {
    for (std::size_t i = 0; i < kMaxDim; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Point& operator-=(const Point& o) noexcept {
    for (std::size_t i = 0; i < kMaxDim; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Point& operator*=(double s) noexcept {
    for (std::size_t i = 0; i < kMaxDim; ++i) c_[i] *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
  friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
  friend Point operator*(Point a, double s) noexcept { return a *= s; }
  friend Point operator*(double s, Point a) noexcept { return a *= s; }
  friend Point operator/(Point a, double s) noexcept { return a *= (1.0 / s); }
  friend Point operator-(Point a) noexcept { return a *= -1.0; }

  friend bool operator==(const Point& a, const Point& b) noexcept {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }

 private:
  std::array<double, kMaxDim> c_{};
  std::size_t dim_ = 2;
};

inline double dot(const Point& a, const Point& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < kMaxDim; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a) noexcept { return std::sqrt(dot(a, a)); }

inline double distance(const Point& a, const Point& b) noexcept { return norm(a - b); }

/// Linear interpolation a + t (b - a).
inline Point lerp(const Point& a, const Point& b, double t) noexcept {
  return a + (b - a) * t;
}

/// Distance from p to the closed segment [a, b].
double distance_to_segment(const Point& p, const Point& a, const Point& b) noexcept;

/// Throws kInvalidInput unless every coordinate of p is finite.
void require_finite(const Point& p, const char* what);

}  // namespace qhkit
