#pragma once

// Independent reference computations used by the tests. Nothing here calls the
// code under test except for constructing points.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "qhkit/point.hpp"

namespace qhkit::oracle {

/// Half-plane hyperbolic distance through std::acosh.
inline double halfplane_distance(const Point& x, const Point& y) {
  const double d2 = (x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]);
  return std::acosh(1.0 + d2 / (2.0 * x[1] * y[1]));
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Dense boundary sample of a circle.
inline std::vector<Point> circle_points(const Point& c, double r, int n) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    pts.push_back(Point{c[0] + r * std::cos(t), c[1] + r * std::sin(t)});
  }
  return pts;
}

inline std::vector<Point> segment_points(const Point& a, const Point& b, int n) {
  std::vector<Point> pts;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    pts.push_back(Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
  }
  return pts;
}

inline double min_distance(const Point& p, const std::vector<Point>& cloud) {
  double best = INFINITY;
  for (const Point& q : cloud) best = std::min(best, std::hypot(p[0] - q[0], p[1] - q[1]));
  return best;
}

/// Planar disk automorphism z -> (z - a) / (1 - conj(a) z).
inline Point moebius(const Point& a, const Point& x) {
  const std::complex<double> za(a[0], a[1]);
  const std::complex<double> z(x[0], x[1]);
  const std::complex<double> w = (z - za) / (1.0 - std::conj(za) * z);
  return Point{w.real(), w.imag()};
}

}  // namespace qhkit::oracle
