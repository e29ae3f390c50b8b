#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qhkit/point.hpp"

namespace qhkit {

/// Ordered polyline with cached cumulative Euclidean lengths.
class ArcPolyline {
 public:
  explicit ArcPolyline(std::vector<Point> vertices);

  static ArcPolyline single(const Point& p) { return ArcPolyline({p}); }
  static ArcPolyline segment(const Point& a, const Point& b) { return ArcPolyline({a, b}); }

  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t dim() const noexcept { return vertices_.front().dim(); }
  const Point& operator[](std::size_t i) const noexcept { return vertices_[i]; }
  const Point& front() const noexcept { return vertices_.front(); }
  const Point& back() const noexcept { return vertices_.back(); }

  /// Cumulative length up to vertex i; cumulative()[0] == 0.
  std::span<const double> cumulative() const noexcept { return cumulative_; }
  double length() const noexcept { return cumulative_.back(); }

  /// Point at arclength s, clamped to [0, length()].
  Point at_length(double s) const;

  /// Vertices i..j inclusive (i <= j).
  ArcPolyline subarc(std::size_t i, std::size_t j) const;

  ArcPolyline reversed() const;

  /// Inserts the midpoint of every segment (vertex count becomes 2n - 1).
  ArcPolyline densified() const;

  /// Largest pairwise vertex distance; equals the diameter of the polyline.
  double diameter() const;

 private:
  std::vector<Point> vertices_;
  std::vector<double> cumulative_;
};

/// One evaluation point of a discretized arc.
struct ArcSample {
  Point point;
  double arclength = 0.0;
  std::size_t segment = 0;
};

/// Every vertex plus interior points along each segment so that the total
/// count is at least min_points; segments receive points in proportion to
/// their length.
std::vector<ArcSample> discretize(const ArcPolyline& arc, std::size_t min_points);

/// Exactly m >= 2 successive points at uniform arclength spacing (endpoints
/// included). A single-vertex arc yields m copies of that vertex.
std::vector<Point> uniform_points(const ArcPolyline& arc, std::size_t m);

}  // namespace qhkit
