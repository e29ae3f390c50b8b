#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qhkit/arc.hpp"
#include "qhkit/point.hpp"

namespace qhkit {

/// Axis-aligned box, used as the sampling and graph window of a domain.
struct Box {
  Point lo;
  Point hi;

  bool contains(const Point& p) const noexcept;
  double diagonal() const noexcept { return distance(lo, hi); }
};

struct Ball {
  Point center;
  double radius = 1.0;
};

/// { x : x[axis] > offset }.
struct HalfSpace {
  std::size_t dim = 2;
  std::size_t axis = 1;
  double offset = 0.0;
};

struct PuncturedBall {
  Point center;
  double radius = 1.0;
  Point puncture;
};

/// Ball minus a closed segment. The boundary is the sphere together with the
/// slit, so delta = min(radius - |p - center|, dist(p, slit)).
struct SlitDisk {
  Point center;
  double radius = 1.0;
  Point slit_a;
  Point slit_b;
};

/// Planar domain bounded by a closed polygon. Distances are measured to a
/// boundary point cloud obtained by sampling the polygon at `spacing`, so
/// boundary_distance over-estimates the true distance by at most spacing / 2.
struct CustomPolygon {
  std::vector<Point> loop;
  double spacing = 0.01;
  std::vector<Point> cloud;
};

using DomainKind = std::variant<Ball, HalfSpace, PuncturedBall, SlitDisk, CustomPolygon>;

/// A proper subdomain of R^n (n = 2 or 3) described by its boundary-distance
/// oracle, a sampling window and the smallest usable boundary distance.
/// Immutable after construction.
class Domain {
 public:
  /// delta_floor <= 0 selects the default 1e-3 * scale().
  Domain(DomainKind kind, std::optional<Box> window = std::nullopt, double delta_floor = 0.0);

  static Domain ball(const Point& center, double radius);
  static Domain half_space(std::size_t dim, std::size_t axis, double offset, const Box& window);
  static Domain upper_half_plane(const Box& window);
  static Domain punctured_ball(const Point& center, double radius, const Point& puncture);
  static Domain slit_disk(const Point& center, double radius, const Point& a, const Point& b);
  static Domain custom_polygon(std::vector<Point> loop, double spacing);

  const DomainKind& kind() const noexcept { return kind_; }
  const Box& window() const noexcept { return window_; }
  double delta_floor() const noexcept { return delta_floor_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Characteristic length (radius, or window diagonal for unbounded kinds).
  double scale() const noexcept { return scale_; }
  std::string kind_name() const;

  /// Signed boundary distance: positive inside, zero on the boundary, the
  /// negated distance to the boundary outside.
  double boundary_distance(const Point& p) const;
  bool contains(const Point& p) const { return boundary_distance(p) > 0.0; }

  /// True iff the closed segment [a, b] lies in the domain.
  bool segment_inside(const Point& a, const Point& b) const;

  /// Upper bound on the error of boundary_distance (cloud spacing for custom
  /// domains, 0 for the exact catalog kinds).
  double distance_error() const noexcept;

  /// A ball containing the domain, when one is known in closed form.
  std::optional<Ball> enclosing_ball() const;

  const HalfSpace* as_half_space() const noexcept { return std::get_if<HalfSpace>(&kind_); }

 private:
  DomainKind kind_;
  Box window_;
  double delta_floor_ = 0.0;
  double scale_ = 1.0;
  std::size_t dim_ = 2;
};

double boundary_distance(const Domain& domain, const Point& p);
bool contains(const Domain& domain, const Point& p);

/// Exactly n points with boundary_distance >= floor, drawn by rejection
/// sampling over the window. Deterministic for a fixed seed. Throws
/// kSamplingExhausted when the acceptance rate falls below 1e-4 after the
/// minimum trial budget.
std::vector<Point> sample_interior(const Domain& domain, std::size_t n, std::uint64_t seed,
                                   double floor);

/// True when the lattice of points with delta >= delta_floor at the given
/// spacing forms a single connected component.
bool check_connected(const Domain& domain, double resolution);

struct EuclideanArc {
  ArcPolyline arc;
  double length = 0.0;
};

/// Short in-domain arc from x to y found by a least-length search over the
/// lattice followed by visibility pulling. The length is an upper bound on the
/// intrinsic distance. Throws kNotConnected when no lattice path joins them.
EuclideanArc euclidean_shortest_arc(const Domain& domain, const Point& x, const Point& y,
                                    double resolution);

}  // namespace qhkit
