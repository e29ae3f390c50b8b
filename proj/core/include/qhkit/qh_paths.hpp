#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "qhkit/arc.hpp"
#include "qhkit/domain.hpp"
#include "qhkit/qh_metric.hpp"

namespace qhkit {

struct GraphEdge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double weight = 0.0;
};

struct PathGraphOptions {
  /// Perturb nodes by up to 0.1 * resolution using the seed.
  bool jitter = false;
  double quadrature_tol = 1e-6;
};

/// Undirected graph of interior nodes whose edge weights are quasihyperbolic
/// lengths of the straight edge segments. Immutable and cheap to copy;
/// concurrent queries are safe.
class PathGraph {
 public:
  struct Impl;

  std::span<const Point> nodes() const noexcept;
  std::span<const GraphEdge> edges() const noexcept;
  double resolution() const noexcept;
  std::uint64_t seed() const noexcept;
  std::size_t component_count() const noexcept;

  const Impl& impl() const noexcept { return *impl_; }

 private:
  friend PathGraph make_path_graph(std::shared_ptr<const Impl> impl);
  explicit PathGraph(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Regular grid over the window with delta >= delta_floor, half-spacing nodes
/// where delta < 4 * resolution, and edges between nodes within
/// 1.5 * resolution whose segment stays interior. Throws kDegenerateDomain for
/// an empty node set.
PathGraph build_path_graph(const Domain& domain, double resolution, std::uint64_t seed,
                           const PathGraphOptions& options = {});

/// An arc together with a two-sided certificate of how short it is.
struct ShortArcResult {
  ArcPolyline arc = ArcPolyline::single(Point{0.0, 0.0});
  /// Quadrature upper bound on the quasihyperbolic length of arc.
  double upper = 0.0;
  /// Certified lower bound on k(x, y).
  double lower = 0.0;
  /// upper - lower, so the arc is epsilon_hat-short.
  double epsilon_hat = 0.0;
  /// Largest endpoint-to-graph snapping distance used.
  double snap_distance = 0.0;
};

struct ShortArcOptions {
  /// Tolerance for the reported upper bound.
  double quadrature_tol = 1e-9;
  /// Looser tolerance used while moving vertices; only the final length
  /// evaluation needs quadrature_tol.
  double search_tol = 1e-6;
  /// Final segments are subdivided until each has quasihyperbolic length at
  /// most this value.
  double segment_target = 0.15;
  std::size_t sweeps_per_level = 400;
};

/// Least-weight graph path between the snapped endpoints, pulled taut and then
/// shortened coarse-to-fine. Throws kNotConnected for disconnected endpoints.
ShortArcResult qh_shortest_arc(const Domain& domain, const PathGraph& graph, const Point& x,
                               const Point& y, const ShortArcOptions& options = {});

/// Local descent: vertex moves (midpoint smoothing, normal and tangential
/// perturbations) are accepted only when the arc stays interior and its
/// quasihyperbolic length strictly decreases. At most `iterations` sweeps.
ArcPolyline shorten_arc(const Domain& domain, const ArcPolyline& arc, std::size_t iterations,
                        double tol = 1e-9);

/// Largest of the available certified lower bounds for k(x, y): the growth
/// bound log(1 + |x-y| / min delta); the exact value on half-spaces; and, for
/// domains inside a ball, the quasihyperbolic distance of the best supporting
/// half-space and half the hyperbolic distance of that ball.
double certified_lower_bound(const Domain& domain, const Point& x, const Point& y);

/// Upper-bound distances from graph paths (endpoint segments plus least-weight
/// graph path, or the straight segment when shorter).
class GraphDistance final : public DistanceEvaluator {
 public:
  GraphDistance(const Domain& domain, PathGraph graph) : domain_(domain), graph_(std::move(graph)) {}
  double operator()(const Point& a, const Point& b) const override;
  std::vector<double> matrix(std::span<const Point> points) const override;

 private:
  const Domain& domain_;
  PathGraph graph_;
};

/// Graph cache: JSON {nodes, edges, resolution, seed, domain_hash}.
void save_path_graph(const PathGraph& graph, const Domain& domain, const std::string& path);
/// Throws kIo when the file cannot be read or was built for another domain.
PathGraph load_path_graph(const Domain& domain, const std::string& path);

}  // namespace qhkit
