#include <cmath>

#include "lattice.hpp"
#include "qhkit/domain.hpp"

namespace qhkit {
namespace {

// From each anchor jump to the farthest later vertex that is directly visible.
std::vector<Point> pull_taut(const Domain& domain, const std::vector<Point>& path) {
  std::vector<Point> out{path.front()};
  std::size_t anchor = 0;
  while (anchor + 1 < path.size()) {
    std::size_t next = anchor + 1;
    for (std::size_t j = path.size() - 1; j > anchor + 1; --j) {
      if (domain.segment_inside(path[anchor], path[j])) {
        next = j;
        break;
      }
    }
    out.push_back(path[next]);
    anchor = next;
  }
  return out;
}

void require_usable(const Domain& domain, const Point& p, const char* what) {
  require_finite(p, what);
  if (domain.boundary_distance(p) < domain.delta_floor()) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + ": point closer to the boundary than delta_floor");
  }
}

}  // namespace

bool check_connected(const Domain& domain, double resolution) {
  detail::Lattice lattice(domain.window(), resolution, domain.dim());
  const detail::NodeSet nodes = detail::build_nodes(domain, lattice);
  if (nodes.nodes.empty()) return false;
  const auto edges = detail::build_edges(domain, lattice, nodes,
                                         [](const Point& a, const Point& b) { return distance(a, b); });
  std::uint32_t count = 0;
  detail::components(detail::to_csr(nodes.nodes.size(), edges), &count);
  return count == 1;
}

EuclideanArc euclidean_shortest_arc(const Domain& domain, const Point& x, const Point& y,
                                    double resolution) {
  require_usable(domain, x, "euclidean_shortest_arc");
  require_usable(domain, y, "euclidean_shortest_arc");
  if (x == y) return {ArcPolyline::single(x), 0.0};
  if (domain.segment_inside(x, y)) return {ArcPolyline::segment(x, y), distance(x, y)};

  detail::Lattice lattice(domain.window(), resolution, domain.dim());
  const detail::NodeSet nodes = detail::build_nodes(domain, lattice);
  if (nodes.nodes.empty()) throw Error(ErrorCode::kDegenerateDomain, "no lattice nodes inside the domain");
  const auto edges = detail::build_edges(domain, lattice, nodes,
                                         [](const Point& a, const Point& b) { return distance(a, b); });
  const detail::Csr graph = detail::to_csr(nodes.nodes.size(), edges);

  std::optional<std::uint32_t> sx;
  std::optional<std::uint32_t> sy;
  for (int widen = 1; widen <= 3 && !(sx && sy); ++widen) {
    if (!sx) sx = detail::snap(domain, lattice, nodes.nodes, x, widen * resolution);
    if (!sy) sy = detail::snap(domain, lattice, nodes.nodes, y, widen * resolution);
  }
  if (!sx || !sy) throw Error(ErrorCode::kNotConnected, "endpoint has no visible lattice node nearby");

  const auto search = detail::dijkstra(graph, *sx, *sy);
  const auto ids = detail::extract_path(search, *sx, *sy);
  if (ids.empty()) throw Error(ErrorCode::kNotConnected, "endpoints lie in different lattice components");

  std::vector<Point> path{x};
  for (const std::uint32_t id : ids) {
    if (!(nodes.nodes[id] == path.back())) path.push_back(nodes.nodes[id]);
  }
  if (!(path.back() == y)) path.push_back(y);
  ArcPolyline arc(pull_taut(domain, path));
  const double length = arc.length();
  return {std::move(arc), length};
}

}  // namespace qhkit
