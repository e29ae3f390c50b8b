#pragma once

// Internal: boundary-graded node lattice and least-weight search shared by
// the Euclidean and quasihyperbolic path graphs.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "qhkit/domain.hpp"

namespace qhkit::detail {

using Key = std::array<std::int32_t, kMaxDim>;

/// Points of the half-spacing lattice lo + key * (resolution / 2). Keys with all
/// even entries form the regular grid; odd keys are kept only where the
/// boundary is within 4 * resolution.
class Lattice {
 public:
  Lattice(const Box& window, double resolution, std::size_t dim);

  double resolution() const noexcept { return resolution_; }
  double half() const noexcept { return 0.5 * resolution_; }
  std::size_t dim() const noexcept { return dim_; }

  Point position(const Key& key) const;
  Key nearest_key(const Point& p) const;
  std::uint64_t pack(const Key& key) const;

  void insert(const Key& key, std::uint32_t node) { index_.emplace(pack(key), node); }
  std::optional<std::uint32_t> find(const Key& key) const;

  const std::array<std::int32_t, kMaxDim>& counts() const noexcept { return counts_; }

 private:
  Box window_;
  double resolution_;
  std::size_t dim_;
  std::array<std::int32_t, kMaxDim> counts_{1, 1, 1};
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

/// Lattice offsets (half-spacing units) with length <= 1.5 * resolution that are
/// lexicographically positive, so each undirected edge is generated once.
std::vector<Key> forward_offsets(std::size_t dim);

struct NodeSet {
  std::vector<Point> nodes;
  std::vector<Key> keys;
};

/// Regular grid restricted to delta >= delta_floor plus half-spacing nodes
/// where delta < 4 * resolution.
NodeSet build_nodes(const Domain& domain, Lattice& lattice);

struct Csr {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<double> weights;

  std::size_t size() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
};

struct Edge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double weight = 0.0;
};

/// Undirected edges between lattice neighbours whose segment stays interior,
/// weighted by `weight(a, b)`.
std::vector<Edge> build_edges(const Domain& domain, const Lattice& lattice, const NodeSet& nodes,
                              const std::function<double(const Point&, const Point&)>& weight);

Csr to_csr(std::size_t node_count, const std::vector<Edge>& edges);

/// Dijkstra from source. Ties are broken by smaller node index. When target is
/// given the search stops once it is settled.
struct SearchResult {
  std::vector<double> dist;
  std::vector<std::uint32_t> parent;
};
SearchResult dijkstra(const Csr& graph, std::uint32_t source,
                      std::optional<std::uint32_t> target = std::nullopt);

/// Node indices source..target, empty when unreachable.
std::vector<std::uint32_t> extract_path(const SearchResult& search, std::uint32_t source,
                                        std::uint32_t target);

/// Nearest node visible from p (segment inside the domain) within
/// max_radius; ties by smaller index.
std::optional<std::uint32_t> snap(const Domain& domain, const Lattice& lattice,
                                  const std::vector<Point>& nodes, const Point& p,
                                  double max_radius);

/// Components of the graph; returns the component label of every node.
std::vector<std::uint32_t> components(const Csr& graph, std::uint32_t* count);

}  // namespace qhkit::detail
