#include "lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace qhkit::detail {

Lattice::Lattice(const Box& window, double resolution, std::size_t dim)
    : window_(window), resolution_(resolution), dim_(dim) {
  if (!(resolution > 0.0)) throw Error(ErrorCode::kInvalidInput, "resolution must be positive");
  for (std::size_t i = 0; i < dim; ++i) {
    const double cells = (window.hi[i] - window.lo[i]) / half();
    if (cells > 1e6) throw Error(ErrorCode::kInvalidInput, "resolution too fine for the window");
    counts_[i] = static_cast<std::int32_t>(std::floor(cells + 1e-9)) + 1;
  }
}

Point Lattice::position(const Key& key) const {
  Point p = window_.lo;
  for (std::size_t i = 0; i < dim_; ++i) p[i] += half() * key[i];
  return p;
}

Key Lattice::nearest_key(const Point& p) const {
  Key k{0, 0, 0};
  for (std::size_t i = 0; i < dim_; ++i) {
    k[i] = static_cast<std::int32_t>(std::lround((p[i] - window_.lo[i]) / half()));
  }
  return k;
}

std::uint64_t Lattice::pack(const Key& key) const {
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < kMaxDim; ++i) {
    h = (h << 21) | static_cast<std::uint64_t>(key[i] & 0x1FFFFF);
  }
  return h;
}

std::optional<std::uint32_t> Lattice::find(const Key& key) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (key[i] < 0 || key[i] >= counts_[i]) return std::nullopt;
  }
  const auto it = index_.find(pack(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Key> forward_offsets(std::size_t dim) {
  std::vector<Key> out;
  const int z_range = dim == 3 ? 3 : 0;
  for (int dz = -z_range; dz <= z_range; ++dz) {
    for (int dy = -3; dy <= 3; ++dy) {
      for (int dx = -3; dx <= 3; ++dx) {
        if (dx * dx + dy * dy + dz * dz > 9) continue;
        // lexicographic positivity on (dz, dy, dx)
        const bool positive = dz > 0 || (dz == 0 && (dy > 0 || (dy == 0 && dx > 0)));
        if (positive) out.push_back({dx, dy, dz});
      }
    }
  }
  return out;
}

NodeSet build_nodes(const Domain& domain, Lattice& lattice) {
  NodeSet set;
  const auto& c = lattice.counts();
  const double floor = domain.delta_floor();
  const double graded = 4.0 * lattice.resolution();
  Key k{0, 0, 0};
  for (k[2] = 0; k[2] < c[2]; ++k[2]) {
    for (k[1] = 0; k[1] < c[1]; ++k[1]) {
      for (k[0] = 0; k[0] < c[0]; ++k[0]) {
        bool even = true;
        for (std::size_t i = 0; i < lattice.dim(); ++i) even = even && (k[i] % 2 == 0);
        const Point p = lattice.position(k);
        const double d = domain.boundary_distance(p);
        if (d < floor) continue;
        if (!even && d >= graded) continue;
        lattice.insert(k, static_cast<std::uint32_t>(set.nodes.size()));
        set.nodes.push_back(p);
        set.keys.push_back(k);
      }
    }
  }
  return set;
}

std::vector<Edge> build_edges(const Domain& domain, const Lattice& lattice, const NodeSet& nodes,
                              const std::function<double(const Point&, const Point&)>& weight) {
  std::vector<Edge> edges;
  const auto offsets = forward_offsets(lattice.dim());
  for (std::uint32_t u = 0; u < nodes.nodes.size(); ++u) {
    for (const Key& o : offsets) {
      Key nk = nodes.keys[u];
      for (std::size_t i = 0; i < kMaxDim; ++i) nk[i] += o[i];
      const auto v = lattice.find(nk);
      if (!v) continue;
      const Point& a = nodes.nodes[u];
      const Point& b = nodes.nodes[*v];
      if (!domain.segment_inside(a, b)) continue;
      edges.push_back({std::min(u, *v), std::max(u, *v), weight(a, b)});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& x, const Edge& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
  return edges;
}

Csr to_csr(std::size_t node_count, const std::vector<Edge>& edges) {
  Csr g;
  g.offsets.assign(node_count + 1, 0);
  for (const Edge& e : edges) {
    ++g.offsets[e.a + 1];
    ++g.offsets[e.b + 1];
  }
  for (std::size_t i = 0; i < node_count; ++i) g.offsets[i + 1] += g.offsets[i];
  g.targets.resize(g.offsets.back());
  g.weights.resize(g.offsets.back());
  std::vector<std::uint32_t> fill(g.offsets.begin(), g.offsets.end() - 1);
  for (const Edge& e : edges) {
    g.targets[fill[e.a]] = e.b;
    g.weights[fill[e.a]++] = e.weight;
    g.targets[fill[e.b]] = e.a;
    g.weights[fill[e.b]++] = e.weight;
  }
  return g;
}

SearchResult dijkstra(const Csr& graph, std::uint32_t source, std::optional<std::uint32_t> target) {
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = graph.size();
  SearchResult r;
  r.dist.assign(n, std::numeric_limits<double>::infinity());
  r.parent.assign(n, kNone);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  r.dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (target && u == *target) break;
    for (std::uint32_t e = graph.offsets[u]; e < graph.offsets[u + 1]; ++e) {
      const std::uint32_t v = graph.targets[e];
      const double nd = d + graph.weights[e];
      if (nd < r.dist[v] || (nd == r.dist[v] && !done[v] && u < r.parent[v])) {
        r.dist[v] = nd;
        r.parent[v] = u;
        queue.emplace(nd, v);
      }
    }
  }
  return r;
}

std::vector<std::uint32_t> extract_path(const SearchResult& search, std::uint32_t source,
                                        std::uint32_t target) {
  std::vector<std::uint32_t> path;
  if (!std::isfinite(search.dist[target])) return path;
  for (std::uint32_t v = target; v != source; v = search.parent[v]) path.push_back(v);
  path.push_back(source);
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<std::uint32_t> snap(const Domain& domain, const Lattice& lattice,
                                  const std::vector<Point>& nodes, const Point& p,
                                  double max_radius) {
  const Key center = lattice.nearest_key(p);
  const auto reach = static_cast<std::int32_t>(std::ceil(max_radius / lattice.half())) + 1;
  std::vector<std::pair<double, std::uint32_t>> candidates;
  const std::int32_t z_reach = lattice.dim() == 3 ? reach : 0;
  Key k{0, 0, 0};
  for (std::int32_t dz = -z_reach; dz <= z_reach; ++dz) {
    for (std::int32_t dy = -reach; dy <= reach; ++dy) {
      for (std::int32_t dx = -reach; dx <= reach; ++dx) {
        k = {center[0] + dx, center[1] + dy, center[2] + dz};
        if (const auto v = lattice.find(k)) {
          const double d = distance(nodes[*v], p);
          if (d <= max_radius) candidates.emplace_back(d, *v);
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& [d, v] : candidates) {
    if (d == 0.0 || domain.segment_inside(p, nodes[v])) return v;
  }
  return std::nullopt;
}

std::vector<std::uint32_t> components(const Csr& graph, std::uint32_t* count) {
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(graph.size(), kNone);
  std::uint32_t next = 0;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < graph.size(); ++s) {
    if (label[s] != kNone) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      for (std::uint32_t e = graph.offsets[u]; e < graph.offsets[u + 1]; ++e) {
        const std::uint32_t v = graph.targets[e];
        if (label[v] == kNone) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

}  // namespace qhkit::detail
