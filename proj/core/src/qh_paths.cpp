#include "qhkit/qh_paths.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "lattice.hpp"
#include "qhkit/json_io.hpp"
#include "qhkit/rng.hpp"

namespace qhkit {

struct PathGraph::Impl {
  Impl(const Box& window, double res, std::size_t dim) : lattice(window, res, dim) {}

  detail::Lattice lattice;
  std::vector<Point> nodes;
  std::vector<GraphEdge> edges;
  detail::Csr csr;
  double resolution = 0.0;
  std::uint64_t seed = 0;
  std::size_t components = 0;
};

PathGraph make_path_graph(std::shared_ptr<const PathGraph::Impl> impl) { return PathGraph(std::move(impl)); }

std::span<const Point> PathGraph::nodes() const noexcept { return impl_->nodes; }
std::span<const GraphEdge> PathGraph::edges() const noexcept { return impl_->edges; }
double PathGraph::resolution() const noexcept { return impl_->resolution; }
std::uint64_t PathGraph::seed() const noexcept { return impl_->seed; }
std::size_t PathGraph::component_count() const noexcept { return impl_->components; }

namespace {

// A vertex stops moving once its trial step is this small relative to the
// chord of its neighbours; the length change is then second order in it.
constexpr double kMinRelativeStep = 1e-4;

constexpr double kCoarseSegmentTarget = 1.0;
constexpr int kMaxLevels = 16;

void finish(PathGraph::Impl& impl) {
  std::vector<detail::Edge> raw;
  raw.reserve(impl.edges.size());
  for (const GraphEdge& e : impl.edges) raw.push_back({e.a, e.b, e.weight});
  impl.csr = detail::to_csr(impl.nodes.size(), raw);
  std::uint32_t count = 0;
  detail::components(impl.csr, &count);
  impl.components = count;
}

std::optional<std::uint32_t> snap_endpoint(const Domain& domain, const PathGraph::Impl& g, const Point& p) {
  for (int widen = 1; widen <= 3; ++widen) {
    if (auto v = detail::snap(domain, g.lattice, g.nodes, p, widen * g.resolution)) return v;
  }
  return std::nullopt;
}

struct Segments {
  std::vector<Point> pts;
  std::vector<double> w;  // w[i] = length of [pts[i], pts[i+1]]
};

double seg_len(const Domain& domain, const Point& a, const Point& b, double tol) {
  return qh_segment_length(domain, a, b, tol).value;
}

// Greedy taut pulling under the quasihyperbolic weight: a chord replaces a run
// of vertices only when it is inside and not longer than the run.
std::vector<Point> pull_qh(const Domain& domain, const std::vector<Point>& path, double tol) {
  const std::size_t n = path.size();
  std::vector<double> prefix(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) prefix[i] = prefix[i - 1] + seg_len(domain, path[i - 1], path[i], tol);
  std::vector<Point> out{path.front()};
  std::size_t anchor = 0;
  while (anchor + 1 < n) {
    std::size_t next = anchor + 1;
    for (std::size_t j = anchor + 2; j < n; ++j) {
      if (!domain.segment_inside(path[anchor], path[j])) break;
      if (seg_len(domain, path[anchor], path[j], tol) > prefix[j] - prefix[anchor]) break;
      next = j;
    }
    out.push_back(path[next]);
    anchor = next;
  }
  return out;
}

// Splits every segment longer than target (quasihyperbolic) into equal pieces.
bool subdivide(const Domain& domain, std::vector<Point>& pts, double target, double tol) {
  std::vector<Point> out{pts.front()};
  bool changed = false;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = seg_len(domain, pts[i], pts[i + 1], tol);
    const auto pieces = static_cast<std::size_t>(std::ceil(len / target));
    for (std::size_t k = 1; k < pieces; ++k) {
      out.push_back(lerp(pts[i], pts[i + 1], static_cast<double>(k) / static_cast<double>(pieces)));
      changed = true;
    }
    out.push_back(pts[i + 1]);
  }
  pts = std::move(out);
  return changed;
}

std::vector<Point> move_directions(const Point& chord) {
  const std::size_t dim = chord.dim();
  const double len = norm(chord);
  std::vector<Point> dirs;
  if (len == 0.0) {
    for (std::size_t i = 0; i < dim; ++i) {
      Point e = Point::zero(dim);
      e[i] = 1.0;
      dirs.push_back(e);
    }
    return dirs;
  }
  const Point t = chord / len;
  dirs.push_back(t);
  if (dim == 2) {
    Point n = Point::zero(2);
    n[0] = -t[1];
    n[1] = t[0];
    dirs.push_back(n);
  } else {
    std::size_t axis = 0;
    for (std::size_t i = 1; i < 3; ++i) {
      if (std::abs(t[i]) < std::abs(t[axis])) axis = i;
    }
    Point e = Point::zero(3);
    e[axis] = 1.0;
    Point n1 = e - t * dot(e, t);
    n1 = n1 / norm(n1);
    Point n2 = Point::zero(3);
    n2[0] = t[1] * n1[2] - t[2] * n1[1];
    n2[1] = t[2] * n1[0] - t[0] * n1[2];
    n2[2] = t[0] * n1[1] - t[1] * n1[0];
    dirs.push_back(n1);
    dirs.push_back(n2);
  }
  return dirs;
}

double tangent_halfspace_bound(const Ball& ball, const Point& x, const Point& y) {
  const Point xr = x - ball.center;
  const Point yr = y - ball.center;
  const double R = ball.radius;
  const double d2 = dot(x - y, x - y);
  // k of the supporting half-space {(z - c) . u < R}; larger product of the
  // boundary distances means a smaller bound, so minimize it over u.
  auto product = [&](const Point& u) { return (R - dot(xr, u)) * (R - dot(yr, u)); };
  double best = std::numeric_limits<double>::infinity();
  if (x.dim() == 2) {
    auto at = [&](double th) { return product(Point{std::cos(th), std::sin(th)}); };
    constexpr int kCoarse = 360;
    double best_th = 0.0;
    for (int i = 0; i < kCoarse; ++i) {
      const double th = 2.0 * std::numbers::pi * i / kCoarse;
      const double v = at(th);
      if (v < best) {
        best = v;
        best_th = th;
      }
    }
    double lo = best_th - 2.0 * std::numbers::pi / kCoarse;
    double hi = best_th + 2.0 * std::numbers::pi / kCoarse;
    for (int it = 0; it < 60; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (at(m1) < at(m2)) hi = m2; else lo = m1;
    }
    best = std::min(best, at(0.5 * (lo + hi)));
  } else {
    // Fibonacci sphere plus the directions of the points themselves.
    std::vector<Point> dirs;
    constexpr int kCount = 2000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < kCount; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / kCount;
      const double r = std::sqrt(1.0 - z * z);
      dirs.push_back(Point{r * std::cos(golden * i), r * std::sin(golden * i), z});
    }
    for (const Point& p : {xr, yr, xr + yr}) {
      if (norm(p) > 0.0) dirs.push_back(p / norm(p));
    }
    for (const Point& u : dirs) best = std::min(best, product(u));
  }
  if (!(best > 0.0)) return 0.0;
  const double z = d2 / (2.0 * best);
  return std::log1p(z + std::sqrt(z * (z + 2.0)));
}

double half_hyperbolic_bound(const Ball& ball, const Point& x, const Point& y) {
  const double R2 = ball.radius * ball.radius;
  const double ax = R2 - dot(x - ball.center, x - ball.center);
  const double ay = R2 - dot(y - ball.center, y - ball.center);
  if (!(ax > 0.0 && ay > 0.0)) return 0.0;
  const double z = 2.0 * R2 * dot(x - y, x - y) / (ax * ay);
  return 0.5 * std::log1p(z + std::sqrt(z * (z + 2.0)));
}

}  // namespace

PathGraph build_path_graph(const Domain& domain, double resolution, std::uint64_t seed,
                           const PathGraphOptions& options) {
  if (!(resolution > 2.0 * domain.delta_floor())) {
    throw Error(ErrorCode::kInvalidInput, "resolution must exceed 2 * delta_floor");
  }
  auto impl = std::make_shared<PathGraph::Impl>(domain.window(), resolution, domain.dim());
  impl->resolution = resolution;
  impl->seed = seed;
  detail::NodeSet set = detail::build_nodes(domain, impl->lattice);
  if (set.nodes.empty()) throw Error(ErrorCode::kDegenerateDomain, "no graph nodes inside the domain");
  if (options.jitter) {
    Rng rng(seed);
    for (Point& p : set.nodes) {
      Point q = p;
      for (std::size_t i = 0; i < domain.dim(); ++i) q[i] += rng.uniform(-0.1, 0.1) * resolution;
      if (domain.boundary_distance(q) >= domain.delta_floor()) p = q;
    }
  }
  const double tol = options.quadrature_tol;
  const auto edges = detail::build_edges(domain, impl->lattice, set, [&](const Point& a, const Point& b) {
    return qh_segment_length(domain, a, b, tol).value;
  });
  impl->nodes = std::move(set.nodes);
  impl->edges.reserve(edges.size());
  for (const detail::Edge& e : edges) impl->edges.push_back({e.a, e.b, e.weight});
  finish(*impl);
  return make_path_graph(std::move(impl));
}

ArcPolyline shorten_arc(const Domain& domain, const ArcPolyline& arc, std::size_t iterations, double tol) {
  if (iterations == 0 || arc.size() < 3) return arc;
  std::vector<Point> v(arc.vertices().begin(), arc.vertices().end());
  const std::size_t n = v.size();
  std::vector<double> w(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) w[i] = seg_len(domain, v[i], v[i + 1], tol);
  std::vector<double> step(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    step[i] = 0.25 * std::min(distance(v[i - 1], v[i]), distance(v[i], v[i + 1]));
  }
  const double floor = domain.delta_floor();
  for (std::size_t sweep = 0; sweep < iterations; ++sweep) {
    bool active = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Point& a = v[i - 1];
      const Point& b = v[i + 1];
      const double current = w[i - 1] + w[i];
      const double chord = distance(a, b);
      if (step[i] <= kMinRelativeStep * std::max(chord, 1e-300)) continue;
      active = true;
      std::vector<Point> proposals{lerp(a, b, 0.5)};
      for (const Point& d : move_directions(b - a)) {
        proposals.push_back(v[i] + d * step[i]);
        proposals.push_back(v[i] - d * step[i]);
      }
      double best = current;
      double best_l = 0.0;
      double best_r = 0.0;
      std::optional<Point> best_q;
      for (const Point& q : proposals) {
        if (domain.boundary_distance(q) < floor) continue;
        if (!domain.segment_inside(a, q) || !domain.segment_inside(q, b)) continue;
        const double l = seg_len(domain, a, q, tol);
        if (l >= best) continue;
        const double r = seg_len(domain, q, b, tol);
        if (l + r < best) {
          best = l + r;
          best_l = l;
          best_r = r;
          best_q = q;
        }
      }
      // Gains below the quadrature tolerance are noise and would keep the
      // vertex wandering.
      if (best_q && best < current * (1.0 - tol)) {
        v[i] = *best_q;
        w[i - 1] = best_l;
        w[i] = best_r;
        step[i] = std::min(1.5 * step[i], 0.5 * chord);
      } else {
        step[i] *= 0.5;
      }
    }
    if (!active) break;
  }
  return ArcPolyline(std::move(v));
}

double certified_lower_bound(const Domain& domain, const Point& x, const Point& y) {
  if (x == y) return 0.0;
  const double err = domain.distance_error();
  const double dmin = std::min(domain.boundary_distance(x), domain.boundary_distance(y)) + err;
  double lower = growth_lower_bound(distance(x, y), dmin);
  if (const HalfSpace* h = domain.as_half_space()) lower = std::max(lower, halfspace_qh_distance(*h, x, y));
  if (const auto ball = domain.enclosing_ball()) {
    lower = std::max(lower, tangent_halfspace_bound(*ball, x, y));
    lower = std::max(lower, half_hyperbolic_bound(*ball, x, y));
  }
  return lower;
}

ShortArcResult qh_shortest_arc(const Domain& domain, const PathGraph& graph, const Point& x, const Point& y,
                               const ShortArcOptions& options) {
  require_finite(x, "qh_shortest_arc");
  require_finite(y, "qh_shortest_arc");
  if (!domain.contains(x) || !domain.contains(y)) {
    throw Error(ErrorCode::kInvalidInput, "qh_shortest_arc: endpoint outside the domain");
  }
  ShortArcResult result;
  if (x == y) {
    result.arc = ArcPolyline::single(x);
    return result;
  }
  const double tol = std::max(options.quadrature_tol, options.search_tol);
  const PathGraph::Impl& g = graph.impl();

  std::optional<std::vector<Point>> start;
  double start_len = std::numeric_limits<double>::infinity();
  if (domain.segment_inside(x, y)) {
    start = std::vector<Point>{x, y};
    start_len = seg_len(domain, x, y, tol);
  }
  const auto sx = snap_endpoint(domain, g, x);
  const auto sy = snap_endpoint(domain, g, y);
  if (sx && sy) {
    const auto search = detail::dijkstra(g.csr, *sx, *sy);
    const auto ids = detail::extract_path(search, *sx, *sy);
    if (!ids.empty()) {
      std::vector<Point> path{x};
      for (const std::uint32_t id : ids) {
        if (!(g.nodes[id] == path.back())) path.push_back(g.nodes[id]);
      }
      if (!(path.back() == y)) path.push_back(y);
      path = pull_qh(domain, path, tol);
      double len = 0.0;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) len += seg_len(domain, path[i], path[i + 1], tol);
      if (len < start_len) {
        start = std::move(path);
        start_len = len;
        result.snap_distance = std::max(distance(x, g.nodes[*sx]), distance(y, g.nodes[*sy]));
      }
    }
  }
  if (!start) throw Error(ErrorCode::kNotConnected, "no graph path joins the endpoints");

  // Coarse-to-fine: descent on few vertices moves the arc globally, and each
  // halving of the segment target only needs local corrections.
  std::vector<Point> pts = std::move(*start);
  double target = std::max(options.segment_target, kCoarseSegmentTarget);
  subdivide(domain, pts, target, tol);
  for (int level = 0; level < kMaxLevels; ++level) {
    ArcPolyline shortened = shorten_arc(domain, ArcPolyline(std::move(pts)), options.sweeps_per_level, tol);
    pts.assign(shortened.vertices().begin(), shortened.vertices().end());
    if (target == options.segment_target) break;
    target = std::max(options.segment_target, 0.5 * target);
    subdivide(domain, pts, target, tol);
  }
  // Vertices drift apart during the last descent; splitting a straight
  // segment leaves its length unchanged.
  subdivide(domain, pts, options.segment_target, tol);
  result.arc = ArcPolyline(std::move(pts));
  result.upper = qh_polyline_length(domain, result.arc, options.quadrature_tol).upper();
  result.lower = certified_lower_bound(domain, x, y);
  result.epsilon_hat = std::max(0.0, result.upper - result.lower);
  return result;
}

double GraphDistance::operator()(const Point& a, const Point& b) const {
  const Point pts[2] = {a, b};
  return matrix(pts)[1];
}

std::vector<double> GraphDistance::matrix(std::span<const Point> points) const {
  const PathGraph::Impl& g = graph_.impl();
  const std::size_t m = points.size();
  std::vector<std::uint32_t> snapped(m);
  std::vector<double> lead(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto s = snap_endpoint(domain_, g, points[i]);
    if (!s) throw Error(ErrorCode::kNotConnected, "point has no visible graph node nearby");
    snapped[i] = *s;
    lead[i] = seg_len(domain_, points[i], g.nodes[*s], 1e-6);
  }
  std::vector<double> k(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto search = detail::dijkstra(g.csr, snapped[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      double d = lead[i] + search.dist[snapped[j]] + lead[j];
      if (domain_.segment_inside(points[i], points[j])) {
        d = std::min(d, seg_len(domain_, points[i], points[j], 1e-6));
      }
      if (!std::isfinite(d)) throw Error(ErrorCode::kNotConnected, "points lie in different graph components");
      k[i * m + j] = k[j * m + i] = d;
    }
  }
  return k;
}

void save_path_graph(const PathGraph& graph, const Domain& domain, const std::string& path) {
  nlohmann::json j;
  j["resolution"] = graph.resolution();
  j["seed"] = graph.seed();
  j["domain_hash"] = domain_hash(domain);
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const Point& p : graph.nodes()) nodes.push_back(point_to_json(p));
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const GraphEdge& e : graph.edges()) edges.push_back({e.a, e.b, e.weight});
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write graph cache " + path);
  out << j.dump();
  if (!out) throw Error(ErrorCode::kIo, "failed writing graph cache " + path);
}

PathGraph load_path_graph(const Domain& domain, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read graph cache " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, "malformed graph cache " + path + ": " + e.what());
  }
  if (j.at("domain_hash").get<std::uint64_t>() != domain_hash(domain)) {
    throw Error(ErrorCode::kIo, "graph cache " + path + " was built for a different domain");
  }
  const double res = j.at("resolution").get<double>();
  auto impl = std::make_shared<PathGraph::Impl>(domain.window(), res, domain.dim());
  impl->resolution = res;
  impl->seed = j.at("seed").get<std::uint64_t>();
  for (const auto& p : j.at("nodes")) {
    impl->nodes.push_back(point_from_json(p));
    impl->lattice.insert(impl->lattice.nearest_key(impl->nodes.back()),
                         static_cast<std::uint32_t>(impl->nodes.size() - 1));
  }
  for (const auto& e : j.at("edges")) {
    impl->edges.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(), e.at(2).get<double>()});
  }
  finish(*impl);
  return make_path_graph(std::move(impl));
}

}  // namespace qhkit
