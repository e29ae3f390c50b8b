#include "qhkit/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qhkit/rng.hpp"

namespace qhkit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Closest distance between segments [p1,q1] and [p2,q2] (any dimension).
double segment_segment_distance(const Point& p1, const Point& q1, const Point& p2,
                                const Point& q2) {
  const Point d1 = q1 - p1;
  const Point d2 = q2 - p2;
  const Point r = p1 - p2;
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);
  double s = 0.0;
  double t = 0.0;
  if (a == 0.0 && e == 0.0) return distance(p1, p2);
  if (a == 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e == 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return distance(p1 + d1 * s, p2 + d2 * t);
}

double cross2(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

// Closed-segment intersection test in the plane (touching counts).
bool segments_intersect_2d(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = cross2(d - c, a - c);
  const double d2 = cross2(d - c, b - c);
  const double d3 = cross2(b - a, c - a);
  const double d4 = cross2(b - a, d - a);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](const Point& p, const Point& q, const Point& r) {
    return std::min(p[0], q[0]) <= r[0] && r[0] <= std::max(p[0], q[0]) &&
           std::min(p[1], q[1]) <= r[1] && r[1] <= std::max(p[1], q[1]);
  };
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

bool inside_polygon(const std::vector<Point>& loop, const Point& p) {
  bool inside = false;
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = loop[i];
    const Point& b = loop[j];
    if ((a[1] > p[1]) != (b[1] > p[1])) {
      const double x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (p[0] < x) inside = !inside;
    }
  }
  return inside;
}

Box ball_box(const Point& c, double r) {
  Box box{c, c};
  for (std::size_t i = 0; i < c.dim(); ++i) {
    box.lo[i] -= r;
    box.hi[i] += r;
  }
  return box;
}

void check_dim(const Point& p, std::size_t dim, const char* what) {
  if (p.dim() != dim) throw Error(ErrorCode::kInvalidInput, std::string(what) + ": dimension mismatch");
}

}  // namespace

bool Box::contains(const Point& p) const noexcept {
  for (std::size_t i = 0; i < lo.dim(); ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

Domain::Domain(DomainKind kind, std::optional<Box> window, double delta_floor)
    : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [&](const Ball& b) {
                   dim_ = b.center.dim();
                   if (!(b.radius > 0.0)) throw Error(ErrorCode::kInvalidInput, "ball radius must be positive");
                   scale_ = b.radius;
                   window_ = ball_box(b.center, b.radius);
                 },
                 [&](const HalfSpace& h) {
                   dim_ = h.dim;
                   if (h.dim < 2 || h.dim > kMaxDim || h.axis >= h.dim) {
                     throw Error(ErrorCode::kInvalidInput, "half-space axis/dimension out of range");
                   }
                   window_ = Box{Point::zero(h.dim), Point::zero(h.dim)};
                   for (std::size_t i = 0; i < h.dim; ++i) {
                     window_.lo[i] = i == h.axis ? h.offset : -1.0;
                     window_.hi[i] = i == h.axis ? h.offset + 2.0 : 1.0;
                   }
                 },
                 [&](const PuncturedBall& b) {
                   dim_ = b.center.dim();
                   check_dim(b.puncture, dim_, "puncture");
                   if (!(b.radius > 0.0)) throw Error(ErrorCode::kInvalidInput, "ball radius must be positive");
                   scale_ = b.radius;
                   window_ = ball_box(b.center, b.radius);
                 },
                 [&](const SlitDisk& s) {
                   dim_ = s.center.dim();
                   check_dim(s.slit_a, dim_, "slit");
                   check_dim(s.slit_b, dim_, "slit");
                   if (!(s.radius > 0.0)) throw Error(ErrorCode::kInvalidInput, "disk radius must be positive");
                   scale_ = s.radius;
                   window_ = ball_box(s.center, s.radius);
                 },
                 [&](CustomPolygon& c) {
                   if (c.loop.size() < 3) throw Error(ErrorCode::kInvalidInput, "polygon needs >= 3 vertices");
                   if (!(c.spacing > 0.0)) throw Error(ErrorCode::kInvalidInput, "cloud spacing must be positive");
                   dim_ = 2;
                   window_ = Box{c.loop.front(), c.loop.front()};
                   for (const Point& p : c.loop) {
                     check_dim(p, 2, "polygon vertex (custom domains are planar)");
                     for (std::size_t i = 0; i < 2; ++i) {
                       window_.lo[i] = std::min(window_.lo[i], p[i]);
                       window_.hi[i] = std::max(window_.hi[i], p[i]);
                     }
                   }
                   c.cloud.clear();
                   for (std::size_t i = 0; i < c.loop.size(); ++i) {
                     const Point& a = c.loop[i];
                     const Point& b = c.loop[(i + 1) % c.loop.size()];
                     const auto pieces = static_cast<std::size_t>(
                         std::max(1.0, std::ceil(distance(a, b) / c.spacing)));
                     for (std::size_t k = 0; k < pieces; ++k) {
                       c.cloud.push_back(lerp(a, b, static_cast<double>(k) / static_cast<double>(pieces)));
                     }
                   }
                   scale_ = 0.5 * window_.diagonal();
                 },
             },
             kind_);
  if (window) {
    check_dim(window->lo, dim_, "window");
    check_dim(window->hi, dim_, "window");
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!(window->lo[i] < window->hi[i])) throw Error(ErrorCode::kInvalidInput, "empty window");
    }
    window_ = *window;
  }
  if (std::holds_alternative<HalfSpace>(kind_)) scale_ = 0.5 * window_.diagonal();
  delta_floor_ = delta_floor > 0.0 ? delta_floor : 1e-3 * scale_;
}

Domain Domain::ball(const Point& center, double radius) { return Domain(Ball{center, radius}); }

Domain Domain::half_space(std::size_t dim, std::size_t axis, double offset, const Box& window) {
  return Domain(HalfSpace{dim, axis, offset}, window);
}

Domain Domain::upper_half_plane(const Box& window) { return half_space(2, 1, 0.0, window); }

Domain Domain::punctured_ball(const Point& center, double radius, const Point& puncture) {
  return Domain(PuncturedBall{center, radius, puncture});
}

Domain Domain::slit_disk(const Point& center, double radius, const Point& a, const Point& b) {
  return Domain(SlitDisk{center, radius, a, b});
}

Domain Domain::custom_polygon(std::vector<Point> loop, double spacing) {
  return Domain(CustomPolygon{std::move(loop), spacing, {}});
}

std::string Domain::kind_name() const {
  return std::visit(Overloaded{
                        [](const Ball&) { return std::string("ball"); },
                        [](const HalfSpace&) { return std::string("halfspace"); },
                        [](const PuncturedBall&) { return std::string("punctured_ball"); },
                        [](const SlitDisk&) { return std::string("slit_disk"); },
                        [](const CustomPolygon&) { return std::string("custom"); },
                    },
                    kind_);
}

double Domain::boundary_distance(const Point& p) const {
  require_finite(p, "boundary_distance");
  if (p.dim() != dim_) throw Error(ErrorCode::kInvalidInput, "boundary_distance: dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const Ball& b) { return b.radius - distance(p, b.center); },
          [&](const HalfSpace& h) { return p[h.axis] - h.offset; },
          [&](const PuncturedBall& b) {
            const double to_sphere = b.radius - distance(p, b.center);
            if (to_sphere <= 0.0) return to_sphere;
            return std::min(to_sphere, distance(p, b.puncture));
          },
          [&](const SlitDisk& s) {
            const double to_circle = s.radius - distance(p, s.center);
            if (to_circle <= 0.0) return to_circle;
            return std::min(to_circle, distance_to_segment(p, s.slit_a, s.slit_b));
          },
          [&](const CustomPolygon& c) {
            double d = std::numeric_limits<double>::infinity();
            for (const Point& q : c.cloud) d = std::min(d, distance(p, q));
            return inside_polygon(c.loop, p) ? d : -d;
          },
      },
      kind_);
}

bool Domain::segment_inside(const Point& a, const Point& b) const {
  if (!contains(a) || !contains(b)) return false;
  const double eps = 1e-12 * scale_;
  return std::visit(Overloaded{
                        [](const Ball&) { return true; },
                        [](const HalfSpace&) { return true; },
                        [&](const PuncturedBall& pb) {
                          return distance_to_segment(pb.puncture, a, b) > eps;
                        },
                        [&](const SlitDisk& s) {
                          return segment_segment_distance(a, b, s.slit_a, s.slit_b) > eps;
                        },
                        [&](const CustomPolygon& c) {
                          const std::size_t n = c.loop.size();
                          for (std::size_t i = 0; i < n; ++i) {
                            if (segments_intersect_2d(a, b, c.loop[i], c.loop[(i + 1) % n])) return false;
                          }
                          return true;
                        },
                    },
                    kind_);
}

double Domain::distance_error() const noexcept {
  if (const auto* c = std::get_if<CustomPolygon>(&kind_)) return 0.5 * c->spacing;
  return 0.0;
}

std::optional<Ball> Domain::enclosing_ball() const {
  return std::visit(Overloaded{
                        [](const Ball& b) -> std::optional<Ball> { return b; },
                        [](const HalfSpace&) -> std::optional<Ball> { return std::nullopt; },
                        [](const PuncturedBall& b) -> std::optional<Ball> { return Ball{b.center, b.radius}; },
                        [](const SlitDisk& s) -> std::optional<Ball> { return Ball{s.center, s.radius}; },
                        [](const CustomPolygon&) -> std::optional<Ball> { return std::nullopt; },
                    },
                    kind_);
}

double boundary_distance(const Domain& domain, const Point& p) { return domain.boundary_distance(p); }

bool contains(const Domain& domain, const Point& p) { return domain.contains(p); }

std::vector<Point> sample_interior(const Domain& domain, std::size_t n, std::uint64_t seed,
                                   double floor) {
  if (floor < domain.delta_floor()) {
    throw Error(ErrorCode::kInvalidInput, "sampling floor below the domain's delta_floor");
  }
  constexpr std::uint64_t kMinTrials = 100000;
  constexpr double kMinRate = 1e-4;
  std::vector<Point> out;
  out.reserve(n);
  Rng rng(seed);
  std::uint64_t trials = 0;
  while (out.size() < n) {
    const Point p = rng.in_box(domain.window().lo, domain.window().hi);
    ++trials;
    if (domain.boundary_distance(p) >= floor) out.push_back(p);
    if (trials >= kMinTrials &&
        static_cast<double>(out.size()) < kMinRate * static_cast<double>(trials)) {
      throw Error(ErrorCode::kSamplingExhausted,
                  "acceptance rate below 1e-4 after " + std::to_string(trials) + " trials");
    }
  }
  return out;
}

}  // namespace qhkit
