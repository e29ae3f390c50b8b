#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "oracles.hpp"
#include "qhkit/error.hpp"
#include "qhkit/qh_metric.hpp"
#include "qhkit/qh_paths.hpp"
#include "qhkit/rng.hpp"

namespace qhkit {
namespace {

const Point kOrigin{0.0, 0.0};

Domain half_plane() { return Domain::upper_half_plane(Box{Point{-2.0, 0.0}, Point{2.0, 3.0}}); }

// Hyperbolic distance in the unit disk; k lies in [rho / 2, rho] there.
double disk_rho(const Point& x, const Point& y) {
  const double d2 = distance(x, y) * distance(x, y);
  const double nx = 1.0 - dot(x, x);
  const double ny = 1.0 - dot(y, y);
  return std::acosh(1.0 + 2.0 * d2 / (nx * ny));
}

TEST(PathGraph, UnitSquareWindow) {
  const Domain d = Domain::upper_half_plane(Box{Point{0.0, 0.0}, Point{1.0, 1.0}});
  const PathGraph g = build_path_graph(d, 0.1, 0);
  EXPECT_GE(g.nodes().size(), 100u);
  EXPECT_EQ(g.component_count(), 1u);
}

TEST(PathGraph, DeterministicForSameSeed) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const PathGraph a = build_path_graph(d, 0.2, 4);
  const PathGraph b = build_path_graph(d, 0.2, 4);
  ASSERT_EQ(a.nodes().size(), b.nodes().size());
  ASSERT_EQ(a.edges().size(), b.edges().size());
  for (std::size_t i = 0; i < a.nodes().size(); ++i) EXPECT_EQ(a.nodes()[i], b.nodes()[i]);
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    EXPECT_EQ(a.edges()[i].a, b.edges()[i].a);
    EXPECT_EQ(a.edges()[i].b, b.edges()[i].b);
    EXPECT_EQ(a.edges()[i].weight, b.edges()[i].weight);
  }
}

TEST(PathGraph, EdgesStayInsideAndAvoidSlit) {
  const Domain d = Domain::slit_disk(kOrigin, 1.0, kOrigin, Point{1.0, 0.0});
  const PathGraph g = build_path_graph(d, 0.1, 0);
  for (const GraphEdge& e : g.edges()) {
    const Point& a = g.nodes()[e.a];
    const Point& b = g.nodes()[e.b];
    EXPECT_TRUE(d.segment_inside(a, b));
    EXPECT_GT(e.weight, 0.0);
    // Crossing the slit means changing the sign of y on x in (0, 1].
    if (a[1] * b[1] < 0.0) {
      const double t = a[1] / (a[1] - b[1]);
      EXPECT_LT(a[0] + t * (b[0] - a[0]), 0.0);
    }
  }
}

TEST(PathGraph, ResolutionTooFine) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  try {
    build_path_graph(d, d.delta_floor(), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(ShortestArc, HalfSpaceVertical) {
  const Domain d = half_plane();
  const PathGraph g = build_path_graph(d, 0.05, 0);
  const ShortArcResult r = qh_shortest_arc(d, g, Point{0.0, 1.0}, Point{0.0, std::numbers::e});
  EXPECT_GE(r.upper, 1.0 - 1e-9);
  EXPECT_LE(r.upper, 1.02);
  EXPECT_NEAR(r.lower, 1.0, 1e-12);
  EXPECT_LE(r.epsilon_hat, 0.02);
}

TEST(ShortestArc, CoincidentEndpoints) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const PathGraph g = build_path_graph(d, 0.1, 0);
  const ShortArcResult r = qh_shortest_arc(d, g, Point{0.2, 0.2}, Point{0.2, 0.2});
  EXPECT_EQ(r.arc.size(), 1u);
  EXPECT_EQ(r.upper, 0.0);
  EXPECT_EQ(r.lower, 0.0);
  EXPECT_EQ(r.epsilon_hat, 0.0);
}

TEST(ShortestArc, BallRadial) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const PathGraph g = build_path_graph(d, 0.05, 0);
  const ShortArcResult r = qh_shortest_arc(d, g, kOrigin, Point{0.5, 0.0});
  EXPECT_GE(r.upper, std::log(2.0) - 1e-9);
  EXPECT_LE(r.upper, 1.02 * std::log(2.0));
  EXPECT_NEAR(r.lower, std::log(2.0), 1e-12);
  EXPECT_LE(r.epsilon_hat, 0.02 * std::log(2.0));
}

TEST(ShortestArc, ExteriorEndpoint) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const PathGraph g = build_path_graph(d, 0.1, 0);
  try {
    qh_shortest_arc(d, g, kOrigin, Point{1.5, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(ShortestArcProperty, HalfSpaceBracketAndSubarcs) {
  const Domain d = half_plane();
  const PathGraph g = build_path_graph(d, 0.04, 0);
  Rng rng(31);
  for (int i = 0; i < 15; ++i) {
    const Point x = rng.in_box(Point{-1.5, 0.1}, Point{1.5, 2.0});
    const Point y = rng.in_box(Point{-1.5, 0.1}, Point{1.5, 2.0});
    const ShortArcResult r = qh_shortest_arc(d, g, x, y);
    const double k = oracle::halfplane_distance(x, y);
    EXPECT_NEAR(r.lower, k, 1e-12 * std::max(1.0, k));
    EXPECT_GE(r.upper, k * (1.0 - 1e-12));
    EXPECT_LE(r.upper, 1.02 * k);
    EXPECT_GE(r.lower, growth_lower_bound(distance(x, y), std::min(x[1], y[1])) - 1e-12);
    for (std::size_t a = 0; a + 1 < r.arc.size(); a += 3) {
      for (std::size_t b = a + 1; b < r.arc.size(); b += 4) {
        const ArcPolyline sub = r.arc.subarc(a, b);
        const double eps = qh_polyline_length(d, sub).upper() - oracle::halfplane_distance(sub.front(), sub.back());
        EXPECT_LE(eps, r.epsilon_hat + 1e-6);
      }
    }
  }
}

TEST(ShortestArcProperty, DiskLowerBoundIsCertified) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const PathGraph g = build_path_graph(d, 0.05, 0);
  const auto pts = sample_interior(d, 20, 3, 0.02);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const ShortArcResult r = qh_shortest_arc(d, g, pts[i], pts[i + 1]);
    const double rho = disk_rho(pts[i], pts[i + 1]);
    EXPECT_LE(r.lower, std::min(r.upper, rho) + 1e-12);
    EXPECT_GE(r.lower, 0.5 * rho - 1e-12);
    EXPECT_LE(r.upper, 1.02 * rho);
  }
}

// Local bracket with c = 1: for |x - y| <= delta(x) / 3 the distance is bracketed by
// t / 2 and 3t, t = |x - y| / delta(x).
TEST(ShortestArcProperty, LocalBracket) {
  const Domain d = Domain::punctured_ball(kOrigin, 1.0, kOrigin);
  const PathGraph g = build_path_graph(d, 0.05, 0);
  const auto xs = sample_interior(d, 30, 14, 0.02);
  Rng rng(15);
  for (const Point& x : xs) {
    const double dx = d.boundary_distance(x);
    const Point y = x + rng.direction(2) * (rng.uniform(0.01, 1.0) * dx / 3.0);
    const ShortArcResult r = qh_shortest_arc(d, g, x, y);
    const double t = distance(x, y) / dx;
    EXPECT_GE(r.lower * 1.05 + 1e-6, 0.5 * t);
    EXPECT_LE(r.upper, 3.0 * t * 1.05 + 1e-6);
  }
}

TEST(ShortestArcProperty, RefinementDoesNotLengthen) {
  const Domain d = half_plane();
  const PathGraph coarse = build_path_graph(d, 0.08, 0);
  const PathGraph fine = build_path_graph(d, 0.04, 0);
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const Point x = rng.in_box(Point{-1.5, 0.1}, Point{1.5, 2.0});
    const Point y = rng.in_box(Point{-1.5, 0.1}, Point{1.5, 2.0});
    const double k = oracle::halfplane_distance(x, y);
    const double a = qh_shortest_arc(d, coarse, x, y).upper;
    const double b = qh_shortest_arc(d, fine, x, y).upper;
    // Both runs descend to the same geodesic; the finer start may only win.
    EXPECT_LE(b, a + 1e-3 * k);
  }
}

TEST(ShortenArc, GeodesicUnchanged) {
  const Domain d = half_plane();
  const ArcPolyline arc({Point{0.0, 0.5}, Point{0.0, 1.0}, Point{0.0, 2.0}});
  const double before = qh_polyline_length(d, arc).value;
  const double after = qh_polyline_length(d, shorten_arc(d, arc, 100)).value;
  EXPECT_NEAR(after, before, 1e-8);
  EXPECT_NEAR(after, std::log(4.0), 1e-8);
}

TEST(ShortenArc, DetourShrinks) {
  const Domain d = half_plane();
  const ArcPolyline arc({Point{0.0, 1.0}, Point{0.5, 2.0}, Point{1.0, 1.0}});
  const ArcPolyline out = shorten_arc(d, arc, 50);
  EXPECT_LT(qh_polyline_length(d, out).value, qh_polyline_length(d, arc).value);
  EXPECT_EQ(out.front(), arc.front());
  EXPECT_EQ(out.back(), arc.back());
}

TEST(ShortenArc, ZeroIterationsIsIdentity) {
  const Domain d = half_plane();
  const ArcPolyline arc({Point{0.0, 1.0}, Point{0.5, 2.0}, Point{1.0, 1.0}});
  const ArcPolyline out = shorten_arc(d, arc, 0);
  ASSERT_EQ(out.size(), arc.size());
  for (std::size_t i = 0; i < arc.size(); ++i) EXPECT_EQ(out[i], arc[i]);
}

TEST(ShortenArcProperty, NeverLengthensAndStaysInside) {
  const Domain d = Domain::slit_disk(kOrigin, 1.0, kOrigin, Point{1.0, 0.0});
  const ArcPolyline arc({Point{0.5, 0.2}, Point{0.1, 0.5}, Point{-0.3, 0.1}, Point{-0.2, -0.4}, Point{0.5, -0.2}});
  const ArcPolyline out = shorten_arc(d, arc, 200);
  EXPECT_LE(qh_polyline_length(d, out).value, qh_polyline_length(d, arc).value);
  for (std::size_t i = 0; i + 1 < out.size(); ++i) EXPECT_TRUE(d.segment_inside(out[i], out[i + 1]));
}

TEST(GraphDistance, UpperBoundOnHalfSpace) {
  const Domain d = half_plane();
  const GraphDistance k(d, build_path_graph(d, 0.05, 0));
  Rng rng(2);
  for (int i = 0; i < 30; ++i) {
    const Point x = rng.in_box(Point{-1.5, 0.1}, Point{1.5, 2.0});
    const Point y = rng.in_box(Point{-1.5, 0.1}, Point{1.5, 2.0});
    const double truth = oracle::halfplane_distance(x, y);
    const double v = k(x, y);
    EXPECT_GE(v, truth * (1.0 - 1e-9));
    EXPECT_LE(v, 1.25 * truth + 0.1);
  }
}

TEST(GraphDistance, MatrixAgreesWithPairs) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const GraphDistance k(d, build_path_graph(d, 0.1, 0));
  const auto pts = sample_interior(d, 6, 1, 0.05);
  const auto m = k.matrix(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(m[i * pts.size() + i], 0.0);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      EXPECT_EQ(m[i * pts.size() + j], m[j * pts.size() + i]);
      if (i != j) EXPECT_NEAR(m[i * pts.size() + j], k(pts[i], pts[j]), 1e-9 * m[i * pts.size() + j]);
    }
  }
}

TEST(GraphCache, RoundTripAndDomainCheck) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const PathGraph g = build_path_graph(d, 0.2, 3);
  const auto path = (std::filesystem::temp_directory_path() / "qhkit_graph_cache_test.json").string();
  save_path_graph(g, d, path);
  const PathGraph back = load_path_graph(d, path);
  ASSERT_EQ(back.nodes().size(), g.nodes().size());
  ASSERT_EQ(back.edges().size(), g.edges().size());
  EXPECT_EQ(back.seed(), 3u);
  EXPECT_EQ(back.resolution(), 0.2);
  const Point x{0.1, 0.3};
  const Point y{-0.4, -0.2};
  EXPECT_EQ(qh_shortest_arc(d, back, x, y).upper, qh_shortest_arc(d, g, x, y).upper);
  try {
    load_path_graph(Domain::ball(kOrigin, 2.0), path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace qhkit
