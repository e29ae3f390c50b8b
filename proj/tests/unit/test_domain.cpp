#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qhkit/domain.hpp"
#include "qhkit/error.hpp"
#include "qhkit/json_io.hpp"
#include "qhkit/rng.hpp"

namespace qhkit {
namespace {

const Point kOrigin{0.0, 0.0};

TEST(BoundaryDistance, BallCentre) { EXPECT_DOUBLE_EQ(Domain::ball(kOrigin, 1.0).boundary_distance(kOrigin), 1.0); }

TEST(BoundaryDistance, PuncturedBall) {
  const Domain d = Domain::punctured_ball(kOrigin, 1.0, kOrigin);
  EXPECT_NEAR(d.boundary_distance(Point{0.3, 0.0}), 0.3, 1e-15);
  EXPECT_NEAR(d.boundary_distance(Point{0.8, 0.0}), 0.2, 1e-15);
  EXPECT_FALSE(d.contains(kOrigin));
}

TEST(BoundaryDistance, SlitDiskMatchesDenseBoundary) {
  const Domain d = Domain::slit_disk(kOrigin, 1.0, kOrigin, Point{1.0, 0.0});
  auto cloud = oracle::circle_points(kOrigin, 1.0, 20000);
  const auto slit = oracle::segment_points(kOrigin, Point{1.0, 0.0}, 5000);
  cloud.insert(cloud.end(), slit.begin(), slit.end());
  EXPECT_NEAR(d.boundary_distance(Point{-0.5, 0.0}), 0.5, 1e-12);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Point p = rng.in_box(Point{-0.99, -0.99}, Point{0.99, 0.99});
    if (std::hypot(p[0], p[1]) >= 1.0) continue;
    EXPECT_NEAR(d.boundary_distance(p), oracle::min_distance(p, cloud), 2.0 * (2.0 * std::numbers::pi / 20000));
  }
}

TEST(BoundaryDistance, ExteriorIsNonPositive) {
  EXPECT_LE(Domain::ball(kOrigin, 1.0).boundary_distance(Point{2.0, 0.0}), 0.0);
  const Domain h = Domain::upper_half_plane(Box{Point{-1.0, 0.0}, Point{1.0, 1.0}});
  EXPECT_LE(h.boundary_distance(Point{0.0, -0.5}), 0.0);
}

TEST(BoundaryDistance, NanIsInvalidInput) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  try {
    d.boundary_distance(Point{std::nan(""), 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(Contains, Examples) {
  EXPECT_FALSE(Domain::ball(kOrigin, 1.0).contains(Point{2.0, 0.0}));
  EXPECT_FALSE(Domain::slit_disk(kOrigin, 1.0, kOrigin, Point{1.0, 0.0}).contains(Point{0.5, 0.0}));
  EXPECT_TRUE(Domain::upper_half_plane(Box{Point{-10.0, 0.0}, Point{10.0, 2.0}}).contains(Point{5.0, 0.1}));
}

TEST(Contains, CustomPolygonSquare) {
  const Domain d = Domain::custom_polygon({Point{0.0, 0.0}, Point{1.0, 0.0}, Point{1.0, 1.0}, Point{0.0, 1.0}}, 0.01);
  EXPECT_TRUE(d.contains(Point{0.5, 0.5}));
  EXPECT_FALSE(d.contains(Point{1.5, 0.5}));
  EXPECT_NEAR(d.boundary_distance(Point{0.5, 0.5}), 0.5, d.distance_error() + 1e-12);
  EXPECT_NEAR(d.boundary_distance(Point{0.2, 0.5}), 0.2, d.distance_error() + 1e-12);
}

TEST(SegmentInside, SlitBlocksCrossing) {
  const Domain d = Domain::slit_disk(kOrigin, 1.0, kOrigin, Point{1.0, 0.0});
  EXPECT_FALSE(d.segment_inside(Point{0.5, 0.1}, Point{0.5, -0.1}));
  EXPECT_TRUE(d.segment_inside(Point{-0.5, 0.1}, Point{-0.5, -0.1}));
}

TEST(SampleInterior, EmptyRequest) { EXPECT_TRUE(sample_interior(Domain::ball(kOrigin, 1.0), 0, 1, 0.01).empty()); }

TEST(SampleInterior, Deterministic) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const auto a = sample_interior(d, 50, 9, 0.01);
  const auto b = sample_interior(d, 50, 9, 0.01);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(SampleInterior, RespectsFloor) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const auto pts = sample_interior(d, 100, 4, 0.05);
  ASSERT_EQ(pts.size(), 100u);
  for (const Point& p : pts) EXPECT_GE(d.boundary_distance(p), 0.05);
}

TEST(SampleInterior, ExhaustedWhenFloorUnreachable) {
  try {
    sample_interior(Domain::ball(kOrigin, 1.0), 10, 1, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSamplingExhausted);
  }
}

TEST(EuclideanArc, ConvexBallIsNearlyStraight) {
  const Domain d = Domain::ball(kOrigin, 1.0);
  const EuclideanArc e = euclidean_shortest_arc(d, Point{-0.5, 0.0}, Point{0.5, 0.0}, 0.05);
  EXPECT_GE(e.length, 1.0 - 1e-12);
  EXPECT_LE(e.length, 1.01);
}

TEST(EuclideanArc, CoincidentEndpoints) {
  const EuclideanArc e = euclidean_shortest_arc(Domain::ball(kOrigin, 1.0), Point{0.1, 0.1}, Point{0.1, 0.1}, 0.05);
  EXPECT_EQ(e.arc.size(), 1u);
  EXPECT_EQ(e.length, 0.0);
}

TEST(EuclideanArc, SlitForcesDetourAroundTip) {
  const Domain d = Domain::slit_disk(kOrigin, 1.0, kOrigin, Point{1.0, 0.0});
  const EuclideanArc e = euclidean_shortest_arc(d, Point{0.5, 0.01}, Point{0.5, -0.01}, 0.01);
  EXPECT_GE(e.length, 1.0);
  for (std::size_t i = 0; i + 1 < e.arc.size(); ++i) EXPECT_TRUE(d.segment_inside(e.arc[i], e.arc[i + 1]));
}

TEST(EuclideanArc, LengthAtLeastChord) {
  const Domain d = Domain::punctured_ball(kOrigin, 1.0, kOrigin);
  const auto pts = sample_interior(d, 20, 12, 0.05);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const EuclideanArc e = euclidean_shortest_arc(d, pts[i], pts[i + 1], 0.05);
    EXPECT_GE(e.length, distance(pts[i], pts[i + 1]) - 1e-12);
  }
}

TEST(DomainJson, RoundTrip) {
  const nlohmann::json spec = {{"kind", "slit_disk"},
                               {"params", {{"center", {0.0, 0.0}}, {"radius", 1.0}, {"slit", {{0.0, 0.0}, {1.0, 0.0}}}}},
                               {"delta_floor", 0.002}};
  const Domain d = domain_from_json(spec);
  EXPECT_EQ(d.kind_name(), "slit_disk");
  EXPECT_DOUBLE_EQ(d.delta_floor(), 0.002);
  const Domain again = domain_from_json(domain_to_json(d));
  EXPECT_EQ(domain_hash(d), domain_hash(again));
}

TEST(DomainJson, UnknownKindIsConfigurationError) {
  try {
    domain_from_json({{"kind", "torus"}, {"params", nlohmann::json::object()}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
  }
}

}  // namespace
}  // namespace qhkit
