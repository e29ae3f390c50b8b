#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qhkit/error.hpp"
#include "qhkit/qh_metric.hpp"
#include "qhkit/rng.hpp"

namespace qhkit {
namespace {

const Domain kHalf = Domain::upper_half_plane(Box{Point{-4.0, 0.0}, Point{4.0, 8.0}});
const Domain kDisk = Domain::ball(Point{0.0, 0.0}, 1.0);

TEST(QhLength, HalfSpaceVerticalSegment) {
  const QhLengthResult r = qh_segment_length(kHalf, Point{0.0, 1.0}, Point{0.0, 2.0});
  EXPECT_NEAR(r.value, std::log(2.0), 1e-9 * std::log(2.0));
  EXPECT_GE(r.est_error, 0.0);
}

TEST(QhLength, BallRadialSegment) {
  const QhLengthResult r = qh_segment_length(kDisk, Point{0.0, 0.0}, Point{0.5, 0.0});
  EXPECT_NEAR(r.value, std::log(2.0), 1e-9 * std::log(2.0));
}

TEST(QhLength, SinglePointArc) {
  EXPECT_EQ(qh_polyline_length(kDisk, ArcPolyline::single(Point{0.2, 0.1})).value, 0.0);
}

TEST(QhLength, ObliqueSegmentMatchesSimpson) {
  const Point a{-0.3, 0.4};
  const Point b{0.6, -0.2};
  const double len = distance(a, b);
  const double ref = oracle::simpson(
      [&](double s) {
        const Point p = lerp(a, b, s);
        return len / (1.0 - std::hypot(p[0], p[1]));
      },
      0.0, 1.0, 20000);
  EXPECT_NEAR(qh_segment_length(kDisk, a, b, 1e-10).value, ref, 1e-9 * ref);
}

TEST(QhLength, ExitingSegmentThrows) {
  try {
    qh_segment_length(kDisk, Point{0.0, 0.0}, Point{2.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArcExitsDomain);
  }
}

TEST(QhLength, RejectsBadTolerance) {
  EXPECT_THROW(qh_segment_length(kDisk, Point{0.0, 0.0}, Point{0.5, 0.0}, 0.5), Error);
}

// The quasihyperbolic length of any polyline dominates the growth
// bound on its Euclidean length.
TEST(QhLengthProperty, GrowthBoundOnRandomPolylines) {
  Rng rng(21);
  for (const Domain* d : {&kDisk, &kHalf}) {
    const auto pts = sample_interior(*d, 300, 5, 0.01);
    for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
      if (!d->segment_inside(pts[i], pts[i + 1]) || !d->segment_inside(pts[i + 1], pts[i + 2])) continue;
      const ArcPolyline arc({pts[i], pts[i + 1], pts[i + 2]});
      const double dmin = std::min(d->boundary_distance(pts[i]), d->boundary_distance(pts[i + 2]));
      EXPECT_GE(qh_polyline_length(*d, arc).upper(), growth_lower_bound(arc.length(), dmin));
    }
  }
}

TEST(GrowthBound, Examples) {
  EXPECT_EQ(growth_lower_bound(0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(growth_lower_bound(0.3, 0.3), std::log(2.0));
  EXPECT_NEAR(growth_lower_bound(3.0, 1.0), std::log(4.0), 1e-15);
  EXPECT_THROW(growth_lower_bound(1.0, 0.0), Error);
}

TEST(HalfSpaceOracle, Examples) {
  EXPECT_NEAR(halfspace_qh_distance(Point{0.0, 1.0}, Point{0.0, std::numbers::e}), 1.0, 1e-14);
  EXPECT_EQ(halfspace_qh_distance(Point{0.3, 1.0}, Point{0.3, 1.0}), 0.0);
  EXPECT_NEAR(halfspace_qh_distance(Point{0.0, 1.0}, Point{3.0, 1.0}), std::acosh(5.5), 1e-14);
  EXPECT_NEAR(std::acosh(5.5), 2.3895, 1e-4);
  EXPECT_THROW(halfspace_qh_distance(Point{0.0, 0.0}, Point{1.0, 1.0}), Error);
}

TEST(HalfSpaceOracle, GrowthBoundBelowTrueDistance) {
  const Point x{0.0, 1.0};
  const Point y{3.0, 1.0};
  EXPECT_LT(growth_lower_bound(3.0, 1.0), halfspace_qh_distance(x, y));
}

TEST(HalfSpaceOracleProperty, SymmetryAndAgreementWithAcosh) {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const Point x = rng.in_box(Point{-3.0, 0.01}, Point{3.0, 3.0});
    const Point y = rng.in_box(Point{-3.0, 0.01}, Point{3.0, 3.0});
    const double k = halfspace_qh_distance(x, y);
    EXPECT_EQ(k, halfspace_qh_distance(y, x));
    EXPECT_NEAR(k, oracle::halfplane_distance(x, y), 1e-12 * std::max(1.0, k));
  }
}

TEST(HalfSpaceOracleProperty, TriangleInequality) {
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    const Point x = rng.in_box(Point{-3.0, 0.01}, Point{3.0, 3.0});
    const Point y = rng.in_box(Point{-3.0, 0.01}, Point{3.0, 3.0});
    const Point z = rng.in_box(Point{-3.0, 0.01}, Point{3.0, 3.0});
    EXPECT_LE(halfspace_qh_distance(x, z), halfspace_qh_distance(x, y) + halfspace_qh_distance(y, z) + 1e-12);
  }
}

TEST(HalfSpaceOracle, AxisAndOffset) {
  const HalfSpace h{3, 0, 1.0};
  EXPECT_NEAR(halfspace_qh_distance(h, Point{2.0, 0.0, 0.0}, Point{1.0 + std::numbers::e, 0.0, 0.0}), 1.0, 1e-14);
}

TEST(CoarseLength, ZeroCoarsenessEqualsLength) {
  const ArcPolyline arc({Point{0.0, 1.0}, Point{0.0, std::exp(2.0)}});
  const HalfSpaceOracle k(*kHalf.as_half_space());
  const CoarseLengthResult r = coarse_qh_length(kHalf, arc, 0.0, k);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  EXPECT_EQ(r.discretization, kDefaultCoarseDiscretization);
}

TEST(CoarseLength, OnlyEndpointPairAdmissible) {
  const ArcPolyline arc({Point{0.0, 1.0}, Point{0.0, std::exp(2.0)}});
  const HalfSpaceOracle k(*kHalf.as_half_space());
  EXPECT_NEAR(coarse_qh_length(kHalf, arc, 2.0, k).value, 2.0, 1e-9);
  EXPECT_EQ(coarse_qh_length(kHalf, arc, 3.0, k).value, 0.0);
}

TEST(CoarseLengthProperty, MonotoneInH) {
  const ArcPolyline arc({Point{-1.0, 0.5}, Point{0.0, 2.0}, Point{1.5, 0.3}});
  const HalfSpaceOracle k(*kHalf.as_half_space());
  const double full = qh_polyline_length(kHalf, arc).upper();
  double previous = INFINITY;
  for (double h = 0.0; h <= 4.0; h += 0.25) {
    const double v = coarse_qh_length(kHalf, arc, h, k).value;
    EXPECT_LE(v, previous + 1e-12);
    EXPECT_LE(v, full + 1e-9);
    previous = v;
  }
}

// Brute force over all subsequences of a short discretization.
TEST(CoarseTable, MatchesExhaustiveSearch) {
  constexpr std::size_t m = 9;
  Rng rng(17);
  std::vector<double> k(m * m, 0.0);
  std::vector<double> pos(m);
  for (std::size_t i = 0; i < m; ++i) pos[i] = i == 0 ? 0.0 : pos[i - 1] + rng.uniform(0.1, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) k[i * m + j] = std::abs(pos[i] - pos[j]) * (1.0 + 0.1 * std::sin(i + j));
  }
  for (const double h : {0.0, 0.3, 0.7, 1.5, 10.0}) {
    const CoarseTable table(k, m, h);
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask & (1u << i)) idx.push_back(i);
      }
      if (idx.size() < 2) continue;
      double s = 0.0;
      bool ok = true;
      for (std::size_t t = 1; t < idx.size(); ++t) {
        const double gap = k[idx[t - 1] * m + idx[t]];
        ok = ok && gap >= h;
        s += gap;
      }
      if (ok) best = std::max(best, s);
    }
    EXPECT_NEAR(table.value(0, m - 1), best, 1e-12) << "h = " << h;
  }
}

}  // namespace
}  // namespace qhkit
