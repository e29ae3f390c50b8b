#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "qhkit/conditions.hpp"
#include "qhkit/error.hpp"
#include "qhkit/rng.hpp"

namespace qhkit {
namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

const Point kOrigin{0.0, 0.0};
const Domain kDisk = Domain::ball(kOrigin, 1.0);
const Domain kHalf = Domain::upper_half_plane(Box{Point{-2.0, 0.0}, Point{2.0, 3.0}});

// Grid search of min(s, L - s) / delta along a parametrized segment.
double cone_by_grid(const Domain& d, const Point& a, const Point& b) {
  const double len = distance(a, b);
  double best = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double s = len * i / 100000.0;
    best = std::max(best, std::min(s, len - s) / d.boundary_distance(lerp(a, b, s / len)));
  }
  return best;
}

TEST(Cone, BallChord) {
  const Point a{-0.5, 0.0};
  const Point b{0.5, 0.0};
  const double truth = cone_by_grid(kDisk, a, b);
  EXPECT_NEAR(truth, 0.5, 1e-9);
  const double est = cone_constant(kDisk, ArcPolyline::segment(a, b), ArcMeasure::kLength);
  EXPECT_LE(est, truth + 1e-12);
  EXPECT_NEAR(est, truth, 1e-2);
}

TEST(Cone, HalfSpaceHorizontalSegment) {
  const double est = cone_constant(kHalf, ArcPolyline::segment(Point{0.0, 1.0}, Point{1.0, 1.0}), ArcMeasure::kLength);
  EXPECT_LE(est, 0.5 + 1e-12);
  EXPECT_NEAR(est, 0.5, 1e-2);
}

TEST(Cone, SinglePoint) {
  EXPECT_EQ(cone_constant(kDisk, ArcPolyline::single(kOrigin), ArcMeasure::kLength), 0.0);
}

TEST(Cone, ExitingArcThrows) {
  try {
    cone_constant(kDisk, ArcPolyline::segment(kOrigin, Point{1.5, 0.0}), ArcMeasure::kLength);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArcExitsDomain);
  }
}

TEST(Cone, MaxDeltaSplitOnChord) {
  // Splitting at the centre, diam(endpoint..u) / delta(u) peaks at u = centre.
  const double est =
      cone_constant(kDisk, ArcPolyline::segment(Point{-0.5, 0.0}, Point{0.5, 0.0}), ArcMeasure::kDiameter,
                    ConeSplit::kMaxDelta);
  EXPECT_NEAR(est, 0.5, 1e-2);
}

TEST(Cigar, Examples) {
  EXPECT_DOUBLE_EQ(cigar_constant(ArcPolyline::segment(kOrigin, Point{0.3, 0.4}), ArcMeasure::kLength), 1.0);
  const ArcPolyline bend({Point{0.0, 0.0}, Point{1.0, 0.0}, Point{1.0, 1.0}});
  EXPECT_NEAR(cigar_constant(bend, ArcMeasure::kLength), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(cigar_constant(bend, ArcMeasure::kDiameter), 1.0, 1e-15);
  try {
    cigar_constant(ArcPolyline({kOrigin, Point{1.0, 0.0}, kOrigin}), ArcMeasure::kLength);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedRatio);
  }
}

TEST(CigarProperty, LengthDominatesDiameter) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    std::vector<Point> v;
    for (int k = 0; k < 6; ++k) v.push_back(rng.in_box(Point{-1.0, -1.0}, Point{1.0, 1.0}));
    const ArcPolyline arc(v);
    EXPECT_GE(cigar_constant(arc, ArcMeasure::kLength), cigar_constant(arc, ArcMeasure::kDiameter) - 1e-12);
  }
}

TEST(Uniformity, BallStableAcrossResolutions) {
  const auto pts = sample_interior(kDisk, 200, 6, 0.02);
  std::vector<std::pair<Point, Point>> pairs;
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) pairs.emplace_back(pts[i], pts[i + 1]);
  const UniformityEstimate a = uniformity_estimate(kDisk, pairs, 0.1);
  const UniformityEstimate b = uniformity_estimate(kDisk, pairs, 0.05);
  EXPECT_EQ(a.estimate.samples, 100u);
  EXPECT_EQ(a.estimate.sidedness, Sidedness::kLowerEstimateOfSup);
  for (const auto* u : {&a, &b}) {
    EXPECT_GE(u->estimate.value, 1.0);
    EXPECT_LE(u->estimate.value, 3.0);
  }
  EXPECT_LE(std::abs(a.estimate.value - b.estimate.value), 0.15 * a.estimate.value);
}

TEST(Uniformity, SlitDiskGrowsLikeInverseGap) {
  const Domain d = Domain::slit_disk(kOrigin, 1.0, kOrigin, Point{1.0, 0.0});
  const PathGraph g = build_path_graph(d, 0.02, 0);
  for (const double t : {0.05, 0.02, 0.01}) {
    const std::pair<Point, Point> pair{Point{0.5, t}, Point{0.5, -t}};
    const UniformityEstimate u = uniformity_estimate(d, g, std::span(&pair, 1));
    ASSERT_TRUE(u.pairs.front().b.has_value()) << u.pairs.front().error;
    EXPECT_GE(u.estimate.value, 0.9 / (2.0 * t));
  }
}

TEST(Uniformity, CoincidentPairRecordedNotFatal) {
  const PathGraph g = build_path_graph(kDisk, 0.1, 0);
  const std::vector<std::pair<Point, Point>> pairs{{Point{0.1, 0.1}, Point{0.1, 0.1}}, {kOrigin, Point{0.5, 0.0}}};
  const UniformityEstimate u = uniformity_estimate(kDisk, g, pairs);
  ASSERT_EQ(u.pairs.size(), 2u);
  EXPECT_FALSE(u.pairs[0].b.has_value());
  EXPECT_FALSE(u.pairs[0].error.empty());
  EXPECT_TRUE(u.pairs[1].b.has_value());
}

TEST(Solidity, VerticalGeodesic) {
  const HalfSpaceOracle k(*kHalf.as_half_space());
  const ArcPolyline arc({Point{0.0, 0.1}, Point{0.0, 2.5}});
  for (const double h : {0.0, 0.5, 1.0, 2.0}) {
    const SolidityEstimate s = solidity_estimate(kHalf, arc, h, k);
    EXPECT_LE(s.nu_hat, 1.0 + 1e-3) << "h = " << h;
    EXPECT_GT(s.pairs_checked, 0u);
  }
}

TEST(Solidity, ShortArcHasNoCoarseFamily) {
  const HalfSpaceOracle k(*kHalf.as_half_space());
  const ArcPolyline arc({Point{0.0, 1.0}, Point{0.1, 1.0}});
  EXPECT_EQ(solidity_estimate(kHalf, arc, 1.0, k).nu_hat, 0.0);
}

TEST(Solidity, ShortHalfSpaceArc) {
  const HalfSpaceOracle k(*kHalf.as_half_space());
  const PathGraph g = build_path_graph(kHalf, 0.04, 0);
  const ShortArcResult r = qh_shortest_arc(kHalf, g, Point{-1.0, 0.3}, Point{1.2, 0.8});
  ASSERT_LE(r.epsilon_hat, 0.02 * r.lower);
  EXPECT_LE(solidity_estimate(kHalf, r.arc, 0.5, k).nu_hat, 1.03);
}

TEST(Mu1, Examples) {
  EXPECT_NEAR(mu1_bound(1.0, 1.0, 0.0, 3.0, 1.0), 6.0 * (std::exp(2.0) - 1.0), 1e-12);
  EXPECT_NEAR(mu1_bound(1.0, 1.0, 0.0, 3.0, 1.0), 38.3343, 1e-4);
  EXPECT_EQ(mu1_bound(1.0, 1.0, 0.0, 1.0, 0.0), 0.0);
  EXPECT_NEAR(mu1_bound(1.0, 2.0, 1.0, 1.0, 0.0), 2.0 * (std::numbers::e - 1.0), 1e-12);
}

TEST(UniformK, Examples) {
  EXPECT_EQ(uniform_k_bound(1.0, 0.0, 1.0), 0.0);
  EXPECT_NEAR(uniform_k_bound(1.0, 0.2, 0.2), 4.0 * std::log(2.0), 1e-14);
  EXPECT_NEAR(uniform_k_bound(2.0, 0.6, 0.2), 16.0 * std::log(4.0), 1e-12);
  EXPECT_NEAR(uniform_k_bound(2.0, 0.6, 0.2), 22.181, 1e-3);
}

Big mu3_reference(double c, double b, double nu, double h, double mu2) {
  const Big e = exp(Big(h) + Big(4) * Big(b) * Big(b) * Big(nu) * log(Big(1) + Big(4) * Big(mu2)));
  return Big(0.75) * (Big(1) + Big(2) * (Big(1) + Big(6) * Big(c)) * (e - Big(1)));
}

TEST(Mu3, Examples) {
  EXPECT_NEAR(mu3_constant(1.0, 1.0, 1.0, 0.0, 1.0), 6552.75, 1e-9);
  EXPECT_DOUBLE_EQ(mu3_constant(1.0, 1.0, 1.0, 0.0, 0.0), 0.75);
  const double v = mu3_constant(1.0, 2.0, 1.0, 1.0, 1.0);
  const double ref = static_cast<double>(mu3_reference(1.0, 2.0, 1.0, 1.0, 1.0));
  EXPECT_NEAR(v, ref, 1e-13 * ref);
}

TEST(Mu3Property, MatchesMultiprecision) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const double c = rng.uniform(1.0, 3.0);
    const double b = rng.uniform(1.0, 3.0);
    const double nu = rng.uniform(1.0, 4.0);
    const double h = rng.uniform(0.0, 5.0);
    const double mu2 = rng.uniform(0.0, 3.0);
    const double ref = static_cast<double>(mu3_reference(c, b, nu, h, mu2));
    const double v = mu3_constant(c, b, nu, h, mu2);
    if (std::isinf(ref)) {
      EXPECT_TRUE(std::isinf(v));
    } else {
      EXPECT_NEAR(v, ref, 1e-12 * ref);
    }
  }
}

TEST(Mu3, OverflowSignalsInfinity) {
  EXPECT_TRUE(std::isinf(mu3_constant(1.0, 10.0, 10.0, 5.0, 10.0)));
}

}  // namespace
}  // namespace qhkit
