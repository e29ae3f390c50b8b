#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qhkit/arc.hpp"
#include "qhkit/domain.hpp"
#include "qhkit/qh_metric.hpp"
#include "qhkit/qh_paths.hpp"

namespace qhkit {

/// Which side of the true constant an estimate lies on.
enum class Sidedness {
  /// Sup over a finite sample: never above the true supremum.
  kLowerEstimateOfSup,
  /// Value attained by an explicit witness: never below the true infimum.
  kUpperEstimateOfInf,
};

const char* to_string(Sidedness s);

struct ConstantEstimate {
  double value = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  Sidedness sidedness = Sidedness::kLowerEstimateOfSup;
};

enum class ArcMeasure { kLength, kDiameter };
enum class ConeSplit { kEndpoints, kMaxDelta };

struct ConeCigarEstimate {
  double cone = 0.0;
  double cigar = 0.0;
  ArcMeasure mode = ArcMeasure::kLength;
  ConeSplit split = ConeSplit::kEndpoints;
  std::size_t samples = 0;
};

struct SolidityEstimate {
  double nu_hat = 0.0;
  double h = 0.0;
  std::size_t pairs_checked = 0;
};

/// Condition checks evaluate arcs at max(vertex count, this) points.
inline constexpr std::size_t kConditionPoints = 128;

/// Double-cone constant of an arc. With split = kEndpoints this is the sup
/// over sample points z of min(m(x..z), m(z..y)) / delta(z), m being length
/// or diameter of the subarc. With split = kMaxDelta the arc is cut at the
/// sample x0 of largest delta and the sup of m(endpoint..u) / delta(u) is
/// taken with u on the side of each endpoint. Lower estimate of the sup;
/// 0 for a single-vertex arc. Throws kArcExitsDomain for a sample with
/// delta <= 0.
double cone_constant(const Domain& domain, const ArcPolyline& arc, ArcMeasure mode,
                     ConeSplit split = ConeSplit::kEndpoints);

/// m(arc) / |x - y|. Throws kUndefinedRatio when the endpoints coincide.
double cigar_constant(const ArcPolyline& arc, ArcMeasure mode);

ConeCigarEstimate cone_cigar(const Domain& domain, const ArcPolyline& arc, ArcMeasure mode,
                             ConeSplit split = ConeSplit::kEndpoints);

/// Outcome for one pair: the best candidate's max(cone, cigar), or the
/// reason it could not be evaluated.
struct PairUniformity {
  std::optional<double> b;
  std::string candidate;
  std::string error;
};

struct UniformityEstimate {
  ConstantEstimate estimate;
  std::vector<PairUniformity> pairs;
};

/// For each pair, candidate arcs are the quasihyperbolic short arc, the
/// straight segment and a family of bent quadratic arcs; the pair's value is
/// the smallest max(cone, cigar) among interior candidates. The estimate is
/// the max over the pairs that could be evaluated; failures are recorded per
/// pair.
UniformityEstimate uniformity_estimate(const Domain& domain, const PathGraph& graph,
                                       std::span<const std::pair<Point, Point>> pairs);

/// Same, building a path graph at the given resolution.
UniformityEstimate uniformity_estimate(const Domain& domain,
                                       std::span<const std::pair<Point, Point>> pairs,
                                       double resolution);

/// Candidate points along the arc are m uniform-arclength samples;
/// nu_hat = max over sample pairs (i, j) of coarse length(arc[i..j], h) / k(i, j),
/// ignoring pairs whose coarse length is 0.
SolidityEstimate solidity_estimate(const Domain& domain, const ArcPolyline& arc, double h,
                                   const DistanceEvaluator& k_eval,
                                   std::size_t m = kDefaultCoarseDiscretization);

/// max(6c(e^{2 nu} - 1) dist, 2r(e^h - 1)).
double mu1_bound(double c, double nu, double h, double r, double dist);

/// 4 b^2 log(1 + dist / delta_min).
double uniform_k_bound(double b, double dist, double delta_min);

/// 3/4 [1 + 2(1 + 6c)(e^{h + 4 b^2 nu log(1 + 4 mu2)} - 1)]; +inf when the
/// value is not representable.
double mu3_constant(double c, double b, double nu, double h, double mu2);

}  // namespace qhkit
