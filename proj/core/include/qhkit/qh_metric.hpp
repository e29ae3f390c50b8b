#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qhkit/arc.hpp"
#include "qhkit/domain.hpp"

namespace qhkit {

/// Quasihyperbolic length of a polyline together with a bound on the
/// quadrature error.
struct QhLengthResult {
  double value = 0.0;
  double est_error = 0.0;

  /// value + est_error: an upper bound on the exact integral.
  double upper() const noexcept { return value + est_error; }
};

inline constexpr double kDefaultQuadratureTol = 1e-8;

/// Integral of |dz| / delta over the straight segment [a, b] by adaptive
/// bisection of the midpoint rule with one Richardson step per panel. Throws
/// kArcExitsDomain if the segment leaves the domain.
QhLengthResult qh_segment_length(const Domain& domain, const Point& a, const Point& b,
                                 double tol = kDefaultQuadratureTol);

/// Per-segment lengths of an arc (size() - 1 entries).
std::vector<QhLengthResult> qh_segment_lengths(const Domain& domain, const ArcPolyline& arc,
                                               double tol = kDefaultQuadratureTol);

/// Sum of the per-segment lengths; 0 for a single-vertex arc. tol must lie in
/// (0, 1e-2].
QhLengthResult qh_polyline_length(const Domain& domain, const ArcPolyline& arc,
                                  double tol = kDefaultQuadratureTol);

/// log(1 + dist / delta_min): lower bound for k(x, y) with dist = |x - y|, and
/// for the quasihyperbolic length of an arc with dist = its Euclidean length.
double growth_lower_bound(double dist, double delta_min);

/// Exact quasihyperbolic distance of the upper half-space {x_n > 0}:
/// arcosh(1 + |x - y|^2 / (2 x_n y_n)).
double halfspace_qh_distance(const Point& x, const Point& y);

/// Same, for a half-space {x[axis] > offset}.
double halfspace_qh_distance(const HalfSpace& h, const Point& x, const Point& y);

/// Pairwise quasihyperbolic distance evaluator. Implementations must be safe
/// to call concurrently.
class DistanceEvaluator {
 public:
  virtual ~DistanceEvaluator() = default;
  virtual double operator()(const Point& a, const Point& b) const = 0;
  /// Row-major symmetric matrix of all pairwise distances.
  virtual std::vector<double> matrix(std::span<const Point> points) const;
};

class HalfSpaceOracle final : public DistanceEvaluator {
 public:
  explicit HalfSpaceOracle(HalfSpace h) : h_(h) {}
  double operator()(const Point& a, const Point& b) const override {
    return halfspace_qh_distance(h_, a, b);
  }

 private:
  HalfSpace h_;
};

struct CoarseLengthResult {
  double value = 0.0;
  double h = 0.0;
  std::size_t discretization = 0;
};

/// Maximal h-coarse sums over the ordered candidate points 0..m-1, for every
/// index range at once. value(i, j) is the largest sum of k over successive
/// candidates inside [i, j] whose consecutive gaps are all >= h, or 0 if no
/// pair qualifies.
class CoarseTable {
 public:
  CoarseTable(std::span<const double> k_matrix, std::size_t m, double h);
  double value(std::size_t i, std::size_t j) const { return range_[i * m_ + j]; }
  std::size_t size() const noexcept { return m_; }

 private:
  std::size_t m_;
  std::vector<double> range_;
};

inline constexpr std::size_t kDefaultCoarseDiscretization = 64;

/// h-coarse quasihyperbolic length: the arc is cut into m successive points
/// at uniform arclength and the best admissible subsequence is found by
/// dynamic programming. A lower estimate of the supremum over all sequences.
CoarseLengthResult coarse_qh_length(const Domain& domain, const ArcPolyline& arc, double h,
                                    const DistanceEvaluator& k_eval,
                                    std::size_t m = kDefaultCoarseDiscretization);

}  // namespace qhkit
