#include "qhkit/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qhkit {
namespace {

// Diameters of the prefixes p[0..i] and suffixes p[i..n-1].
void subarc_diameters(const std::vector<ArcSample>& s, std::vector<double>& pre, std::vector<double>& suf) {
  const std::size_t n = s.size();
  pre.assign(n, 0.0);
  suf.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double d = pre[i - 1];
    for (std::size_t j = 0; j < i; ++j) d = std::max(d, distance(s[i].point, s[j].point));
    pre[i] = d;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    double d = suf[i + 1];
    for (std::size_t j = i + 1; j < n; ++j) d = std::max(d, distance(s[i].point, s[j].point));
    suf[i] = d;
  }
}

std::vector<Point> normals(const Point& t) {
  if (t.dim() == 2) return {Point{-t[1], t[0]}};
  std::size_t axis = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (std::abs(t[i]) < std::abs(t[axis])) axis = i;
  }
  Point e = Point::zero(3);
  e[axis] = 1.0;
  Point n1 = e - t * dot(e, t);
  n1 = n1 / norm(n1);
  const Point n2{t[1] * n1[2] - t[2] * n1[1], t[2] * n1[0] - t[0] * n1[2], t[0] * n1[1] - t[1] * n1[0]};
  return {n1, n2};
}

std::optional<ArcPolyline> quadratic_arc(const Domain& domain, const Point& x, const Point& y,
                                         const Point& control) {
  constexpr std::size_t kSegments = 64;
  std::vector<Point> v;
  v.reserve(kSegments + 1);
  for (std::size_t i = 0; i <= kSegments; ++i) {
    const double t = static_cast<double>(i) / kSegments;
    v.push_back(x * ((1 - t) * (1 - t)) + control * (2 * t * (1 - t)) + y * (t * t));
    if (i > 0 && !domain.segment_inside(v[i - 1], v[i])) return std::nullopt;
  }
  return ArcPolyline(std::move(v));
}

double uniform_value(const Domain& domain, const ArcPolyline& arc) {
  return std::max(cone_constant(domain, arc, ArcMeasure::kLength), cigar_constant(arc, ArcMeasure::kLength));
}

PairUniformity evaluate_pair(const Domain& domain, const PathGraph& graph, const Point& x, const Point& y) {
  PairUniformity out;
  if (x == y) {
    out.error = "coincident endpoints";
    return out;
  }
  auto consider = [&](const ArcPolyline& arc, std::string name) {
    const double b = uniform_value(domain, arc);
    if (!out.b || b < *out.b) {
      out.b = b;
      out.candidate = std::move(name);
    }
  };
  try {
    consider(qh_shortest_arc(domain, graph, x, y).arc, "qh_arc");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotConnected && e.code() != ErrorCode::kInvalidInput) throw;
    out.error = e.what();
  }
  if (domain.segment_inside(x, y)) consider(ArcPolyline::segment(x, y), "segment");
  const double len = distance(x, y);
  const Point mid = lerp(x, y, 0.5);
  constexpr double kBends[] = {0.1, 0.2, 0.35, 0.5, 0.75, 1.0};
  for (const Point& n : normals((y - x) / len)) {
    for (const double s : kBends) {
      for (const double sign : {1.0, -1.0}) {
        if (auto arc = quadratic_arc(domain, x, y, mid + n * (sign * s * len))) consider(*arc, "quadratic");
      }
    }
  }
  if (out.b) out.error.clear();
  return out;
}

}  // namespace

const char* to_string(Sidedness s) {
  switch (s) {
    case Sidedness::kLowerEstimateOfSup:
      return "lower_estimate_of_sup";
    case Sidedness::kUpperEstimateOfInf:
      return "upper_estimate_of_inf";
  }
  return "unknown";
}

double cone_constant(const Domain& domain, const ArcPolyline& arc, ArcMeasure mode, ConeSplit split) {
  if (arc.size() < 2) return 0.0;
  const std::vector<ArcSample> s = discretize(arc, kConditionPoints);
  const std::size_t n = s.size();
  std::vector<double> delta(n);
  for (std::size_t i = 0; i < n; ++i) {
    delta[i] = domain.boundary_distance(s[i].point);
    if (!(delta[i] > 0.0)) throw Error(ErrorCode::kArcExitsDomain, "arc sample outside the domain");
  }
  std::vector<double> pre(n);
  std::vector<double> suf(n);
  if (mode == ArcMeasure::kLength) {
    const double total = arc.length();
    for (std::size_t i = 0; i < n; ++i) {
      pre[i] = s[i].arclength;
      suf[i] = total - s[i].arclength;
    }
  } else {
    subarc_diameters(s, pre, suf);
  }
  double best = 0.0;
  if (split == ConeSplit::kEndpoints) {
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::min(pre[i], suf[i]) / delta[i]);
  } else {
    const auto top = static_cast<std::size_t>(std::max_element(delta.begin(), delta.end()) - delta.begin());
    for (std::size_t i = 0; i <= top; ++i) best = std::max(best, pre[i] / delta[i]);
    for (std::size_t i = top; i < n; ++i) best = std::max(best, suf[i] / delta[i]);
  }
  return best;
}

double cigar_constant(const ArcPolyline& arc, ArcMeasure mode) {
  const double chord = distance(arc.front(), arc.back());
  if (!(chord > 0.0)) throw Error(ErrorCode::kUndefinedRatio, "cigar ratio needs distinct endpoints");
  return (mode == ArcMeasure::kLength ? arc.length() : arc.diameter()) / chord;
}

ConeCigarEstimate cone_cigar(const Domain& domain, const ArcPolyline& arc, ArcMeasure mode, ConeSplit split) {
  ConeCigarEstimate e;
  e.cone = cone_constant(domain, arc, mode, split);
  e.cigar = cigar_constant(arc, mode);
  e.mode = mode;
  e.split = split;
  e.samples = std::max(arc.size(), kConditionPoints);
  return e;
}

UniformityEstimate uniformity_estimate(const Domain& domain, const PathGraph& graph,
                                       std::span<const std::pair<Point, Point>> pairs) {
  UniformityEstimate out;
  out.estimate.sidedness = Sidedness::kLowerEstimateOfSup;
  out.estimate.seed = graph.seed();
  out.pairs.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    out.pairs.push_back(evaluate_pair(domain, graph, x, y));
    if (out.pairs.back().b) {
      out.estimate.value = std::max(out.estimate.value, *out.pairs.back().b);
      ++out.estimate.samples;
    }
  }
  return out;
}

UniformityEstimate uniformity_estimate(const Domain& domain, std::span<const std::pair<Point, Point>> pairs,
                                       double resolution) {
  return uniformity_estimate(domain, build_path_graph(domain, resolution, 0), pairs);
}

SolidityEstimate solidity_estimate(const Domain& domain, const ArcPolyline& arc, double h,
                                   const DistanceEvaluator& k_eval, std::size_t m) {
  if (!(h >= 0.0)) throw Error(ErrorCode::kInvalidInput, "h must be nonnegative");
  SolidityEstimate out;
  out.h = h;
  for (const Point& p : arc.vertices()) {
    if (!domain.contains(p)) throw Error(ErrorCode::kArcExitsDomain, "arc vertex outside the domain");
  }
  if (arc.size() < 2) return out;
  const std::vector<Point> pts = uniform_points(arc, m);
  const std::vector<double> k = k_eval.matrix(pts);
  const CoarseTable table(k, m, h);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double coarse = table.value(i, j);
      if (coarse > 0.0 && k[i * m + j] > 0.0) {
        out.nu_hat = std::max(out.nu_hat, coarse / k[i * m + j]);
        ++out.pairs_checked;
      }
    }
  }
  return out;
}

double mu1_bound(double c, double nu, double h, double r, double dist) {
  if (!(c >= 1.0 && nu >= 1.0 && h >= 0.0 && r >= 0.0 && dist >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "mu1_bound: need c, nu >= 1 and h, r, dist >= 0");
  }
  return std::max(6.0 * c * std::expm1(2.0 * nu) * dist, 2.0 * r * std::expm1(h));
}

double uniform_k_bound(double b, double dist, double delta_min) {
  if (!(b >= 1.0)) throw Error(ErrorCode::kInvalidInput, "uniform_k_bound: need b >= 1");
  return 4.0 * b * b * growth_lower_bound(dist, delta_min);
}

double mu3_constant(double c, double b, double nu, double h, double mu2) {
  if (!(c >= 1.0 && b >= 1.0 && nu >= 1.0 && h >= 0.0 && mu2 >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "mu3_constant: need c, b, nu >= 1 and h, mu2 >= 0");
  }
  const double exponent = h + 4.0 * b * b * nu * std::log1p(4.0 * mu2);
  const double factor = 2.0 * (1.0 + 6.0 * c);
  // log of 3/4 * factor * e^exponent, the dominant term once e^exponent >> 1
  const double log_value = std::log(0.75 * factor) + exponent;
  if (!std::isfinite(exponent) || log_value >= std::log(std::numeric_limits<double>::max())) {
    return std::numeric_limits<double>::infinity();
  }
  return 0.75 * (1.0 + factor * std::expm1(exponent));
}

}  // namespace qhkit
