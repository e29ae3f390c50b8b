#include "qhkit/qh_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qhkit {
namespace {

constexpr int kMaxDepth = 48;
constexpr int kInitialPanels = 4;

struct Accumulator {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
void adapt(const F& f, double a, double b, double f_mid, double eps, int depth, Accumulator& acc) {
  const double h = b - a;
  const double fl = f(a + 0.25 * h);
  const double fr = f(a + 0.75 * h);
  const double coarse = h * f_mid;
  const double fine = 0.5 * h * (fl + fr);
  const double diff = fine - coarse;
  if (std::abs(diff) / 3.0 <= eps || depth >= kMaxDepth) {
    acc.value += fine + diff / 3.0;
    acc.error += std::abs(diff) / 3.0;
    return;
  }
  const double m = a + 0.5 * h;
  adapt(f, a, m, fl, 0.5 * eps, depth + 1, acc);
  adapt(f, m, b, fr, 0.5 * eps, depth + 1, acc);
}

}  // namespace

QhLengthResult qh_segment_length(const Domain& domain, const Point& a, const Point& b, double tol) {
  if (!(tol > 0.0 && tol <= 1e-2)) throw Error(ErrorCode::kInvalidInput, "quadrature tol must lie in (0, 1e-2]");
  const double len = distance(a, b);
  if (len == 0.0) {
    if (domain.boundary_distance(a) <= 0.0) throw Error(ErrorCode::kArcExitsDomain, "vertex outside the domain");
    return {};
  }
  if (!domain.segment_inside(a, b)) throw Error(ErrorCode::kArcExitsDomain, "segment leaves the domain");
  const Point d = b - a;
  const auto f = [&](double s) {
    const double delta = domain.boundary_distance(a + d * s);
    if (delta <= 0.0) throw Error(ErrorCode::kArcExitsDomain, "quadrature node outside the domain");
    return len / delta;
  };
  double mids[kInitialPanels];
  double estimate = 0.0;
  constexpr double panel = 1.0 / kInitialPanels;
  for (int i = 0; i < kInitialPanels; ++i) {
    mids[i] = f((i + 0.5) * panel);
    estimate += panel * mids[i];
  }
  const double eps = tol * estimate / kInitialPanels;
  Accumulator acc;
  for (int i = 0; i < kInitialPanels; ++i) adapt(f, i * panel, (i + 1) * panel, mids[i], eps, 0, acc);
  return {acc.value, acc.error};
}

std::vector<QhLengthResult> qh_segment_lengths(const Domain& domain, const ArcPolyline& arc, double tol) {
  std::vector<QhLengthResult> out;
  out.reserve(arc.size() > 0 ? arc.size() - 1 : 0);
  if (arc.size() == 1 && domain.boundary_distance(arc.front()) <= 0.0) {
    throw Error(ErrorCode::kArcExitsDomain, "vertex outside the domain");
  }
  for (std::size_t i = 0; i + 1 < arc.size(); ++i) out.push_back(qh_segment_length(domain, arc[i], arc[i + 1], tol));
  return out;
}

QhLengthResult qh_polyline_length(const Domain& domain, const ArcPolyline& arc, double tol) {
  QhLengthResult total;
  for (const QhLengthResult& r : qh_segment_lengths(domain, arc, tol)) {
    total.value += r.value;
    total.est_error += r.est_error;
  }
  return total;
}

double growth_lower_bound(double dist, double delta_min) {
  if (!(delta_min > 0.0)) throw Error(ErrorCode::kInvalidInput, "delta_min must be positive");
  if (!(dist >= 0.0)) throw Error(ErrorCode::kInvalidInput, "distance must be nonnegative");
  return std::log1p(dist / delta_min);
}

double halfspace_qh_distance(const HalfSpace& h, const Point& x, const Point& y) {
  const double hx = x[h.axis] - h.offset;
  const double hy = y[h.axis] - h.offset;
  if (!(hx > 0.0) || !(hy > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "half-space oracle needs points strictly inside");
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
  const double z = d2 / (2.0 * hx * hy);
  // arcosh(1 + z) without cancellation for small z
  return std::log1p(z + std::sqrt(z * (z + 2.0)));
}

double halfspace_qh_distance(const Point& x, const Point& y) {
  if (x.dim() != y.dim()) throw Error(ErrorCode::kInvalidInput, "dimension mismatch");
  return halfspace_qh_distance(HalfSpace{x.dim(), x.dim() - 1, 0.0}, x, y);
}

std::vector<double> DistanceEvaluator::matrix(std::span<const Point> points) const {
  const std::size_t m = points.size();
  std::vector<double> k(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      k[i * m + j] = k[j * m + i] = (*this)(points[i], points[j]);
    }
  }
  return k;
}

CoarseTable::CoarseTable(std::span<const double> k, std::size_t m, double h) : m_(m), range_(m * m, 0.0) {
  if (k.size() != m * m) throw Error(ErrorCode::kInternal, "coarse table: matrix size mismatch");
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  // Admissibility tolerates rounding in k evaluated at exactly h.
  const double h_eff = h - 1e-12 * std::max(1.0, h);
  std::vector<double> best(m * m, kNone);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double v = k[a * m + b] >= h_eff ? k[a * m + b] : kNone;
      for (std::size_t l = a + 1; l < b; ++l) {
        const double kl = k[l * m + b];
        if (kl >= h_eff && best[a * m + l] != kNone) v = std::max(v, best[a * m + l] + kl);
      }
      best[a * m + b] = v;
    }
  }
  for (std::size_t len = 1; len < m; ++len) {
    for (std::size_t i = 0; i + len < m; ++i) {
      const std::size_t j = i + len;
      double v = std::max(range_[(i + 1) * m + j], range_[i * m + j - 1]);
      if (best[i * m + j] != kNone) v = std::max(v, best[i * m + j]);
      range_[i * m + j] = v;
    }
  }
}

CoarseLengthResult coarse_qh_length(const Domain& domain, const ArcPolyline& arc, double h,
                                    const DistanceEvaluator& k_eval, std::size_t m) {
  if (!(h >= 0.0)) throw Error(ErrorCode::kInvalidInput, "h must be nonnegative");
  for (const Point& p : arc.vertices()) {
    if (!domain.contains(p)) throw Error(ErrorCode::kArcExitsDomain, "arc vertex outside the domain");
  }
  if (arc.size() == 1) return {0.0, h, 1};
  const std::vector<Point> pts = uniform_points(arc, m);
  const std::vector<double> k = k_eval.matrix(pts);
  for (std::size_t i = 0; i < m * m; ++i) {
    if (!(k[i] >= 0.0)) throw Error(ErrorCode::kInternal, "distance evaluator returned an invalid value");
  }
  const CoarseTable table(k, m, h);
  return {table.value(0, m - 1), h, m};
}

}  // namespace qhkit
