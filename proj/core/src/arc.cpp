#include "qhkit/arc.hpp"

#include <algorithm>
#include <cmath>

namespace qhkit {

ArcPolyline::ArcPolyline(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) {
    throw Error(ErrorCode::kInvalidInput, "arc needs at least one vertex");
  }
  const std::size_t dim = vertices_.front().dim();
  cumulative_.reserve(vertices_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    require_finite(vertices_[i], "arc vertex");
    if (vertices_[i].dim() != dim) {
      throw Error(ErrorCode::kInvalidInput, "arc vertices have mixed dimensions");
    }
    if (i > 0) cumulative_.push_back(cumulative_.back() + distance(vertices_[i - 1], vertices_[i]));
  }
}

Point ArcPolyline::at_length(double s) const {
  if (vertices_.size() == 1 || s <= 0.0) return vertices_.front();
  if (s >= length()) return vertices_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - cumulative_.begin());
  const std::size_t i = j - 1;
  const double seg = cumulative_[j] - cumulative_[i];
  const double t = seg > 0.0 ? (s - cumulative_[i]) / seg : 0.0;
  return lerp(vertices_[i], vertices_[j], t);
}

ArcPolyline ArcPolyline::subarc(std::size_t i, std::size_t j) const {
  if (i > j || j >= vertices_.size()) {
    throw Error(ErrorCode::kInvalidInput, "subarc indices out of range");
  }
  return ArcPolyline(std::vector<Point>(vertices_.begin() + static_cast<std::ptrdiff_t>(i),
                                        vertices_.begin() + static_cast<std::ptrdiff_t>(j) + 1));
}

ArcPolyline ArcPolyline::reversed() const {
  return ArcPolyline(std::vector<Point>(vertices_.rbegin(), vertices_.rend()));
}

ArcPolyline ArcPolyline::densified() const {
  std::vector<Point> out;
  out.reserve(2 * vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i > 0) out.push_back(lerp(vertices_[i - 1], vertices_[i], 0.5));
    out.push_back(vertices_[i]);
  }
  return ArcPolyline(std::move(out));
}

double ArcPolyline::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      d = std::max(d, distance(vertices_[i], vertices_[j]));
    }
  }
  return d;
}

std::vector<ArcSample> discretize(const ArcPolyline& arc, std::size_t min_points) {
  std::vector<ArcSample> out;
  const std::size_t n = arc.size();
  if (n == 1) {
    out.push_back({arc.front(), 0.0, 0});
    return out;
  }
  const double total = arc.length();
  const std::size_t pieces_target = std::max(min_points, n) - 1;
  const auto cum = arc.cumulative();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double seg = cum[i + 1] - cum[i];
    std::size_t pieces = 1;
    if (total > 0.0) {
      pieces = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(static_cast<double>(pieces_target) * seg / total)));
    }
    for (std::size_t k = 0; k < pieces; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(pieces);
      out.push_back({lerp(arc[i], arc[i + 1], t), cum[i] + t * seg, i});
    }
  }
  out.push_back({arc.back(), total, n - 2});
  return out;
}

std::vector<Point> uniform_points(const ArcPolyline& arc, std::size_t m) {
  if (m < 2) throw Error(ErrorCode::kInvalidInput, "need at least two discretization points");
  std::vector<Point> out;
  out.reserve(m);
  const double total = arc.length();
  for (std::size_t k = 0; k < m; ++k) {
    if (k + 1 == m) {
      out.push_back(arc.back());
    } else {
      out.push_back(arc.at_length(total * static_cast<double>(k) / static_cast<double>(m - 1)));
    }
  }
  return out;
}

}  // namespace qhkit
