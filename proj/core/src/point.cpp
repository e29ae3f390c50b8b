#include "qhkit/point.hpp"

#include <string>

namespace qhkit {

double distance_to_segment(const Point& p, const Point& a, const Point& b) noexcept {
  const Point d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  double t = dot(p - a, d) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return distance(p, a + d * t);
}

void require_finite(const Point& p, const char* what) {
  if (!p.finite()) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + ": non-finite coordinate");
  }
}

}  // namespace qhkit
