#pragma once

#include <cstdint>
#include <random>

#include "qhkit/point.hpp"

namespace qhkit {

/// SplitMix64 finalizer; derives independent per-task seeds from a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic generator. Doubles are built from the top 53 bits by hand so
/// streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform point in the box [lo, hi].
  Point in_box(const Point& lo, const Point& hi) {
    Point p = Point::zero(lo.dim());
    for (std::size_t i = 0; i < lo.dim(); ++i) p[i] = uniform(lo[i], hi[i]);
    return p;
  }

  /// Uniform direction on the unit sphere of the given dimension.
  Point direction(std::size_t dim) {
    for (;;) {
      Point p = Point::zero(dim);
      for (std::size_t i = 0; i < dim; ++i) p[i] = uniform(-1.0, 1.0);
      const double r = norm(p);
      if (r > 1e-3 && r <= 1.0) return p / r;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qhkit
