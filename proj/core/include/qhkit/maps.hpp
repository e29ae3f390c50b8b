#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qhkit/arc.hpp"
#include "qhkit/conditions.hpp"
#include "qhkit/domain.hpp"

namespace qhkit {

class Map;

struct IdentityMap {};

/// x -> A x, A row-major dim x dim.
struct LinearMap {
  std::size_t dim = 2;
  std::array<double, 9> a{};
};

/// Disk automorphism x -> ((1-|a|^2)(x-a) - |x-a|^2 a) / (1 - 2 x.a + |x|^2 |a|^2),
/// which is z -> (z - a) / (1 - conj(a) z) in the plane. Requires |a| < 1.
struct MoebiusMap {
  Point a;
};

struct TranslationMap {
  Point v;
};

struct ScalingMap {
  double factor = 1.0;
};

/// x -> |x|^(alpha - 1) x.
struct PowerRadialMap {
  double alpha = 1.0;
};

/// Applied first to last.
struct CompositionMap {
  std::vector<Map> maps;
};

using MapKind =
    std::variant<IdentityMap, LinearMap, MoebiusMap, TranslationMap, ScalingMap, PowerRadialMap, CompositionMap>;

class Map {
 public:
  Map() = default;
  Map(MapKind kind);  // NOLINT(google-explicit-constructor)

  const MapKind& kind() const noexcept { return kind_; }
  std::string kind_name() const;

  Point operator()(const Point& p) const;
  /// The inverse map when it exists in closed form.
  std::optional<Map> inverse() const;

 private:
  MapKind kind_;
};

/// A map together with its declared domain and codomain.
struct MapSpec {
  Map map;
  Domain domain;
  Domain codomain;
};

/// Map spec {"kind", "params", "domain", "codomain"}. Kinds and params:
///   identity {}, linear {matrix: [[..], ..]}, moebius {a}, translation {vector},
///   scaling {factor}, power_radial {alpha}, composition {maps: [{kind, params}, ..]}.
/// Throws kConfiguration on malformed specs.
Map map_from_json(const nlohmann::json& j);
MapSpec map_spec_from_json(const nlohmann::json& j);
nlohmann::json map_to_json(const Map& map);

/// Pointwise image. With densify, segment midpoints are inserted first.
/// Throws kInvalidInput for a vertex outside spec.domain.
ArcPolyline map_arc(const MapSpec& spec, const ArcPolyline& arc, bool densify = false);

/// Image of a ball under a planar map that sends circles to circles (Moebius,
/// similarity, composition thereof), found from three boundary images.
/// nullopt when not available.
std::optional<Domain> image_ball(const Map& map, const Domain& ball);

struct WeakQsEstimate {
  ConstantEstimate estimate;
  std::size_t skipped = 0;
};

/// Sup of |f(x)-f(a)| / |f(x)-f(b)| over seeded triples of domain points with
/// |x-a| <= |x-b| (a and b swapped when needed). Starts from 1, the value of
/// the admissible triple a = b. Triples with f(x) = f(b) are skipped.
WeakQsEstimate weak_qs_estimate(const Map& map, const Domain& domain, std::size_t n_triples,
                                std::uint64_t seed);

struct EtaBin {
  /// Upper edge of the bin.
  double t = 0.0;
  double ratio = 0.0;
};

/// Per-bin sup of the image ratio for t = |x-a| / |x-b| in (0, t_max],
/// made nondecreasing by a cumulative max. Empty leading bins report 0.
std::vector<EtaBin> eta_envelope(const Map& map, const Domain& domain, std::size_t n_triples,
                                 std::size_t bins, std::uint64_t seed, double t_max = 2.0);

/// Sup over sampled centres of max/min image distance on a small circle of
/// radius r: a metric-dilatation estimate.
ConstantEstimate dilatation_estimate(const Map& map, const Domain& domain, std::size_t n_points, double r,
                                     std::uint64_t seed);

/// One-sided bounds on k(x, y) in the source and k'(f(x), f(y)) in the image.
struct KPair {
  double source_lower = 0.0;
  double source_upper = 0.0;
  double image_lower = 0.0;
  double image_upper = 0.0;
};

struct CqhFit {
  double m = 1.0;
  double c = 0.0;
};

/// Over C in {0, 0.25, ..., 4}: the least M >= 1 with
/// k'_upper <= M k_lower + C and k_upper - C <= M k'_lower on all pairs;
/// returns the (M, C) minimizing M + C/4, ties to the smaller C.
/// Throws kInvalidInput on an empty list.
CqhFit cqh_estimate(std::span<const KPair> pairs);

struct SolidParams {
  double nu = 0.0;
  double h = 0.0;
};

/// h = (2M + 1)C + 2M and nu = 4(C + 1)M(M + 1) / (2C + 1).
SolidParams solid_params_from_cqh(double m, double c);

/// x_0 = start of beta; x_i is the last point of beta in the closed ball of
/// radius step about x_{i-1}; the chain stops at the end point z once it lies
/// in that ball.
std::vector<Point> chain_points(const ArcPolyline& beta, double step);

/// 2(8c^2 + 1) H^(8c^2 + 1); +inf when not representable.
double chain_image_bound(double c, double h_qs);

/// max(mu3 / lambda, chain_image_bound(c, H)).
double lambda2(double mu3, double lambda, double c, double h_qs);

}  // namespace qhkit
