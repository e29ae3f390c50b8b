#include "qhkit/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qhkit/json_io.hpp"

namespace qhkit {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dim(const Point& p, std::size_t dim) {
  if (p.dim() != dim) throw Error(ErrorCode::kInvalidInput, "map parameter dimension mismatch");
}

Point moebius(const Point& a, const Point& x) {
  check_dim(x, a.dim());
  const double aa = dot(a, a);
  const Point d = x - a;
  const double denom = 1.0 - 2.0 * dot(x, a) + dot(x, x) * aa;
  if (denom == 0.0) throw Error(ErrorCode::kInvalidInput, "point at the pole of the Moebius map");
  return ((1.0 - aa) * d - dot(d, d) * a) / denom;
}

std::optional<LinearMap> invert(const LinearMap& m) {
  const auto& a = m.a;
  LinearMap inv{m.dim, {}};
  if (m.dim == 2) {
    const double det = a[0] * a[3] - a[1] * a[2];
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    inv.a = {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det, 0, 0, 0, 0, 0};
    return inv;
  }
  const double c00 = a[4] * a[8] - a[5] * a[7];
  const double c01 = a[5] * a[6] - a[3] * a[8];
  const double c02 = a[3] * a[7] - a[4] * a[6];
  const double det = a[0] * c00 + a[1] * c01 + a[2] * c02;
  if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
  inv.a = {c00 / det,
           (a[2] * a[7] - a[1] * a[8]) / det,
           (a[1] * a[5] - a[2] * a[4]) / det,
           c01 / det,
           (a[0] * a[8] - a[2] * a[6]) / det,
           (a[2] * a[3] - a[0] * a[5]) / det,
           c02 / det,
           (a[1] * a[6] - a[0] * a[7]) / det,
           (a[0] * a[4] - a[1] * a[3]) / det};
  return inv;
}

bool is_similarity(const LinearMap& m) {
  const std::size_t n = m.dim;
  double scale = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += m.a[k * n + i] * m.a[k * n + j];
      if (i == j) {
        if (scale < 0.0) scale = s;
        if (std::abs(s - scale) > 1e-12 * scale) return false;
      } else if (std::abs(s) > 1e-12 * std::max(scale, 1.0)) {
        return false;
      }
    }
  }
  return scale > 0.0;
}

// True when the map sends spheres to spheres or planes everywhere it is defined.
bool circle_preserving(const Map& map, bool allow_moebius) {
  return std::visit(Overloaded{
                        [](const IdentityMap&) { return true; },
                        [](const TranslationMap&) { return true; },
                        [](const ScalingMap&) { return true; },
                        [](const LinearMap& m) { return is_similarity(m); },
                        [&](const MoebiusMap&) { return allow_moebius; },
                        [](const PowerRadialMap& p) { return p.alpha == 1.0; },
                        [&](const CompositionMap& c) {
                          return std::all_of(c.maps.begin(), c.maps.end(),
                                             [&](const Map& m) { return circle_preserving(m, allow_moebius); });
                        },
                    },
                    map.kind());
}

std::optional<Ball> circumcircle(const Point& p1, const Point& p2, const Point& p3) {
  const double ax = p1[0], ay = p1[1], bx = p2[0], by = p2[1], cx = p3[0], cy = p3[1];
  const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (d == 0.0) return std::nullopt;
  const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const Point center{(a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d,
                     (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d};
  return Ball{center, distance(center, p1)};
}

double number(const json& params, const char* key) {
  if (!params.contains(key) || !params.at(key).is_number()) {
    throw Error(ErrorCode::kConfiguration, std::string("map parameter '") + key + "' must be a number");
  }
  return params.at(key).get<double>();
}

Point point_param(const json& params, const char* key) {
  if (!params.contains(key)) throw Error(ErrorCode::kConfiguration, std::string("missing map parameter '") + key + "'");
  try {
    return point_from_json(params.at(key));
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfiguration, e.what());
  }
}

std::vector<Point> sample_triple_points(const Domain& domain, std::size_t n_triples, std::uint64_t seed) {
  return sample_interior(domain, 3 * n_triples, seed, domain.delta_floor());
}

}  // namespace

Map::Map(MapKind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const MoebiusMap& m) {
                   if (!(norm(m.a) < 1.0)) throw Error(ErrorCode::kInvalidInput, "Moebius parameter needs |a| < 1");
                 },
                 [](const ScalingMap& s) {
                   if (!(s.factor > 0.0) || !std::isfinite(s.factor)) {
                     throw Error(ErrorCode::kInvalidInput, "scaling factor must be positive");
                   }
                 },
                 [](const PowerRadialMap& p) {
                   if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
                     throw Error(ErrorCode::kInvalidInput, "power exponent must be positive");
                   }
                 },
                 [](const LinearMap& m) {
                   if (m.dim < 2 || m.dim > kMaxDim) throw Error(ErrorCode::kInvalidInput, "linear map dimension");
                 },
                 [](const auto&) {},
             },
             kind_);
}

std::string Map::kind_name() const {
  return std::visit(Overloaded{
                        [](const IdentityMap&) { return std::string("identity"); },
                        [](const LinearMap&) { return std::string("linear"); },
                        [](const MoebiusMap&) { return std::string("moebius"); },
                        [](const TranslationMap&) { return std::string("translation"); },
                        [](const ScalingMap&) { return std::string("scaling"); },
                        [](const PowerRadialMap&) { return std::string("power_radial"); },
                        [](const CompositionMap&) { return std::string("composition"); },
                    },
                    kind_);
}

Point Map::operator()(const Point& p) const {
  return std::visit(Overloaded{
                        [&](const IdentityMap&) { return p; },
                        [&](const LinearMap& m) {
                          check_dim(p, m.dim);
                          Point out = Point::zero(m.dim);
                          for (std::size_t i = 0; i < m.dim; ++i) {
                            for (std::size_t j = 0; j < m.dim; ++j) out[i] += m.a[i * m.dim + j] * p[j];
                          }
                          return out;
                        },
                        [&](const MoebiusMap& m) { return moebius(m.a, p); },
                        [&](const TranslationMap& t) {
                          check_dim(p, t.v.dim());
                          return p + t.v;
                        },
                        [&](const ScalingMap& s) { return p * s.factor; },
                        [&](const PowerRadialMap& m) {
                          const double r = norm(p);
                          return r == 0.0 ? p : p * std::pow(r, m.alpha - 1.0);
                        },
                        [&](const CompositionMap& c) {
                          Point q = p;
                          for (const Map& m : c.maps) q = m(q);
                          return q;
                        },
                    },
                    kind_);
}

std::optional<Map> Map::inverse() const {
  return std::visit(Overloaded{
                        [](const IdentityMap&) -> std::optional<Map> { return Map(IdentityMap{}); },
                        [](const LinearMap& m) -> std::optional<Map> {
                          if (auto inv = invert(m)) return Map(*inv);
                          return std::nullopt;
                        },
                        [](const MoebiusMap& m) -> std::optional<Map> { return Map(MoebiusMap{-m.a}); },
                        [](const TranslationMap& t) -> std::optional<Map> { return Map(TranslationMap{-t.v}); },
                        [](const ScalingMap& s) -> std::optional<Map> { return Map(ScalingMap{1.0 / s.factor}); },
                        [](const PowerRadialMap& m) -> std::optional<Map> {
                          return Map(PowerRadialMap{1.0 / m.alpha});
                        },
                        [](const CompositionMap& c) -> std::optional<Map> {
                          CompositionMap inv;
                          for (auto it = c.maps.rbegin(); it != c.maps.rend(); ++it) {
                            auto m = it->inverse();
                            if (!m) return std::nullopt;
                            inv.maps.push_back(std::move(*m));
                          }
                          return Map(std::move(inv));
                        },
                    },
                    kind_);
}

Map map_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw Error(ErrorCode::kConfiguration, "map spec needs a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  const json empty = json::object();
  const json& params = j.contains("params") ? j.at("params") : empty;
  try {
    if (kind == "identity") return Map(IdentityMap{});
    if (kind == "moebius") return Map(MoebiusMap{point_param(params, "a")});
    if (kind == "translation") return Map(TranslationMap{point_param(params, "vector")});
    if (kind == "scaling") return Map(ScalingMap{number(params, "factor")});
    if (kind == "power_radial") return Map(PowerRadialMap{number(params, "alpha")});
    if (kind == "linear") {
      const json& rows = params.contains("matrix") ? params.at("matrix") : empty;
      if (!rows.is_array() || rows.size() < 2 || rows.size() > kMaxDim) {
        throw Error(ErrorCode::kConfiguration, "linear map needs a square 'matrix' of size 2 or 3");
      }
      LinearMap m{rows.size(), {}};
      for (std::size_t i = 0; i < m.dim; ++i) {
        if (!rows[i].is_array() || rows[i].size() != m.dim) {
          throw Error(ErrorCode::kConfiguration, "linear map matrix must be square");
        }
        for (std::size_t k = 0; k < m.dim; ++k) {
          if (!rows[i][k].is_number()) throw Error(ErrorCode::kConfiguration, "matrix entries must be numbers");
          m.a[i * m.dim + k] = rows[i][k].get<double>();
        }
      }
      return Map(m);
    }
    if (kind == "composition") {
      if (!params.contains("maps") || !params.at("maps").is_array()) {
        throw Error(ErrorCode::kConfiguration, "composition needs a 'maps' array");
      }
      CompositionMap c;
      for (const json& m : params.at("maps")) c.maps.push_back(map_from_json(m));
      return Map(std::move(c));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfiguration) throw;
    throw Error(ErrorCode::kConfiguration, e.what());
  }
  throw Error(ErrorCode::kConfiguration, "unknown map kind '" + kind + "'");
}

MapSpec map_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("domain") || !j.contains("codomain")) {
    throw Error(ErrorCode::kConfiguration, "map spec needs 'domain' and 'codomain'");
  }
  return MapSpec{map_from_json(j), domain_from_json(j.at("domain")), domain_from_json(j.at("codomain"))};
}

nlohmann::json map_to_json(const Map& map) {
  json params = std::visit(Overloaded{
                               [](const IdentityMap&) { return json::object(); },
                               [](const LinearMap& m) {
                                 json rows = json::array();
                                 for (std::size_t i = 0; i < m.dim; ++i) {
                                   json row = json::array();
                                   for (std::size_t k = 0; k < m.dim; ++k) row.push_back(m.a[i * m.dim + k]);
                                   rows.push_back(row);
                                 }
                                 return json{{"matrix", rows}};
                               },
                               [](const MoebiusMap& m) { return json{{"a", point_to_json(m.a)}}; },
                               [](const TranslationMap& t) { return json{{"vector", point_to_json(t.v)}}; },
                               [](const ScalingMap& s) { return json{{"factor", s.factor}}; },
                               [](const PowerRadialMap& p) { return json{{"alpha", p.alpha}}; },
                               [](const CompositionMap& c) {
                                 json maps = json::array();
                                 for (const Map& m : c.maps) maps.push_back(map_to_json(m));
                                 return json{{"maps", maps}};
                               },
                           },
                           map.kind());
  return json{{"kind", map.kind_name()}, {"params", params}};
}

ArcPolyline map_arc(const MapSpec& spec, const ArcPolyline& arc, bool densify) {
  for (const Point& p : arc.vertices()) {
    if (!spec.domain.contains(p)) throw Error(ErrorCode::kInvalidInput, "arc vertex outside the map's domain");
  }
  const ArcPolyline src = densify ? arc.densified() : arc;
  std::vector<Point> out;
  out.reserve(src.size());
  for (const Point& p : src.vertices()) out.push_back(spec.map(p));
  return ArcPolyline(std::move(out));
}

std::optional<Domain> image_ball(const Map& map, const Domain& ball) {
  const Ball* b = std::get_if<Ball>(&ball.kind());
  if (b == nullptr) return std::nullopt;
  const bool planar = ball.dim() == 2;
  if (!circle_preserving(map, planar)) return std::nullopt;
  const Point fc = map(b->center);
  if (!planar) {
    // Similarities only: image radius from one boundary point.
    Point e = Point::zero(ball.dim());
    e[0] = b->radius;
    return Domain::ball(fc, distance(map(b->center + e), fc));
  }
  std::array<Point, 3> img;
  for (int i = 0; i < 3; ++i) {
    const double th = 2.0 * std::numbers::pi * i / 3.0;
    try {
      img[i] = map(b->center + Point{std::cos(th), std::sin(th)} * b->radius);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  const auto circle = circumcircle(img[0], img[1], img[2]);
  // The interior maps to the interior only when the centre's image is inside.
  if (!circle || !(distance(fc, circle->center) < circle->radius)) return std::nullopt;
  return Domain::ball(circle->center, circle->radius);
}

WeakQsEstimate weak_qs_estimate(const Map& map, const Domain& domain, std::size_t n_triples, std::uint64_t seed) {
  if (n_triples == 0) throw Error(ErrorCode::kInvalidInput, "need at least one triple");
  const std::vector<Point> pts = sample_triple_points(domain, n_triples, seed);
  WeakQsEstimate out;
  out.estimate = {1.0, n_triples, seed, Sidedness::kLowerEstimateOfSup};
  for (std::size_t i = 0; i < n_triples; ++i) {
    const Point& x = pts[3 * i];
    Point a = pts[3 * i + 1];
    Point b = pts[3 * i + 2];
    if (distance(x, a) > distance(x, b)) std::swap(a, b);
    const Point fx = map(x);
    const double den = distance(fx, map(b));
    if (den == 0.0) {
      ++out.skipped;
      continue;
    }
    out.estimate.value = std::max(out.estimate.value, distance(fx, map(a)) / den);
  }
  return out;
}

std::vector<EtaBin> eta_envelope(const Map& map, const Domain& domain, std::size_t n_triples, std::size_t bins,
                                 std::uint64_t seed, double t_max) {
  if (bins == 0 || !(t_max > 0.0)) throw Error(ErrorCode::kInvalidInput, "eta_envelope needs bins >= 1, t_max > 0");
  if (n_triples == 0) throw Error(ErrorCode::kInvalidInput, "need at least one triple");
  const std::vector<Point> pts = sample_triple_points(domain, n_triples, seed);
  std::vector<EtaBin> out(bins);
  for (std::size_t k = 0; k < bins; ++k) out[k].t = t_max * static_cast<double>(k + 1) / static_cast<double>(bins);
  for (std::size_t i = 0; i < n_triples; ++i) {
    const Point& x = pts[3 * i];
    const Point& a = pts[3 * i + 1];
    const Point& b = pts[3 * i + 2];
    const double db = distance(x, b);
    if (db == 0.0) continue;
    const double t = distance(x, a) / db;
    if (!(t > 0.0) || t > t_max) continue;
    const auto bin = std::min(bins - 1, static_cast<std::size_t>(std::ceil(t / t_max * static_cast<double>(bins))) - 1);
    const Point fx = map(x);
    const double den = distance(fx, map(b));
    if (den == 0.0) continue;
    out[bin].ratio = std::max(out[bin].ratio, distance(fx, map(a)) / den);
  }
  for (std::size_t k = 1; k < bins; ++k) out[k].ratio = std::max(out[k].ratio, out[k - 1].ratio);
  return out;
}

ConstantEstimate dilatation_estimate(const Map& map, const Domain& domain, std::size_t n_points, double r,
                                     std::uint64_t seed) {
  if (!(r > 0.0)) throw Error(ErrorCode::kInvalidInput, "radius must be positive");
  const std::vector<Point> centers = sample_interior(domain, n_points, seed, domain.delta_floor());
  std::vector<Point> dirs;
  constexpr int kDirections = 64;
  if (domain.dim() == 2) {
    for (int i = 0; i < kDirections; ++i) {
      const double th = 2.0 * std::numbers::pi * i / kDirections;
      dirs.push_back(Point{std::cos(th), std::sin(th)});
    }
  } else {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < kDirections; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / kDirections;
      const double s = std::sqrt(1.0 - z * z);
      dirs.push_back(Point{s * std::cos(golden * i), s * std::sin(golden * i), z});
    }
  }
  ConstantEstimate out{1.0, n_points, seed, Sidedness::kLowerEstimateOfSup};
  for (const Point& x : centers) {
    const double rr = std::min(r, 0.5 * domain.boundary_distance(x));
    const Point fx = map(x);
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (const Point& u : dirs) {
      const double d = distance(map(x + u * rr), fx);
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
    if (lo > 0.0) out.value = std::max(out.value, hi / lo);
  }
  return out;
}

CqhFit cqh_estimate(std::span<const KPair> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kInvalidInput, "cqh_estimate needs at least one pair");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  CqhFit best{kInf, 0.0};
  double best_score = kInf;
  for (int step = 0; step <= 16; ++step) {
    const double c = 0.25 * step;
    double m = 1.0;
    for (const KPair& p : pairs) {
      if (p.image_upper > c) m = std::max(m, p.source_lower > 0.0 ? (p.image_upper - c) / p.source_lower : kInf);
      if (p.source_upper > c) m = std::max(m, p.image_lower > 0.0 ? (p.source_upper - c) / p.image_lower : kInf);
    }
    const double score = m + 0.25 * c;
    if (score < best_score) {
      best_score = score;
      best = {m, c};
    }
  }
  return best;
}

SolidParams solid_params_from_cqh(double m, double c) {
  if (!(m >= 1.0 && c >= 0.0)) throw Error(ErrorCode::kInvalidInput, "need M >= 1 and C >= 0");
  return {4.0 * (c + 1.0) * m * (m + 1.0) / (2.0 * c + 1.0), (2.0 * m + 1.0) * c + 2.0 * m};
}

std::vector<Point> chain_points(const ArcPolyline& beta, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorCode::kInvalidInput, "chain step must be positive");
  if (beta.front() == beta.back()) throw Error(ErrorCode::kInvalidInput, "chain arc needs distinct endpoints");
  const std::size_t n = beta.size();
  std::vector<Point> chain{beta.front()};
  const auto limit = static_cast<std::size_t>(std::ceil(beta.length() / step)) + 2;
  while (distance(chain.back(), beta.back()) > step) {
    if (chain.size() > limit) throw Error(ErrorCode::kInternal, "chain construction did not terminate");
    const Point c = chain.back();
    // Walk segments from the end; the first one that meets the ball holds the
    // last point of beta inside it, at the exit root of |p + t d - c| = step.
    std::optional<Point> next;
    for (std::size_t i = n - 1; i-- > 0 && !next;) {
      const Point p = beta[i];
      const Point d = beta[i + 1] - p;
      const double dd = dot(d, d);
      if (dd == 0.0) continue;
      const Point w = p - c;
      const double half_b = dot(w, d);
      const double disc = half_b * half_b - dd * (dot(w, w) - step * step);
      if (disc < 0.0) continue;
      const double root = std::sqrt(disc);
      const double t = (-half_b + root) / dd;
      if (t < 0.0 || (-half_b - root) / dd > 1.0) continue;
      next = p + d * std::min(t, 1.0);
    }
    if (!next) throw Error(ErrorCode::kInternal, "chain point not found");
    chain.push_back(*next);
  }
  chain.push_back(beta.back());
  return chain;
}

double chain_image_bound(double c, double h_qs) {
  if (!(c >= 1.0 && h_qs >= 1.0)) throw Error(ErrorCode::kInvalidInput, "chain_image_bound: need c, H >= 1");
  const double e = 8.0 * c * c + 1.0;
  const double log_value = std::log(2.0 * e) + e * std::log(h_qs);
  if (!(log_value < std::log(std::numeric_limits<double>::max()))) return std::numeric_limits<double>::infinity();
  return 2.0 * e * std::pow(h_qs, e);
}

double lambda2(double mu3, double lambda, double c, double h_qs) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::kInvalidInput, "lambda must be positive");
  return std::max(mu3 / lambda, chain_image_bound(c, h_qs));
}

}  // namespace qhkit
