#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

#include "qhkit/arc.hpp"
#include "qhkit/domain.hpp"

namespace qhkit {

/// Coordinate array [x, y] or [x, y, z]. Throws kInvalidInput otherwise.
Point point_from_json(const nlohmann::json& j);
nlohmann::json point_to_json(const Point& p);

/// Arc exchange format: array of coordinate arrays.
ArcPolyline arc_from_json(const nlohmann::json& j);
nlohmann::json arc_to_json(const ArcPolyline& arc);

/// Domain spec {"kind", "params", "window": [[lo], [hi]], "delta_floor"}.
/// Kinds and params:
///   ball            {center, radius}
///   halfspace       {dim, axis, offset}
///   punctured_ball  {center, radius, puncture}
///   slit_disk       {center, radius, slit: [[a], [b]]}
///   custom          {loop: [[x, y], ...], spacing}
/// window and delta_floor are optional. Throws kConfiguration on malformed
/// specs.
Domain domain_from_json(const nlohmann::json& j);
nlohmann::json domain_to_json(const Domain& domain);

/// FNV-1a hash of the canonical serialized spec.
std::uint64_t domain_hash(const Domain& domain);

}  // namespace qhkit
