#include "qhkit/json_io.hpp"

#include <cstdint>
#include <string>

namespace qhkit {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kConfiguration, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::kConfiguration, std::string(what) + " must be a number");
  return j.get<double>();
}

std::size_t count(const json& j, const char* what) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw Error(ErrorCode::kConfiguration, std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

Point config_point(const json& j) {
  try {
    return point_from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfiguration, e.what());
  }
}

}  // namespace

Point point_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > kMaxDim) {
    throw Error(ErrorCode::kInvalidInput, "a point is an array of 2 or 3 numbers");
  }
  Point p = Point::zero(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::kInvalidInput, "point coordinates must be numbers");
    p[i] = j[i].get<double>();
  }
  require_finite(p, "point");
  return p;
}

nlohmann::json point_to_json(const Point& p) {
  json j = json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) j.push_back(p[i]);
  return j;
}

ArcPolyline arc_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kInvalidInput, "an arc is an array of points");
  std::vector<Point> v;
  v.reserve(j.size());
  for (const json& p : j) v.push_back(point_from_json(p));
  return ArcPolyline(std::move(v));
}

nlohmann::json arc_to_json(const ArcPolyline& arc) {
  json j = json::array();
  for (const Point& p : arc.vertices()) j.push_back(point_to_json(p));
  return j;
}

Domain domain_from_json(const nlohmann::json& j) {
  const std::string kind = field(j, "kind").is_string() ? j.at("kind").get<std::string>() : "";
  const json empty = json::object();
  const json& params = j.contains("params") ? j.at("params") : empty;
  std::optional<Box> window;
  if (j.contains("window")) {
    const json& w = j.at("window");
    if (!w.is_array() || w.size() != 2) throw Error(ErrorCode::kConfiguration, "window must be [[lo], [hi]]");
    window = Box{config_point(w[0]), config_point(w[1])};
  }
  const double floor = j.contains("delta_floor") ? number(j.at("delta_floor"), "delta_floor") : 0.0;
  if (floor < 0.0) throw Error(ErrorCode::kConfiguration, "delta_floor must be nonnegative");

  try {
    if (kind == "ball") {
      return Domain(Ball{config_point(field(params, "center")), number(field(params, "radius"), "radius")}, window,
                    floor);
    }
    if (kind == "halfspace") {
      const std::size_t dim = params.contains("dim") ? count(params.at("dim"), "dim") : 2;
      const std::size_t axis = params.contains("axis") ? count(params.at("axis"), "axis") : dim - 1;
      const double offset = params.contains("offset") ? number(params.at("offset"), "offset") : 0.0;
      return Domain(HalfSpace{dim, axis, offset}, window, floor);
    }
    if (kind == "punctured_ball") {
      return Domain(PuncturedBall{config_point(field(params, "center")), number(field(params, "radius"), "radius"),
                                  config_point(field(params, "puncture"))},
                    window, floor);
    }
    if (kind == "slit_disk") {
      const json& slit = field(params, "slit");
      if (!slit.is_array() || slit.size() != 2) throw Error(ErrorCode::kConfiguration, "slit must be [[a], [b]]");
      return Domain(SlitDisk{config_point(field(params, "center")), number(field(params, "radius"), "radius"),
                             config_point(slit[0]), config_point(slit[1])},
                    window, floor);
    }
    if (kind == "custom") {
      const json& loop = field(params, "loop");
      if (!loop.is_array()) throw Error(ErrorCode::kConfiguration, "loop must be an array of points");
      std::vector<Point> pts;
      for (const json& p : loop) pts.push_back(config_point(p));
      const double spacing = params.contains("spacing") ? number(params.at("spacing"), "spacing") : 0.01;
      return Domain(CustomPolygon{std::move(pts), spacing, {}}, window, floor);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfiguration) throw;
    throw Error(ErrorCode::kConfiguration, e.what());
  }
  throw Error(ErrorCode::kConfiguration, "unknown domain kind '" + kind + "'");
}

nlohmann::json domain_to_json(const Domain& domain) {
  json j;
  j["kind"] = domain.kind_name();
  j["params"] = std::visit(
      Overloaded{
          [](const Ball& b) { return json{{"center", point_to_json(b.center)}, {"radius", b.radius}}; },
          [](const HalfSpace& h) { return json{{"dim", h.dim}, {"axis", h.axis}, {"offset", h.offset}}; },
          [](const PuncturedBall& b) {
            return json{{"center", point_to_json(b.center)}, {"radius", b.radius},
                        {"puncture", point_to_json(b.puncture)}};
          },
          [](const SlitDisk& s) {
            return json{{"center", point_to_json(s.center)},
                        {"radius", s.radius},
                        {"slit", json::array({point_to_json(s.slit_a), point_to_json(s.slit_b)})}};
          },
          [](const CustomPolygon& c) {
            json loop = json::array();
            for (const Point& p : c.loop) loop.push_back(point_to_json(p));
            return json{{"loop", loop}, {"spacing", c.spacing}};
          },
      },
      domain.kind());
  j["window"] = json::array({point_to_json(domain.window().lo), point_to_json(domain.window().hi)});
  j["delta_floor"] = domain.delta_floor();
  return j;
}

std::uint64_t domain_hash(const Domain& domain) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : domain_to_json(domain).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qhkit
