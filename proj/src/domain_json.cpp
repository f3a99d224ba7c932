#include "confgeom/domain_json.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "confgeom/errors.hpp"

namespace confgeom {

namespace {

using nlohmann::json;

void check_keys(const json& spec, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : spec.items()) {
    if (key.find("deg") != std::string::npos)
      throw SpecError("key '" + key + "': angles are accepted in radians only (use e.g. \"alpha\": 1.0472 for 60 degrees)");
    if (!allowed.count(key)) throw SpecError("unknown key '" + key + "'");
  }
}

double number(const json& spec, const std::string& key) {
  if (!spec.contains(key)) throw SpecError("missing key '" + key + "'");
  const json& v = spec.at(key);
  if (!v.is_number()) throw SpecError("key '" + key + "' must be a number");
  return v.get<double>();
}

double angle(const json& spec, const std::string& key, double max_radians) {
  const double a = number(spec, key);
  if (a > max_radians && a <= 360.0)
    throw SpecError("key '" + key + "' = " + std::to_string(a) +
                    " exceeds the radian range; angles are accepted in radians only, not degrees");
  return a;
}

Complex point(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SpecError("points must be [x, y] arrays of two numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

json point_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Domain domain_from_json(const json& spec) {
  constexpr double kPi = std::numbers::pi;
  if (!spec.is_object()) throw SpecError("domain spec must be a JSON object");
  if (!spec.contains("type") || !spec.at("type").is_string())
    throw SpecError("domain spec needs a string 'type'");
  const std::string type = spec.at("type").get<std::string>();
  if (type == "sector") {
    check_keys(spec, {"type", "alpha"});
    return Domain::sector(angle(spec, "alpha", 2 * kPi));
  }
  if (type == "double_sector") {
    check_keys(spec, {"type", "alpha", "beta"});
    return Domain::double_sector(angle(spec, "alpha", kPi), angle(spec, "beta", kPi));
  }
  if (type == "triangle") {
    check_keys(spec, {"type", "vertices"});
    if (!spec.contains("vertices") || !spec.at("vertices").is_array() || spec.at("vertices").size() != 3)
      throw SpecError("triangle needs 'vertices': three [x, y] points");
    const json& v = spec.at("vertices");
    return Domain::triangle(point(v[0]), point(v[1]), point(v[2]));
  }
  if (type == "parallelogram") {
    check_keys(spec, {"type", "r", "s", "alpha", "origin"});
    const Complex origin = spec.contains("origin") ? point(spec.at("origin")) : Complex(0.0);
    return Domain::parallelogram(number(spec, "r"), number(spec, "s"), angle(spec, "alpha", kPi / 2),
                                 origin);
  }
  if (type == "ellipse") {
    check_keys(spec, {"type", "a", "b"});
    return Domain::ellipse(number(spec, "a"), number(spec, "b"));
  }
  if (type == "disk") {
    check_keys(spec, {"type", "center", "radius"});
    const Complex c = spec.contains("center") ? point(spec.at("center")) : Complex(0.0);
    return Domain::disk(c, spec.contains("radius") ? number(spec, "radius") : 1.0);
  }
  if (type == "half_plane") {
    check_keys(spec, {"type"});
    return Domain::half_plane();
  }
  if (type == "arc_slit") {
    check_keys(spec, {"type", "a"});
    return Domain::arc_slit(angle(spec, "a", kPi / 2));
  }
  if (type == "punctured_plane") {
    check_keys(spec, {"type"});
    return Domain::punctured_plane();
  }
  if (type == "twice_punctured_plane") {
    check_keys(spec, {"type"});
    return Domain::twice_punctured_plane();
  }
  if (type == "disk_exterior") {
    check_keys(spec, {"type"});
    return Domain::disk_exterior();
  }
  throw SpecError("unknown domain type '" + type + "'");
}

Domain parse_domain_spec(std::string_view text) {
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
  return domain_from_json(spec);
}

Domain load_domain_spec(const std::string& inline_or_path) {
  const auto first = inline_or_path.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && inline_or_path[first] == '{') return parse_domain_spec(inline_or_path);
  std::ifstream in(inline_or_path);
  if (!in) throw SpecError("cannot open domain spec '" + inline_or_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_domain_spec(buf.str());
}

json domain_to_json(const Domain& d) {
  json out{{"type", std::string(to_string(d.kind()))}};
  if (const auto* s = d.as<shape::Sector>()) out["alpha"] = s->alpha;
  if (const auto* s = d.as<shape::DoubleSector>()) {
    out["alpha"] = s->alpha;
    out["beta"] = s->beta;
  }
  if (const auto* t = d.as<shape::Triangle>()) {
    out["vertices"] = json::array();
    for (Complex z : t->vertices) out["vertices"].push_back(point_to_json(z));
  }
  if (const auto* p = d.as<shape::Parallelogram>()) {
    out["r"] = p->r;
    out["s"] = p->s;
    out["alpha"] = p->alpha;
    if (p->origin != 0.0) out["origin"] = point_to_json(p->origin);
  }
  if (const auto* e = d.as<shape::Ellipse>()) {
    out["a"] = e->a;
    out["b"] = e->b;
  }
  if (const auto* c = d.as<shape::Disk>()) {
    out["center"] = point_to_json(c->center);
    out["radius"] = c->radius;
  }
  if (const auto* s = d.as<shape::ArcSlit>()) out["a"] = s->gap;
  return out;
}

}  // namespace confgeom
