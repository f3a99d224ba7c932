#include "confgeom/uniformity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "confgeom/errors.hpp"
#include "confgeom/plane.hpp"

namespace confgeom {

namespace {

constexpr double kPi = std::numbers::pi;

// Epsilon ladder 1e-10, 1e-20, ..., 1e-100.
std::vector<double> epsilon_ladder() {
  std::vector<double> out;
  for (int k = 1; k <= 10; ++k) out.push_back(std::pow(10.0, -10.0 * k));
  return out;
}

double log_scale(double eps) { return 1.0 / std::log(1.0 / eps); }

MetricSample make_sample(Complex x, Complex y, double j, double k, KMethod m) {
  MetricSample s{x, y, j, k, m, std::nullopt};
  if (j > 0) s.ratio = k / j;
  return s;
}

void finish(Ladder& l, const std::vector<double>& h) {
  std::vector<double> r;
  for (const auto& s : l.steps) r.push_back(*s.sample.ratio);
  l.extrapolated = h.empty() ? r.back() : extrapolate_to_zero(h, r);
}

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double t = std::clamp(std::real((p - a) * std::conj(ab)) / std::norm(ab), 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

double point_ray_distance(Complex p, Complex a, Complex dir) {
  const double t = std::max(0.0, std::real((p - a) * std::conj(dir)));
  return std::abs(p - (a + t * dir));
}

// A convex corner: the domain agrees with the sector v + u * S_angle inside
// the disk of radius `reach` about v, and lies inside that sector.
struct Corner {
  Complex v, u;
  double angle, reach;
};

// Pairs x on the bisector at radius rho, y on the unit circle at the same
// boundary distance, in the sector frame scaled by reach/2.
Ladder corner_ladder(const Corner& c) {
  Ladder l{"vertex_sector", {}, 0.0};
  const double s = std::sin(c.angle / 2), scale = std::isfinite(c.reach) ? c.reach / 2 : 1.0;
  std::vector<double> h;
  for (const double rho : epsilon_ladder()) {
    const Complex xw = std::polar(rho, c.angle / 2), yw = std::polar(1.0, std::asin(rho * s));
    const double k = k_lower_sector_band(c.angle, xw, yw);
    const double j = std::log1p(std::abs(xw - yw) / (rho * s));
    l.steps.push_back({rho, make_sample(c.v + scale * c.u * xw, c.v + scale * c.u * yw, j, k, KMethod::Bound)});
    h.push_back(log_scale(rho));
  }
  finish(l, h);
  return l;
}

std::vector<Corner> polygon_corners(const Domain& d) {
  const auto& v = d.vertices();
  const auto angles = interior_angles(v);
  const std::size_t n = v.size();
  std::vector<Corner> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex q = v[(i + 1) % n];
    double reach = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < n; ++e) {
      if (e == i || (e + 1) % n == i) continue;
      reach = std::min(reach, point_segment_distance(v[i], v[e], v[(e + 1) % n]));
    }
    out.push_back({v[i], (q - v[i]) / std::abs(q - v[i]), angles[i], reach});
  }
  return out;
}

std::vector<Corner> corners(const Domain& d) {
  if (d.is_polygon()) return polygon_corners(d);
  if (const auto* s = d.as<shape::Sector>()) {
    if (s->alpha <= kPi) return {{0.0, 1.0, s->alpha, std::numeric_limits<double>::infinity()}};
    return {};
  }
  if (const auto* s = d.as<shape::DoubleSector>()) {
    std::vector<Corner> out;
    if (s->alpha <= kPi) {
      const double reach = std::min(1.0, point_ray_distance(0.0, 1.0, std::polar(1.0, kPi - s->beta)));
      out.push_back({0.0, 1.0, s->alpha, reach});
    }
    if (s->beta <= kPi) {
      const double reach = std::min(1.0, point_ray_distance(1.0, 0.0, std::polar(1.0, s->alpha)));
      out.push_back({1.0, std::polar(1.0, kPi - s->beta), s->beta, reach});
    }
    return out;
  }
  return {};
}

const Corner* sharpest(const std::vector<Corner>& cs) {
  const Corner* best = nullptr;
  for (const auto& c : cs)
    if (!best || c.angle < best->angle) best = &c;
  return best;
}

// Triangle pairs near the two sharpest corners along their bisectors.
Ladder triangle_medial_ladder(const Domain& d) {
  auto cs = polygon_corners(d);
  std::sort(cs.begin(), cs.end(), [](const Corner& a, const Corner& b) { return a.angle < b.angle; });
  const Corner &A = cs[0], &B = cs[1];
  const double sa = std::sin(A.angle / 2), sb = std::sin(B.angle / 2);
  const Complex ua = A.u * std::polar(1.0, A.angle / 2), ub = B.u * std::polar(1.0, B.angle / 2);
  const double side = std::abs(A.v - B.v);
  const double ra = side * (1 / sa) / (1 / sa + 1 / sb), rb = side - ra;
  Ladder l{"triangle_medial", {}, 0.0};
  std::vector<double> h;
  for (const double eps : epsilon_ladder()) {
    const double k = std::log(ra / eps) / sa + std::log(rb / eps) / sb;
    const double j = std::log1p(std::abs((A.v - B.v) + eps * (ua - ub)) / (eps * std::min(sa, sb)));
    l.steps.push_back({eps, make_sample(A.v + eps * ua, B.v + eps * ub, j, k, KMethod::Bound)});
    h.push_back(log_scale(eps));
  }
  finish(l, h);
  return l;
}

// Symmetric pairs +-(1 - delta) on a segment of half-length one whose
// boundary distance falls linearly with slope `slope` towards both ends.
Ladder symmetric_ladder(const std::string& family, Complex center, Complex half, double slope) {
  Ladder l{family, {}, 0.0};
  std::vector<double> h;
  for (const double delta : epsilon_ladder()) {
    const double k = 2 * std::log(1 / delta) / slope;
    const double j = std::log1p(2 * (1 - delta) / (delta * slope));
    l.steps.push_back({delta, make_sample(center - (1 - delta) * half, center + (1 - delta) * half, j, k, KMethod::Exact)});
    h.push_back(log_scale(delta));
  }
  finish(l, h);
  return l;
}

// Grid value, doubling the resolution while the pair is not grid-connected.
MetricSample grid_sample(const Domain& d, Complex x, Complex y, GridSolverConfig qh) {
  for (;;) {
    try {
      return metric_sample(d, x, y, MethodChoice::Grid, qh);
    } catch (const Disconnected&) {
      if (qh.resolution >= 4096) throw;
      qh.resolution *= 2;
    }
  }
}

Ladder single(const std::string& family, double parameter, const MetricSample& s) {
  Ladder l{family, {{parameter, s}}, 0.0};
  l.extrapolated = *s.ratio;
  return l;
}

}  // namespace

double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& values) {
  if (h.size() != values.size() || h.empty()) throw ConfigError("extrapolation needs matching nonempty samples");
  const std::size_t n = h.size();
  if (n == 1) return values[0];
  if (n == 2) return (h[1] * values[0] - h[0] * values[1]) / (h[1] - h[0]);
  // Fit v = (a + b h) / (1 + c h) through the last three points; the limit is a.
  const double h0 = h[n - 3], h1 = h[n - 2], h2 = h[n - 1];
  const double v0 = values[n - 3], v1 = values[n - 2], v2 = values[n - 1];
  // Rows: a + b h_i - c h_i v_i = v_i.
  auto det3 = [](double a1, double b1, double c1, double a2, double b2, double c2, double a3, double b3, double c3) {
    return a1 * (b2 * c3 - b3 * c2) - b1 * (a2 * c3 - a3 * c2) + c1 * (a2 * b3 - a3 * b2);
  };
  const double det = det3(1, h0, -h0 * v0, 1, h1, -h1 * v1, 1, h2, -h2 * v2);
  const double num = det3(v0, h0, -h0 * v0, v1, h1, -h1 * v1, v2, h2, -h2 * v2);
  if (std::abs(det) > 1e-300 && std::isfinite(num / det)) return num / det;
  return (h2 * v1 - h1 * v2) / (h2 - h1);
}

double solve_beta() {
  auto f = [](double t) { return std::asinh(t) + std::atan(t) - kPi; };
  double lo = 0.0, hi = 10.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double twice_punctured_certificate() {
  const double b = solve_beta();
  return 2 * std::asinh(b) / std::log1p(2 * b / std::sqrt(1 + b * b));
}

double sector_uniformity(double alpha) {
  if (!(alpha > 0 && alpha <= kPi)) throw DomainError("sector formula needs alpha in (0, pi]");
  return 1 + 1 / std::sin(alpha / 2);
}

double bilipschitz_transfer(double a, double lipschitz) {
  if (!(a >= 1) || !(lipschitz >= 1)) throw DomainError("need A >= 1 and L >= 1");
  return std::pow(lipschitz, 4) * a;
}

double arc_slit_certificate(double gap) {
  if (!(gap > 0 && gap < kPi / 2)) throw DomainError("gap must lie in (0, pi/2)");
  return (std::log((1 + std::cos(gap / 2)) / std::sin(gap / 2)) + kPi / 2 + gap / 2) / std::log(3.0);
}

double ellipse_certificate(double c) {
  if (!(c >= 1)) throw DomainError("axis ratio must be at least 1");
  if (c == 1) return 2.0;
  const double major = 2 * std::sqrt(c * c - 1) * std::asin(std::sqrt(1 - 1 / (c * c))) / std::log(2 * c * c - 1);
  return std::max(2.0, major);
}

std::pair<double, double> rectangle_readings(double a, double b) {
  if (a < b) std::swap(a, b);
  return {2 * std::sqrt(2.0) * std::pow(b / a, 4), 2 * std::sqrt(2.0) * std::pow(a / b, 4)};
}

Certificate certificate_lower_bound(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::Sector: {
      const double alpha = d.as<shape::Sector>()->alpha;
      if (alpha > kPi) throw NoCertificate("no certificate for sectors wider than pi");
      return {"sector", sector_uniformity(alpha), "x on the bisector, y at equal boundary distance, |x|/|y| -> 0"};
    }
    case DomainKind::HalfPlane:
      return {"sector", sector_uniformity(kPi), "x = rho i, y on the unit circle at height rho, rho -> 0"};
    case DomainKind::Disk:
      return {"ball", 2.0, "diameter pairs +-(1 - delta) R, delta -> 0"};
    case DomainKind::Triangle: {
      auto a = interior_angles(d.vertices());
      std::sort(a.begin(), a.end());
      return {"triangle_medial", 1 / std::sin(a[0] / 2) + 1 / std::sin(a[1] / 2),
              "pairs at distance eps from the two sharpest corners on their bisectors, eps -> 0"};
    }
    case DomainKind::Parallelogram: {
      const double alpha = d.as<shape::Parallelogram>()->alpha;
      if (d.is_rhombus())
        return {"rhombus_diagonal", 2 / std::sin(alpha / 2), "pairs +-x on the long diagonal, |x| -> end"};
      return {"vertex_angle", 1 + 1 / std::sin(alpha / 2), "sector pairs at the sharpest corner"};
    }
    case DomainKind::DoubleSector: {
      const auto* s = d.as<shape::DoubleSector>();
      const double m = std::min(s->alpha, s->beta);
      if (m > kPi) throw NoCertificate("no convex corner");
      return {"vertex_angle", 1 + 1 / std::sin(m / 2), "sector pairs at the sharpest corner"};
    }
    case DomainKind::Ellipse: {
      const auto* e = d.as<shape::Ellipse>();
      return {"ellipse_axes", ellipse_certificate(e->a / e->b),
              "major axis pair at the focal-curvature points and minor axis pairs +-(1 - delta) b i"};
    }
    case DomainKind::ArcSlit:
      return {"arc_slit", arc_slit_certificate(d.as<shape::ArcSlit>()->gap), "x = 0, y = 2"};
    case DomainKind::DiskExterior:
      return {"ball_complement", kPi / std::log(3.0), "antipodal pairs +-R, R -> inf"};
    case DomainKind::TwicePuncturedPlane:
      return {"twice_punctured", twice_punctured_certificate(), "pair +-beta i"};
    case DomainKind::PuncturedPlane:
      break;
  }
  throw NoCertificate("no certificate for " + std::string(to_string(d.kind())));
}

std::optional<std::pair<double, double>> closed_bounds(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::Sector: {
      const double alpha = d.as<shape::Sector>()->alpha;
      if (alpha > kPi) return std::nullopt;
      return std::pair{sector_uniformity(alpha), sector_uniformity(alpha)};
    }
    case DomainKind::HalfPlane:
    case DomainKind::Disk:
      return std::pair{2.0, 2.0};
    case DomainKind::Ellipse: {
      const auto* e = d.as<shape::Ellipse>();
      const double c = e->a / e->b;
      return std::pair{ellipse_certificate(c), bilipschitz_transfer(2.0, c)};
    }
    case DomainKind::DiskExterior:
      return std::pair{kPi / std::log(3.0), 4 * kPi / std::log(3.0)};
    default:
      return std::nullopt;
  }
}

std::vector<Ladder> certificate_ladders(const Domain& d, const GridSolverConfig& qh) {
  std::vector<Ladder> out;
  switch (d.kind()) {
    case DomainKind::Sector:
    case DomainKind::DoubleSector:
    case DomainKind::Triangle:
    case DomainKind::Parallelogram: {
      if (d.is_rhombus()) {
        const auto* p = d.as<shape::Parallelogram>();
        const Complex center = 0.5 * (p->vertices[0] + p->vertices[2]);
        out.push_back(symmetric_ladder("rhombus_diagonal", center, p->vertices[2] - center, std::sin(p->alpha / 2)));
      }
      if (d.kind() == DomainKind::Triangle) out.push_back(triangle_medial_ladder(d));
      const auto cs = corners(d);
      if (const Corner* c = sharpest(cs)) out.push_back(corner_ladder(*c));
      break;
    }
    case DomainKind::HalfPlane: {
      Ladder l{"vertex_sector", {}, 0.0};
      std::vector<double> h;
      for (const double rho : epsilon_ladder()) {
        const Complex x(0, rho), y = std::polar(1.0, std::asin(rho));
        l.steps.push_back({rho, metric_sample(d, x, y, MethodChoice::Exact)});
        h.push_back(log_scale(rho));
      }
      finish(l, h);
      out.push_back(std::move(l));
      break;
    }
    case DomainKind::Disk: {
      const auto* c = d.as<shape::Disk>();
      out.push_back(symmetric_ladder("diameter", c->center, c->radius, 1.0));
      break;
    }
    case DomainKind::Ellipse: {
      const auto* e = d.as<shape::Ellipse>();
      out.push_back(symmetric_ladder("minor_axis", 0.0, Complex(0, e->b), 1.0));
      const double knee = e->a - e->b * e->b / e->a;
      if (knee > 0) out.push_back(single("major_axis", knee, metric_sample(d, -knee, knee, MethodChoice::Exact)));
      break;
    }
    case DomainKind::TwicePuncturedPlane: {
      const double b = solve_beta();
      out.push_back(single("symmetric_pair", b, metric_sample(d, {0, b}, {0, -b}, MethodChoice::Exact)));
      break;
    }
    case DomainKind::PuncturedPlane:
      out.push_back(single("antipodal", 1.0, metric_sample(d, 1.0, -1.0, MethodChoice::Exact)));
      break;
    case DomainKind::DiskExterior: {
      Ladder l{"antipodal", {}, 0.0};
      std::vector<double> h;
      for (const double r : {2.0, 5.0, 10.0, 30.0, 100.0}) {
        l.steps.push_back({r, grid_sample(d, r, -r, qh)});
        h.push_back(1 / r);
      }
      finish(l, h);
      out.push_back(std::move(l));
      break;
    }
    case DomainKind::ArcSlit:
      out.push_back(single("through_gap", 0.0, grid_sample(d, 0.0, 2.0, qh)));
      break;
  }
  return out;
}

Complex sample_point(const Domain& d, std::mt19937_64& rng, double clearance) {
  const Box b = d.frame();
  std::uniform_real_distribution<double> ux(b.xmin, b.xmax), uy(b.ymin, b.ymax);
  for (int i = 0; i < 1000000; ++i) {
    const Complex z{ux(rng), uy(rng)};
    if (contains(d, z) && dist_to_boundary(d, z) > clearance) return z;
  }
  throw ConfigError("could not sample an interior point");
}

UniformityEstimate estimate_uniformity(const Domain& d, const UniformityConfig& cfg) {
  if (cfg.samples < 0) throw ConfigError("samples must be non-negative");
  const auto start = std::chrono::steady_clock::now();
  UniformityEstimate e;
  e.config = cfg;
  try {
    e.certificate = certificate_lower_bound(d);
  } catch (const NoCertificate&) {
  }
  e.closed_bounds = closed_bounds(d);
  if (d.is_rectangle() && !d.is_rhombus()) {
    const auto* p = d.as<shape::Parallelogram>();
    const auto [lo, hi] = rectangle_readings(p->r, p->s);
    e.notes.push_back({"rectangle_reading_b_over_a", lo});
    e.notes.push_back({"rectangle_reading_a_over_b", hi});
  }

  bool have = false;
  auto consider = [&](const MetricSample& s) {
    if (s.ratio && (!have || *s.ratio > e.lower)) {
      e.lower = *s.ratio;
      e.witness = s;
      have = true;
    }
  };
  if (cfg.structured) {
    e.ladders = certificate_ladders(d, cfg.qh);
    for (const auto& l : e.ladders)
      for (const auto& s : l.steps) consider(s.sample);
  }

  std::mt19937_64 rng(cfg.seed);
  const double clearance = 1e-6 * d.diameter();
  std::vector<std::pair<Complex, Complex>> pairs;
  while (static_cast<int>(pairs.size()) < cfg.samples) {
    const Complex x = sample_point(d, rng, clearance), y = sample_point(d, rng, clearance);
    if (x != y) pairs.emplace_back(x, y);
  }
  std::vector<std::optional<MetricSample>> results(pairs.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < pairs.size(); i += stride) {
      try {
        results[i] = metric_sample(d, pairs[i].first, pairs[i].second, MethodChoice::Auto, cfg.qh);
      } catch (const Disconnected&) {
      }
    }
  };
  int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, cfg.samples));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, static_cast<std::size_t>(w), static_cast<std::size_t>(workers));
    for (auto& t : pool) t.join();
  }
  int skipped = 0;
  for (const auto& r : results) {
    if (r) consider(*r);
    else ++skipped;
  }
  if (skipped > 0) e.notes.push_back({"disconnected_pairs", static_cast<double>(skipped)});
  e.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return e;
}

ConjectureReport conjecture_report(const Domain& d, const UniformityConfig& ucfg, const PtolemyConfig& pcfg) {
  const auto u = estimate_uniformity(d, ucfg);
  const auto p = estimate_ptolemy_constant(d, pcfg);
  ConjectureReport r;
  r.a_lower = u.lower;
  r.a_source = "estimate";
  if (u.certificate && u.certificate->value > r.a_lower) {
    r.a_lower = u.certificate->value;
    r.a_source = "certificate";
  }
  r.one_plus_p_lower = 1 + p.lower;
  r.margin = r.a_lower - r.one_plus_p_lower;
  return r;
}

nlohmann::json to_json(const UniformityEstimate& e, bool meta) {
  nlohmann::json j;
  j["schema"] = 1;
  j["lower"] = e.lower;
  j["certificate"] = e.certificate ? nlohmann::json{{"name", e.certificate->name},
                                                    {"value", e.certificate->value},
                                                    {"witness", e.certificate->witness}}
                                   : nlohmann::json(nullptr);
  j["closed_bounds"] = e.closed_bounds ? nlohmann::json::array({e.closed_bounds->first, e.closed_bounds->second})
                                       : nlohmann::json(nullptr);
  j["witness"] = to_json(e.witness);
  j["ladders"] = nlohmann::json::array();
  for (const auto& l : e.ladders) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : l.steps) {
      auto sj = to_json(s.sample);
      sj["parameter"] = s.parameter;
      steps.push_back(sj);
    }
    j["ladders"].push_back({{"family", l.family}, {"steps", steps}, {"extrapolated", l.extrapolated}});
  }
  j["notes"] = nlohmann::json::object();
  for (const auto& n : e.notes) j["notes"][n.name] = n.value;
  j["config"] = {{"samples", e.config.samples},
                 {"seed", e.config.seed},
                 {"resolution", e.config.qh.resolution},
                 {"stencil", e.config.qh.stencil},
                 {"passes", e.config.qh.passes},
                 {"structured", e.config.structured}};
  if (meta) j["wall_time_ms"] = e.wall_time_ms;
  return j;
}

nlohmann::json to_json(const ConjectureReport& r) {
  return {{"schema", 1}, {"a_lower", r.a_lower}, {"a_source", r.a_source}, {"one_plus_p_lower", r.one_plus_p_lower}, {"margin", r.margin}};
}

std::string certificate_csv(const std::vector<std::pair<std::string, Domain>>& domains) {
  std::ostringstream out;
  out.precision(17);
  out << "domain,certificate,value,lo,hi\n";
  for (const auto& [name, d] : domains) {
    out << name << ',';
    try {
      const auto c = certificate_lower_bound(d);
      out << c.name << ',' << c.value;
    } catch (const NoCertificate&) {
      out << ",";
    }
    out << ',';
    if (const auto b = closed_bounds(d)) out << b->first << ',' << b->second;
    else out << ',';
    out << '\n';
  }
  return out.str();
}

}  // namespace confgeom
