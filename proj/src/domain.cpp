#include "confgeom/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "confgeom/errors.hpp"
#include "confgeom/plane.hpp"
#include "confgeom/quadrature.hpp"

namespace confgeom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPunctureTolerance = 1e-14;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

double ray_distance(Complex p, Complex origin, Complex dir) {
  const Complex rel = (p - origin) * std::conj(dir);
  if (rel.real() <= 0) return std::abs(p - origin);
  return std::abs(rel.imag());
}

double polygon_distance(const std::vector<Complex>& v, Complex p) {
  double best = kInf;
  for (std::size_t i = 0; i < v.size(); ++i)
    best = std::min(best, segment_distance(p, v[i], v[(i + 1) % v.size()]));
  return best;
}

bool inside_convex_polygon(const std::vector<Complex>& v, Complex p) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex e = v[(i + 1) % v.size()] - v[i];
    const Complex w = p - v[i];
    if (e.real() * w.imag() - e.imag() * w.real() <= 0) return false;
  }
  return true;
}

Complex polygon_point(const std::vector<Complex>& v, double s) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += std::abs(v[(i + 1) % v.size()] - v[i]);
  double target = s * total;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex a = v[i], b = v[(i + 1) % v.size()];
    const double len = std::abs(b - a);
    if (target <= len || i + 1 == v.size()) {
      target = std::min(target, len);
      if (target <= 0.5 * len) return a + (b - a) * (target / len);
      return b + (a - b) * ((len - target) / len);
    }
    target -= len;
  }
  return v.front();
}

std::vector<double> polygon_corner_params(const std::vector<Complex>& v) {
  std::vector<double> cum{0.0};
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    total += std::abs(v[(i + 1) % v.size()] - v[i]);
    cum.push_back(total);
  }
  cum.pop_back();
  for (double& c : cum) c /= total;
  return cum;
}

double arg_positive(Complex z) {
  double t = std::arg(z);
  if (t < 0) t += kTwoPi;
  return t;
}

double wrap_unit(double s) {
  s -= std::floor(s);
  return s >= 1.0 ? 0.0 : s;
}

}  // namespace

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Sector: return "sector";
    case DomainKind::DoubleSector: return "double_sector";
    case DomainKind::Triangle: return "triangle";
    case DomainKind::Parallelogram: return "parallelogram";
    case DomainKind::Ellipse: return "ellipse";
    case DomainKind::Disk: return "disk";
    case DomainKind::HalfPlane: return "half_plane";
    case DomainKind::ArcSlit: return "arc_slit";
    case DomainKind::PuncturedPlane: return "punctured_plane";
    case DomainKind::TwicePuncturedPlane: return "twice_punctured_plane";
    case DomainKind::DiskExterior: return "disk_exterior";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Ellipse arc length

EllipseArc::EllipseArc(double a, double b) : a_(a), b_(b), cumulative_(kTableSize + 1, 0.0) {
  const auto& rule = gauss_rule(20);
  const double h = kTwoPi / kTableSize;
  for (int k = 0; k < kTableSize; ++k) {
    cumulative_[k + 1] =
        cumulative_[k] + rule.integrate([this](double t) { return speed(t); }, k * h, (k + 1) * h);
  }
}

double EllipseArc::speed(double t) const {
  return std::hypot(a_ * std::sin(t), b_ * std::cos(t));
}

double EllipseArc::arc_length(double t) const {
  const double h = kTwoPi / kTableSize;
  t = std::clamp(t, 0.0, kTwoPi);
  const int k = std::min(kTableSize - 1, static_cast<int>(t / h));
  const auto& rule = gauss_rule(20);
  return cumulative_[k] + rule.integrate([this](double u) { return speed(u); }, k * h, t);
}

double EllipseArc::param_at_length(double length) const {
  const double h = kTwoPi / kTableSize;
  length = std::clamp(length, 0.0, perimeter());
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), length);
  const int k = std::clamp(static_cast<int>(it - cumulative_.begin()) - 1, 0, kTableSize - 1);
  double t = k * h + (length - cumulative_[k]) / speed(k * h);
  for (int iter = 0; iter < 30; ++iter) {
    const double step = (arc_length(t) - length) / speed(t);
    t = std::clamp(t - step, k * h, (k + 1) * h);
    if (std::abs(step) < 1e-15) break;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Construction

Domain Domain::sector(double alpha) {
  if (!(alpha > 0 && alpha < kTwoPi)) throw InvalidDomain("sector: alpha must lie in (0, 2*pi)");
  return Domain(shape::Sector{alpha});
}

Domain Domain::double_sector(double alpha, double beta) {
  if (!(alpha > 0 && alpha < kPi && beta > 0 && beta < kPi))
    throw InvalidDomain("double_sector: alpha and beta must lie in (0, pi)");
  if (alpha + beta < kPi) throw InvalidDomain("double_sector: alpha + beta must be at least pi");
  return Domain(shape::DoubleSector{alpha, beta});
}

Domain Domain::triangle(Complex v1, Complex v2, Complex v3) {
  std::vector<Complex> v{v1, v2, v3};
  for (const Complex z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidDomain("triangle: non-finite vertex");
  const double area = signed_area(v);
  const double scale = std::max({std::abs(v1 - v2), std::abs(v2 - v3), std::abs(v3 - v1)});
  if (!(std::abs(area) > 1e-12 * scale * scale)) throw InvalidDomain("triangle: collinear vertices");
  if (area < 0) std::swap(v[1], v[2]);
  return Domain(shape::Triangle{std::move(v)});
}

Domain Domain::parallelogram(double r, double s, double alpha, Complex origin) {
  if (!(r > 0 && s > 0)) throw InvalidDomain("parallelogram: sides must be positive");
  if (!(alpha > 0 && alpha <= kPi / 2 + 1e-15))
    throw InvalidDomain("parallelogram: alpha must be the smallest angle, in (0, pi/2]");
  const Complex e = std::polar(1.0, alpha);
  std::vector<Complex> v{origin, origin + r, origin + r + s * e, origin + s * e};
  return Domain(shape::Parallelogram{origin, r, s, alpha, std::move(v)});
}

Domain Domain::ellipse(double a, double b) {
  if (!(b > 0 && a >= b && std::isfinite(a)))
    throw InvalidDomain("ellipse: semiaxes must satisfy a >= b > 0");
  return Domain(shape::Ellipse{a, b, std::make_shared<const EllipseArc>(a, b)});
}

Domain Domain::disk(Complex center, double radius) {
  if (!(radius > 0 && std::isfinite(radius))) throw InvalidDomain("disk: radius must be positive");
  return Domain(shape::Disk{center, radius});
}

Domain Domain::half_plane() { return Domain(shape::HalfPlane{}); }

Domain Domain::arc_slit(double gap) {
  if (!(gap > 0 && gap < kPi / 2)) throw InvalidDomain("arc_slit: gap must lie in (0, pi/2)");
  return Domain(shape::ArcSlit{gap});
}

Domain Domain::punctured_plane() { return Domain(shape::PuncturedPlane{}); }
Domain Domain::twice_punctured_plane() { return Domain(shape::TwicePuncturedPlane{}); }
Domain Domain::disk_exterior() { return Domain(shape::DiskExterior{}); }

DomainKind Domain::kind() const { return static_cast<DomainKind>(shape_.index()); }

bool Domain::bounded() const {
  switch (kind()) {
    case DomainKind::Triangle:
    case DomainKind::Parallelogram:
    case DomainKind::Ellipse:
    case DomainKind::Disk:
      return true;
    default:
      return false;
  }
}

bool Domain::jordan() const {
  switch (kind()) {
    case DomainKind::Sector:
    case DomainKind::DoubleSector:
    case DomainKind::HalfPlane:
      return true;
    default:
      return bounded();
  }
}

bool Domain::is_polygon() const {
  return kind() == DomainKind::Triangle || kind() == DomainKind::Parallelogram;
}

bool Domain::is_rhombus() const {
  const auto* p = as<shape::Parallelogram>();
  return p && std::abs(p->r - p->s) <= 1e-12 * std::max(p->r, p->s);
}

bool Domain::is_rectangle() const {
  const auto* p = as<shape::Parallelogram>();
  return p && std::abs(p->alpha - kPi / 2) <= 1e-12;
}

const std::vector<Complex>& Domain::vertices() const {
  static const std::vector<Complex> kNone;
  if (const auto* t = as<shape::Triangle>()) return t->vertices;
  if (const auto* p = as<shape::Parallelogram>()) return p->vertices;
  return kNone;
}

double Domain::perimeter() const {
  if (is_polygon()) {
    const auto& v = vertices();
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) total += std::abs(v[(i + 1) % v.size()] - v[i]);
    return total;
  }
  if (const auto* e = as<shape::Ellipse>()) return e->arc->perimeter();
  if (const auto* d = as<shape::Disk>()) return kTwoPi * d->radius;
  throw UnboundedDomain(std::string(to_string(kind())) + " has no finite perimeter");
}

Box Domain::frame() const {
  return std::visit(
      overloaded{
          [](const shape::Sector&) { return Box{-2, 2, -2, 2}; },
          [](const shape::DoubleSector&) { return Box{-1, 2, 0, 3}; },
          [this](const shape::Triangle&) {
            Box b{kInf, -kInf, kInf, -kInf};
            for (const Complex z : vertices()) {
              b.xmin = std::min(b.xmin, z.real());
              b.xmax = std::max(b.xmax, z.real());
              b.ymin = std::min(b.ymin, z.imag());
              b.ymax = std::max(b.ymax, z.imag());
            }
            return b;
          },
          [this](const shape::Parallelogram&) {
            Box b{kInf, -kInf, kInf, -kInf};
            for (const Complex z : vertices()) {
              b.xmin = std::min(b.xmin, z.real());
              b.xmax = std::max(b.xmax, z.real());
              b.ymin = std::min(b.ymin, z.imag());
              b.ymax = std::max(b.ymax, z.imag());
            }
            return b;
          },
          [](const shape::Ellipse& e) { return Box{-e.a, e.a, -e.b, e.b}; },
          [](const shape::Disk& d) {
            return Box{d.center.real() - d.radius, d.center.real() + d.radius,
                       d.center.imag() - d.radius, d.center.imag() + d.radius};
          },
          [](const shape::HalfPlane&) { return Box{-2, 2, 0, 4}; },
          [](const shape::ArcSlit&) { return Box{-2, 2, -2, 2}; },
          [](const shape::PuncturedPlane&) { return Box{-3, 3, -3, 3}; },
          [](const shape::TwicePuncturedPlane&) { return Box{-3, 3, -3, 3}; },
          [](const shape::DiskExterior&) { return Box{-4, 4, -4, 4}; },
      },
      shape_);
}

double Domain::diameter() const {
  const Box b = frame();
  if (const auto* e = as<shape::Ellipse>()) return 2 * e->a;
  if (const auto* d = as<shape::Disk>()) return 2 * d->radius;
  if (is_polygon()) {
    double best = 0.0;
    const auto& v = vertices();
    for (const Complex p : v)
      for (const Complex q : v) best = std::max(best, std::abs(p - q));
    return best;
  }
  return std::hypot(b.xmax - b.xmin, b.ymax - b.ymin);
}

// ---------------------------------------------------------------------------
// Boundary charts

Complex boundary_point(const Domain& d, double s) {
  s = wrap_unit(s);
  if (d.is_polygon()) return polygon_point(d.vertices(), s);
  if (const auto* e = d.as<shape::Ellipse>()) {
    const double t = e->arc->param_at_length(s * e->arc->perimeter());
    return {e->a * std::cos(t), e->b * std::sin(t)};
  }
  if (const auto* c = d.as<shape::Disk>()) return c->center + std::polar(c->radius, kTwoPi * s);
  throw UnboundedDomain("boundary_point: " + std::string(to_string(d.kind())) +
                        " has no compact Jordan boundary");
}

int leg_count(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::Sector: return 2;
    case DomainKind::DoubleSector: return 3;
    case DomainKind::ArcSlit: return 1;
    default: return 0;
  }
}

ExtComplex boundary_point_unbounded(const Domain& d, int leg, double t) {
  if (leg < 0 || leg >= leg_count(d))
    throw BadChart("boundary_point_unbounded: invalid leg for " + std::string(to_string(d.kind())));
  if (!(t >= 0)) throw BadChart("boundary_point_unbounded: chart coordinate must be >= 0");
  if (const auto* s = d.as<shape::Sector>()) {
    if (std::isinf(t)) return ExtComplex::infinity();
    return leg == 0 ? ExtComplex(t, 0.0) : ExtComplex(std::polar(t, s->alpha));
  }
  if (const auto* s = d.as<shape::DoubleSector>()) {
    if (leg == 0) {
      if (t > 1) throw BadChart("double_sector: segment chart is [0, 1]");
      return ExtComplex(t, 0.0);
    }
    if (std::isinf(t)) return ExtComplex::infinity();
    if (leg == 1) return ExtComplex(1.0 + std::polar(t, kPi - s->beta));
    return ExtComplex(std::polar(t, s->alpha));
  }
  const auto* slit = d.as<shape::ArcSlit>();
  if (t > kTwoPi - slit->gap) throw BadChart("arc_slit: chart is [0, 2*pi - gap]");
  return ExtComplex(std::polar(1.0, slit->gap + t));
}

ExtComplex extended_boundary_point(const Domain& d, double s) {
  s = wrap_unit(s);
  if (d.bounded()) return boundary_point(d, s);
  auto two_rays = [s](double alpha) -> ExtComplex {
    if (s < 0.5) return ExtComplex(std::tan(kPi * s), 0.0);
    const double u = s - 0.5;
    if (u == 0.0) return ExtComplex::infinity();
    return ExtComplex(std::polar(1.0 / std::tan(kPi * u), alpha));
  };
  if (const auto* sec = d.as<shape::Sector>()) return two_rays(sec->alpha);
  if (d.kind() == DomainKind::HalfPlane) return two_rays(kPi);
  if (const auto* ds = d.as<shape::DoubleSector>()) {
    if (s < 0.25) return ExtComplex(4.0 * s, 0.0);
    if (s < 0.625) {
      const double u = (s - 0.25) / 0.375;
      return ExtComplex(1.0 + std::polar(std::tan(0.5 * kPi * u), kPi - ds->beta));
    }
    const double u = (s - 0.625) / 0.375;
    if (u == 0.0) return ExtComplex::infinity();
    return ExtComplex(std::polar(1.0 / std::tan(0.5 * kPi * u), ds->alpha));
  }
  throw UnboundedDomain("extended_boundary_point: boundary of " + std::string(to_string(d.kind())) +
                        " is not a Jordan curve");
}

std::vector<double> boundary_corners(const Domain& d) {
  if (d.is_polygon()) return polygon_corner_params(d.vertices());
  switch (d.kind()) {
    case DomainKind::Sector: return {0.0, 0.5};
    case DomainKind::DoubleSector: return {0.0, 0.25, 0.625};
    default: return {};
  }
}

// ---------------------------------------------------------------------------
// Distance and membership

double ellipse_boundary_distance(double a, double b, Complex p) {
  const double y0 = std::abs(p.real()), y1 = std::abs(p.imag());
  const double g = a * a - b * b;
  if (y1 == 0.0) {
    // Nearest point is off-axis while the osculating disk at the vertex is larger.
    if (g > 0 && y0 < g / a) return b * std::sqrt(1.0 - y0 * y0 / g);
    return std::abs(y0 - a);
  }
  if (y0 == 0.0) return std::abs(y1 - b);

  // Tangency condition in Lagrange form: F(u) = (a y0/(u+g))^2 + (b y1/u)^2 - 1,
  // strictly decreasing for u > 0 with a unique root bracketed below.
  const double ay = a * y0, by = b * y1;
  auto F = [&](double u) {
    const double r0 = ay / (u + g), r1 = by / u;
    return r0 * r0 + r1 * r1 - 1.0;
  };
  auto dF = [&](double u) {
    const double r0 = ay / (u + g), r1 = by / u;
    return -2.0 * r0 * r0 / (u + g) - 2.0 * r1 * r1 / u;
  };
  double lo = by, hi = std::hypot(ay, by);
  double u = 0.5 * (lo + hi);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = F(u);
    if (f == 0.0) { converged = true; break; }
    (f > 0 ? lo : hi) = u;
    double next = iter < 50 ? u - f / dF(u) : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-16 * u || hi - lo <= 1e-16 * hi) {
      u = next;
      converged = true;
      break;
    }
    u = next;
  }
  if (!converged) throw NewtonDivergence("ellipse distance: root finder did not converge");
  return std::abs(b * b - u) * std::hypot(y0 / (u + g), y1 / u);
}

double dist_to_boundary(const Domain& d, Complex x) {
  return std::visit(
      overloaded{
          [x](const shape::Sector& s) {
            return std::min(ray_distance(x, 0.0, 1.0), ray_distance(x, 0.0, std::polar(1.0, s.alpha)));
          },
          [x](const shape::DoubleSector& s) {
            return std::min({segment_distance(x, 0.0, 1.0),
                             ray_distance(x, 1.0, std::polar(1.0, kPi - s.beta)),
                             ray_distance(x, 0.0, std::polar(1.0, s.alpha))});
          },
          [x](const shape::Triangle& t) { return polygon_distance(t.vertices, x); },
          [x](const shape::Parallelogram& p) { return polygon_distance(p.vertices, x); },
          [x](const shape::Ellipse& e) { return ellipse_boundary_distance(e.a, e.b, x); },
          [x](const shape::Disk& c) { return std::abs(c.radius - std::abs(x - c.center)); },
          [x](const shape::HalfPlane&) { return std::abs(x.imag()); },
          [x](const shape::ArcSlit& s) {
            const double r = std::abs(x);
            if (r == 0.0) return 1.0;
            const double t = arg_positive(x);
            if (t >= s.gap) return std::abs(r - 1.0);
            return std::min(std::abs(x - std::polar(1.0, s.gap)), std::abs(x - 1.0));
          },
          [x](const shape::PuncturedPlane&) { return std::abs(x); },
          [x](const shape::TwicePuncturedPlane&) {
            return std::min(std::abs(x - 1.0), std::abs(x + 1.0));
          },
          [x](const shape::DiskExterior&) { return std::abs(std::abs(x) - 1.0); },
      },
      d.shape());
}

bool contains(const Domain& d, Complex x) {
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return std::visit(
      overloaded{
          [x](const shape::Sector& s) {
            return x != 0.0 && arg_positive(x) > 0 && arg_positive(x) < s.alpha;
          },
          [x](const shape::DoubleSector& s) {
            if (!(x.imag() > 0)) return false;
            return std::arg(x) < s.alpha && std::arg(x - 1.0) > kPi - s.beta;
          },
          [x](const shape::Triangle& t) { return inside_convex_polygon(t.vertices, x); },
          [x](const shape::Parallelogram& p) { return inside_convex_polygon(p.vertices, x); },
          [x](const shape::Ellipse& e) {
            const double u = x.real() / e.a, v = x.imag() / e.b;
            return u * u + v * v < 1.0;
          },
          [x](const shape::Disk& c) { return std::abs(x - c.center) < c.radius; },
          [x](const shape::HalfPlane&) { return x.imag() > 0; },
          [x](const shape::ArcSlit& s) {
            const double r = std::abs(x);
            if (std::abs(r - 1.0) > kPunctureTolerance) return true;
            return arg_positive(x) < s.gap && x.imag() > 0;
          },
          [x](const shape::PuncturedPlane&) { return std::abs(x) > kPunctureTolerance; },
          [x](const shape::TwicePuncturedPlane&) {
            return std::abs(x - 1.0) > kPunctureTolerance && std::abs(x + 1.0) > kPunctureTolerance;
          },
          [x](const shape::DiskExterior&) { return std::abs(x) > 1.0; },
      },
      d.shape());
}

}  // namespace confgeom
