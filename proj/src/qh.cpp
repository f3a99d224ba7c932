#include "confgeom/qh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "confgeom/errors.hpp"
#include "confgeom/quadrature.hpp"

namespace confgeom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_inside(const Domain& d, Complex x, Complex y) {
  if (!contains(d, x) || !contains(d, y))
    throw OutsideDomain("point outside " + std::string(to_string(d.kind())));
}

bool near(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

// Signed coordinate of z along the line through c with unit direction u, if z
// lies on that line.
std::optional<double> on_line(Complex z, Complex c, Complex u, double scale) {
  const Complex rel = (z - c) * std::conj(u);
  if (!near(rel.imag(), 0.0, scale)) return std::nullopt;
  return rel.real();
}

// Antiderivative of 1/d along the major axis of an ellipse, odd in t.
double ellipse_major_primitive(double a, double b, double t) {
  const double g = a * a - b * b, knee = a - b * b / a, s = std::sqrt(g);
  const double at = std::abs(t);
  double v;
  if (at <= knee) {
    v = s > 0 ? (s / b) * std::asin(at / s) : 0.0;
  } else {
    const double base = s > 0 ? (s / b) * std::asin(knee / s) : 0.0;
    v = base + std::log((a - knee) / (a - at));
  }
  return std::copysign(v, t);
}

// Antiderivative of 1/(R - |t|), odd in t: distance along a segment whose
// boundary distance falls linearly to zero at |t| = R.
double linear_primitive(double radius, double t) {
  return std::copysign(std::log(radius / (radius - std::abs(t))), t);
}

bool has_punctures(const Domain& d) {
  return d.kind() == DomainKind::PuncturedPlane || d.kind() == DomainKind::TwicePuncturedPlane;
}

// The segment [p, q] avoids the boundary: sphere tracing with the boundary distance.
bool segment_inside(const Domain& d, Complex p, Complex q) {
  const double len = std::abs(q - p);
  if (!contains(d, p) || !contains(d, q)) return false;
  if (len == 0) return true;
  const Complex dir = (q - p) / len;
  const double floor = 1e-13 * std::max({1.0, std::abs(p), std::abs(q)});
  double t = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    const Complex z = p + t * dir;
    if (!contains(d, z)) return false;
    const double dz = dist_to_boundary(d, z);
    if (dz >= len - t) return true;
    if (dz <= floor) return false;
    t += 0.9 * dz;
  }
  return false;
}

double segment_length(const Domain& d, Complex p, Complex q, const GaussRule& rule, int depth = 0) {
  const double len = std::abs(q - p);
  if (len == 0) return 0.0;
  const Complex mid = 0.5 * (p + q);
  const double dmin = std::min({dist_to_boundary(d, p), dist_to_boundary(d, q), dist_to_boundary(d, mid)});
  if (!(dmin > 0)) return kInf;
  if (len <= 0.5 * dmin || depth >= 40) {
    return len * rule.integrate([&](double t) { return 1.0 / dist_to_boundary(d, p + t * (q - p)); }, 0.0, 1.0);
  }
  return segment_length(d, p, mid, rule, depth + 1) + segment_length(d, mid, q, rule, depth + 1);
}

struct Grid {
  double x0, y0, h;
  int nx, ny;
  std::vector<double> dist;  // boundary distance, 0 for excluded nodes
  Complex node(int idx) const { return {x0 + (idx % nx) * h, y0 + (idx / nx) * h}; }
};

Box solver_box(const Domain& d, Complex x, Complex y, const GridSolverConfig& cfg) {
  if (cfg.box) return *cfg.box;
  if (d.bounded()) return d.frame();
  const Complex m = 0.5 * (x + y);
  const double half = 2 * std::abs(x - y) + std::max(dist_to_boundary(d, x), dist_to_boundary(d, y));
  const Box f = d.frame();
  return {std::min(f.xmin, m.real() - half), std::max(f.xmax, m.real() + half),
          std::min(f.ymin, m.imag() - half), std::max(f.ymax, m.imag() + half)};
}

class Straightener {
 public:
  Straightener(const Domain& d, double h) : d_(d), h_(h), rule_(gauss_rule(16)) {}

  double len(Complex p, Complex q) const { return segment_length(d_, p, q, rule_); }

  void remove_vertices(std::vector<Complex>& path) const {
    std::size_t i = 1;
    while (i + 1 < path.size()) {
      const double old_cost = len(path[i - 1], path[i]) + len(path[i], path[i + 1]);
      if (segment_inside(d_, path[i - 1], path[i + 1]) && len(path[i - 1], path[i + 1]) <= old_cost) {
        path.erase(path.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
  }

  void subdivide(std::vector<Complex>& path, std::size_t max_points) const {
    if (path.size() * 2 > max_points) return;
    std::vector<Complex> out{path.front()};
    for (std::size_t i = 1; i < path.size(); ++i) {
      out.push_back(0.5 * (path[i - 1] + path[i]));
      out.push_back(path[i]);
    }
    path.swap(out);
  }

  void relax(std::vector<Complex>& path, int sweeps) const {
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const Complex a = path[i - 1], c = path[i + 1];
        Complex p = path[i];
        double cost = len(a, p) + len(p, c);
        const Complex chord = c - a;
        if (std::abs(chord) == 0) continue;
        const Complex tangent = chord / std::abs(chord), normal = tangent * Complex(0, 1);
        double step = 0.25 * std::min(std::abs(p - a), std::abs(c - p));
        for (int k = 0; k < 8 && step > 1e-6 * h_; ++k) {
          bool moved = false;
          for (const Complex dir : {normal, -normal, tangent, -tangent}) {
            const Complex cand = p + step * dir;
            if (!contains(d_, cand)) continue;
            const double c_cost = len(a, cand) + len(cand, c);
            if (c_cost < cost && segment_inside(d_, a, cand) && segment_inside(d_, cand, c)) {
              p = cand;
              cost = c_cost;
              moved = true;
              break;
            }
          }
          if (!moved) step *= 0.5;
        }
        path[i] = p;
      }
    }
  }

 private:
  const Domain& d_;
  double h_;
  const GaussRule& rule_;
};

}  // namespace

std::string_view to_string(KMethod m) {
  switch (m) {
    case KMethod::Exact: return "exact";
    case KMethod::Grid: return "grid";
    case KMethod::Bound: return "bound";
  }
  return "unknown";
}

double j_metric(const Domain& d, Complex x, Complex y) {
  require_inside(d, x, y);
  if (x == y) return 0.0;
  const double m = std::min(dist_to_boundary(d, x), dist_to_boundary(d, y));
  return std::log1p(std::abs(x - y) / m);
}

std::optional<double> k_exact(const Domain& d, Complex x, Complex y) {
  require_inside(d, x, y);
  if (x == y) return 0.0;
  const double scale = std::max(std::abs(x), std::abs(y));
  switch (d.kind()) {
    case DomainKind::PuncturedPlane: {
      const double angle = std::abs(std::arg(x / y));
      const double radial = std::log(std::abs(x) / std::abs(y));
      return std::hypot(angle, radial);
    }
    case DomainKind::HalfPlane: {
      const double q = std::norm(x - y) / (2 * x.imag() * y.imag());
      return std::log1p(q + std::sqrt(q) * std::sqrt(q + 2));
    }
    case DomainKind::Sector: {
      const double alpha = d.as<shape::Sector>()->alpha;
      if (alpha > kPi) return std::nullopt;
      const Complex u = std::polar(1.0, alpha / 2);
      const auto tx = on_line(x, 0.0, u, scale), ty = on_line(y, 0.0, u, scale);
      if (!tx || !ty) return std::nullopt;
      return std::abs(std::log(*tx / *ty)) / std::sin(alpha / 2);
    }
    case DomainKind::Parallelogram: {
      if (!d.is_rhombus()) return std::nullopt;
      const auto* p = d.as<shape::Parallelogram>();
      const Complex center = 0.5 * (p->vertices[0] + p->vertices[2]);
      const Complex u = std::polar(1.0, p->alpha / 2);
      const double half = 0.5 * std::abs(p->vertices[2] - p->vertices[0]);
      const auto tx = on_line(x, center, u, half), ty = on_line(y, center, u, half);
      if (!tx || !ty) return std::nullopt;
      return std::abs(linear_primitive(half, *tx) - linear_primitive(half, *ty)) / std::sin(p->alpha / 2);
    }
    case DomainKind::Ellipse: {
      const auto* e = d.as<shape::Ellipse>();
      if (near(x.imag(), 0, e->a) && near(y.imag(), 0, e->a))
        return std::abs(ellipse_major_primitive(e->a, e->b, x.real()) -
                        ellipse_major_primitive(e->a, e->b, y.real()));
      if (near(x.real(), 0, e->a) && near(y.real(), 0, e->a))
        return std::abs(linear_primitive(e->b, x.imag()) - linear_primitive(e->b, y.imag()));
      return std::nullopt;
    }
    case DomainKind::Disk: {
      const auto* c = d.as<shape::Disk>();
      const Complex rx = x - c->center, ry = y - c->center;
      Complex u = std::abs(rx) >= std::abs(ry) ? rx : ry;
      u /= std::abs(u);
      const auto tx = on_line(x, c->center, u, c->radius), ty = on_line(y, c->center, u, c->radius);
      if (!tx || !ty) return std::nullopt;
      return std::abs(linear_primitive(c->radius, *tx) - linear_primitive(c->radius, *ty));
    }
    case DomainKind::TwicePuncturedPlane: {
      if (!near(x.real(), 0, scale) || !near(y.real(), 0, scale) || !near(x.imag(), -y.imag(), scale))
        return std::nullopt;
      const double t = std::abs(x.imag());
      return 2 * std::min(std::asinh(t), kPi - std::atan(t));
    }
    default:
      return std::nullopt;
  }
}

double qh_length(const Domain& d, const std::vector<Complex>& polyline) {
  const GaussRule& rule = gauss_rule(64);
  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) total += segment_length(d, polyline[i - 1], polyline[i], rule);
  return total;
}

GeodesicPath k_grid_path(const Domain& d, Complex x, Complex y, const GridSolverConfig& cfg) {
  if (cfg.resolution < 32) throw ConfigError("grid resolution must be at least 32");
  if (cfg.stencil != 8 && cfg.stencil != 16) throw ConfigError("stencil must be 8 or 16");
  if (cfg.passes < 0) throw ConfigError("passes must be non-negative");
  require_inside(d, x, y);
  if (x == y) return {0.0, 0.0, {x}};

  const Box box = solver_box(d, x, y, cfg);
  auto in_box = [&](Complex z) {
    return z.real() >= box.xmin && z.real() <= box.xmax && z.imag() >= box.ymin && z.imag() <= box.ymax;
  };
  if (!in_box(x) || !in_box(y)) throw ConfigError("solver box must contain both points");

  const double side = std::max(box.xmax - box.xmin, box.ymax - box.ymin);
  Grid g;
  g.h = side / cfg.resolution;
  g.x0 = box.xmin;
  g.y0 = box.ymin;
  g.nx = static_cast<int>(std::floor((box.xmax - box.xmin) / g.h + 1e-9)) + 1;
  g.ny = static_cast<int>(std::floor((box.ymax - box.ymin) / g.h + 1e-9)) + 1;
  const int n_nodes = g.nx * g.ny;
  g.dist.assign(n_nodes, 0.0);
  const bool punctured = has_punctures(d);
  for (int idx = 0; idx < n_nodes; ++idx) {
    const Complex z = g.node(idx);
    if (!contains(d, z)) continue;
    const double dz = dist_to_boundary(d, z);
    if (punctured && dz <= 2 * g.h) continue;
    g.dist[idx] = dz;
  }

  // Terminal connections reach every node within a radius fixed by the box,
  // so that refining the grid only adds paths.
  const Straightener st(d, g.h);
  const double terminal_radius = 2.5 * side / 32;
  const int source = n_nodes, target = n_nodes + 1;
  std::vector<double> to_target(n_nodes, kInf);
  std::vector<double> dist(n_nodes + 2, kInf);
  std::vector<int> prev(n_nodes + 2, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;

  auto connect = [&](Complex t, auto&& fn) {
    const int i0 = std::max(0, static_cast<int>(std::floor((t.real() - terminal_radius - g.x0) / g.h)));
    const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((t.real() + terminal_radius - g.x0) / g.h)));
    const int j0 = std::max(0, static_cast<int>(std::floor((t.imag() - terminal_radius - g.y0) / g.h)));
    const int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((t.imag() + terminal_radius - g.y0) / g.h)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const int idx = j * g.nx + i;
        if (g.dist[idx] <= 0) continue;
        const Complex z = g.node(idx);
        if (std::abs(z - t) > terminal_radius) continue;
        if (!segment_inside(d, t, z)) continue;
        fn(idx, st.len(t, z));
      }
    }
  };
  dist[source] = 0.0;
  connect(x, [&](int idx, double w) {
    if (w < dist[idx]) {
      dist[idx] = w;
      prev[idx] = source;
      queue.emplace(w, idx);
    }
  });
  connect(y, [&](int idx, double w) { to_target[idx] = w; });
  if (std::abs(x - y) <= terminal_radius && segment_inside(d, x, y)) {
    dist[target] = st.len(x, y);
    prev[target] = source;
  }

  std::vector<std::pair<int, int>> offsets{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  if (cfg.stencil == 16)
    for (auto o : {std::pair{1, 2}, {2, 1}, {-1, 2}, {-2, 1}, {1, -2}, {2, -1}, {-1, -2}, {-2, -1}}) offsets.push_back(o);

  while (!queue.empty()) {
    const auto [du, u] = queue.top();
    queue.pop();
    if (du > dist[u]) continue;
    if (du >= dist[target]) break;
    if (to_target[u] < kInf && du + to_target[u] < dist[target]) {
      dist[target] = du + to_target[u];
      prev[target] = u;
    }
    const int ui = u % g.nx, uj = u / g.nx;
    const double inv_u = 1.0 / g.dist[u];
    for (const auto& [oi, oj] : offsets) {
      const int vi = ui + oi, vj = uj + oj;
      if (vi < 0 || vj < 0 || vi >= g.nx || vj >= g.ny) continue;
      const int v = vj * g.nx + vi;
      const double dv = g.dist[v];
      const double elen = g.h * std::hypot(static_cast<double>(oi), static_cast<double>(oj));
      if (dv <= 0.5 * elen || g.dist[u] <= 0.5 * elen) continue;
      const double nd = du + elen * 0.5 * (inv_u + 1.0 / dv);
      if (nd < dist[v]) {
        dist[v] = nd;
        prev[v] = u;
        queue.emplace(nd, v);
      }
    }
  }
  if (!(dist[target] < kInf))
    throw Disconnected("no grid path between the points; increase the resolution");

  GeodesicPath out;
  out.raw_length = dist[target];
  for (int v = prev[target]; v != source; v = prev[v]) out.points.push_back(g.node(v));
  out.points.push_back(x);
  std::reverse(out.points.begin(), out.points.end());
  out.points.push_back(y);
  if (cfg.passes == 0) {
    out.length = out.raw_length;
    return out;
  }
  for (int pass = 0; pass < cfg.passes; ++pass) {
    st.remove_vertices(out.points);
    st.subdivide(out.points, 128);
    st.relax(out.points, 2);
  }
  st.remove_vertices(out.points);
  // Drop vertices lying on the chord of their neighbours.
  std::vector<Complex> kept{out.points.front()};
  for (std::size_t i = 1; i + 1 < out.points.size(); ++i) {
    const Complex a = kept.back(), b = out.points[i + 1], p = out.points[i];
    const double chord = std::abs(b - a);
    const double off = chord > 0 ? std::abs(std::imag((p - a) * std::conj(b - a))) / chord : std::abs(p - a);
    if (off > 1e-12 * std::max(1.0, chord)) kept.push_back(p);
  }
  kept.push_back(out.points.back());
  out.points.swap(kept);
  out.length = qh_length(d, out.points);
  return out;
}

double k_grid(const Domain& d, Complex x, Complex y, const GridSolverConfig& cfg) {
  return k_grid_path(d, x, y, cfg).length;
}

double k_lower_sector(double alpha, Complex x, Complex y) {
  return std::abs(std::log(std::abs(x) / std::abs(y))) / std::sin(alpha / 2);
}

double k_lower_sector_band(double alpha, Complex x, Complex y, int bands) {
  if (!(alpha > 0 && alpha <= kPi)) throw DomainError("sector band bound needs alpha in (0, pi]");
  const Domain s = Domain::sector(alpha);
  require_inside(s, x, y);
  const double U = std::abs(std::log(std::abs(x) / std::abs(y)));
  auto fold = [alpha](Complex z) {
    double t = std::arg(z);
    if (t < 0) t += 2 * kPi;
    return std::min(t, alpha - t);
  };
  const double p1 = std::min(fold(x), fold(y)), p2 = std::max(fold(x), fold(y));
  const double f0 = 1.0 / std::sin(alpha / 2);
  auto lambda = [](double phi) { return std::log(std::tan(phi / 2)); };
  const double l1 = lambda(p1), l2 = lambda(p2);
  if (!(l2 - l1 > 1e-14)) return f0 * U;

  const int nb = bands > 0 ? bands : std::clamp(static_cast<int>(std::ceil((l2 - l1) / 0.05)), 16, 4000);
  std::vector<double> f(nb), V(nb);
  for (int i = 0; i < nb; ++i) {
    const double la = l1 + (l2 - l1) * i / nb, lb = l1 + (l2 - l1) * (i + 1) / nb;
    V[i] = lb - la;  // integral of 1/sin over the band
    const double phi_hi = 2 * std::atan(std::exp(lb));
    f[i] = std::max(f0, 1.0 / std::sin(std::min(phi_hi, alpha / 2)));
  }
  // Horizontal travel in band i at multiplier mu.
  auto travel = [&](double mu, int i) {
    const double r = mu / f[i];
    return V[i] * r / (f[i] * std::sqrt((1 - r) * (1 + r)));
  };
  auto total_travel = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < nb; ++i) s += travel(mu, i);
    return s;
  };
  auto cost = [&](double mu, double rest) {
    double c = f0 * rest;
    for (int i = 0; i < nb; ++i) c += std::hypot(f[i] * travel(mu, i), V[i]);
    return c;
  };
  const double fmin = *std::min_element(f.begin(), f.end());
  if (fmin > f0) {
    const double s = total_travel(f0);
    if (s <= U) return cost(f0, U - s);
  }
  double lo = 0.0, hi = std::min(f0, fmin);
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (total_travel(mid) < U ? lo : hi) = mid;
  }
  return cost(lo, 0.0);
}

double triangle_geodesic_radius(double alpha, double beta) {
  if (!(alpha > 0 && beta > 0 && alpha + beta < kPi)) throw DomainError("need alpha, beta > 0 and alpha + beta < pi");
  const double sa = std::sin(alpha / 2), sb = std::sin(beta / 2);
  return sa * sb / (sa + sb);
}

MetricSample metric_sample(const Domain& d, Complex x, Complex y, MethodChoice choice, const GridSolverConfig& cfg) {
  MetricSample s{x, y, j_metric(d, x, y), 0.0, KMethod::Exact, std::nullopt};
  std::optional<double> exact;
  if (choice != MethodChoice::Grid) exact = k_exact(d, x, y);
  if (choice == MethodChoice::Exact && !exact)
    throw NoExactFormula("no closed formula for this pair in " + std::string(to_string(d.kind())));
  if (exact) {
    s.k = *exact;
  } else {
    s.k = k_grid(d, x, y, cfg);
    s.method = KMethod::Grid;
  }
  if (s.j > 0) s.ratio = s.k / s.j;
  return s;
}

nlohmann::json to_json(const MetricSample& s) {
  return {{"x", {s.x.real(), s.x.imag()}},
          {"y", {s.y.real(), s.y.imag()}},
          {"j", s.j},
          {"k", s.k},
          {"k_method", std::string(to_string(s.method))},
          {"ratio", s.ratio ? nlohmann::json(*s.ratio) : nlohmann::json(nullptr)}};
}

std::string polyline_csv(const std::vector<Complex>& points) {
  std::ostringstream out;
  out.precision(17);
  out << "x,y\n";
  for (const Complex z : points) out << z.real() << ',' << z.imag() << '\n';
  return out.str();
}

}  // namespace confgeom
