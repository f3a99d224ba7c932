#include "confgeom/ptolemy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "confgeom/errors.hpp"
#include "confgeom/nelder_mead.hpp"
#include "confgeom/plane.hpp"

namespace confgeom {

namespace {

constexpr double kPi = std::numbers::pi;
// Smaller chart gaps let rounding in the boundary coordinates dominate p.
constexpr double kMinGap = 0x1p-20;
constexpr double kPenalty = 1e6;
constexpr int kLadderDepth = 16;

// Distance with the point at infinity replaced by unit factors; in the ratio
// these cancel pairwise, which is the Moebius limit.
double factor(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() || b.is_infinite()) return 1.0;
  return std::abs(a.value() - b.value());
}

// NaN for coincident points or more than one infinity.
double ratio_or_nan(const std::array<ExtComplex, 4>& q) {
  int infinite = 0;
  for (const auto& z : q) infinite += z.is_infinite();
  if (infinite > 1) return std::nan("");
  const double ab = factor(q[0], q[1]), cd = factor(q[2], q[3]), ad = factor(q[0], q[3]),
               bc = factor(q[1], q[2]), ac = factor(q[0], q[2]), bd = factor(q[1], q[3]);
  if (ab == 0 || cd == 0 || ad == 0 || bc == 0 || ac == 0 || bd == 0) return std::nan("");
  return (ab * cd + ad * bc) / (ac * bd);
}

double wrap(double s) {
  s -= std::floor(s);
  return s >= 1.0 ? 0.0 : s;
}

struct Cell {
  double value;
  std::array<int, 4> idx;
};

bool better(const Cell& x, const Cell& y) {
  return x.value > y.value || (x.value == y.value && x.idx < y.idx);
}

struct GridResult {
  Cell best{-1.0, {0, 0, 0, 0}};
  std::vector<Cell> top;  // heap ordered by `better`: front is the weakest
};

void push_top(std::vector<Cell>& heap, const Cell& c, std::size_t cap) {
  auto weaker_first = [](const Cell& x, const Cell& y) { return better(x, y); };
  if (heap.size() < cap) {
    heap.push_back(c);
    std::push_heap(heap.begin(), heap.end(), weaker_first);
  } else if (better(c, heap.front())) {
    std::pop_heap(heap.begin(), heap.end(), weaker_first);
    heap.back() = c;
    std::push_heap(heap.begin(), heap.end(), weaker_first);
  }
}

GridResult scan_grid(const std::vector<double>& dist, int n, std::size_t cap, int worker, int workers) {
  GridResult out;
  auto m = [&](int i, int j) { return dist[static_cast<std::size_t>(i) * n + j]; };
  double threshold = -1.0;
  for (int i = worker; i < n; i += workers) {
    for (int j = i + 1; j < n; ++j) {
      const double dij = m(i, j);
      for (int k = j + 1; k < n; ++k) {
        const double dik = m(i, k), djk = m(j, k);
        const double* row_k = &dist[static_cast<std::size_t>(k) * n];
        const double* row_i = &dist[static_cast<std::size_t>(i) * n];
        const double* row_j = &dist[static_cast<std::size_t>(j) * n];
        for (int l = k + 1; l < n; ++l) {
          const double v = (dij * row_k[l] + row_i[l] * djk) / (dik * row_j[l]);
          if (!(v >= threshold)) continue;
          const Cell c{v, {i, j, k, l}};
          if (better(c, out.best)) out.best = c;
          push_top(out.top, c, cap);
          if (out.top.size() == cap) threshold = out.top.front().value;
        }
      }
    }
  }
  return out;
}

class Refiner {
 public:
  Refiner(const Domain& d, const PtolemyConfig& cfg) : d_(d), cfg_(cfg), rng_(cfg.seed) {}

  std::array<ExtComplex, 4> points(const std::vector<double>& x) const {
    return {extended_boundary_point(d_, wrap(x[0])), extended_boundary_point(d_, wrap(x[1])),
            extended_boundary_point(d_, wrap(x[2])), extended_boundary_point(d_, wrap(x[3]))};
  }

  double violation(const std::vector<double>& x) const {
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += std::max(0.0, kMinGap - (x[k + 1] - x[k]));
    v += std::max(0.0, kMinGap - (x[0] + 1.0 - x[3]));
    return v;
  }

  double value(const std::vector<double>& x) const {
    if (violation(x) > 0) return std::nan("");
    return ratio_or_nan(points(x));
  }

  // Simplex refinement of -p with ordering enforced by a penalty.
  std::vector<double> refine(std::vector<double> x0, std::vector<double> step) {
    for (double& s : step)
      if (rng_() & 1u) s = -s;
    auto objective = [this](const std::vector<double>& x) {
      const double viol = violation(x);
      if (viol > 0) return -1.0 + kPenalty * viol;
      const double v = ratio_or_nan(points(x));
      return std::isfinite(v) ? -v : kPenalty;
    };
    return nelder_mead(objective, x0, step, cfg_.refine_iters).x;
  }

 private:
  const Domain& d_;
  const PtolemyConfig& cfg_;
  std::mt19937_64 rng_;
};

QuadrupleResult make_result(const Refiner& r, const std::vector<double>& x, double value) {
  QuadrupleResult q;
  q.points = r.points(x);
  for (int k = 0; k < 4; ++k) q.params[k] = wrap(x[k]);
  q.value = value;
  return q;
}

}  // namespace

double ptolemy_ratio(const ExtComplex& a, const ExtComplex& b, const ExtComplex& c, const ExtComplex& d) {
  const std::array<ExtComplex, 4> q{a, b, c, d};
  int infinite = 0;
  for (const auto& z : q) infinite += z.is_infinite();
  if (infinite > 1) throw TwoInfinite("ptolemy_ratio: more than one point at infinity");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (q[i] == q[j]) throw DegenerateInput("ptolemy_ratio: coincident points");
  return ratio_or_nan(q);
}

PtolemyEstimate estimate_ptolemy_constant(const Domain& d, const PtolemyConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.grid_n < 8) throw ConfigError("grid_n must be at least 8");
  if (cfg.multistarts < 0 || cfg.refine_iters < 0) throw ConfigError("sizes must be non-negative");
  if (!d.jordan())
    throw InvalidDomain("ptolemy estimator needs a Jordan boundary; " + std::string(to_string(d.kind())) +
                        " has none");

  const int n = cfg.grid_n;
  std::vector<ExtComplex> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) samples.push_back(extended_boundary_point(d, static_cast<double>(i) / n));
  std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dist[static_cast<std::size_t>(i) * n + j] = factor(samples[i], samples[j]);

  const std::size_t cap = static_cast<std::size_t>(std::max(1, cfg.multistarts));
  int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n);
  std::vector<GridResult> parts(workers);
  if (workers == 1) {
    parts[0] = scan_grid(dist, n, cap, 0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] { parts[w] = scan_grid(dist, n, cap, w, workers); });
    for (auto& t : pool) t.join();
  }
  Cell best = parts[0].best;
  std::vector<Cell> top;
  for (const auto& p : parts) {
    if (better(p.best, best)) best = p.best;
    top.insert(top.end(), p.top.begin(), p.top.end());
  }
  std::sort(top.begin(), top.end(), better);
  if (top.size() > cap) top.resize(cap);

  Refiner refiner(d, cfg);
  auto grid_x = [n](const Cell& c) {
    return std::vector<double>{static_cast<double>(c.idx[0]) / n, static_cast<double>(c.idx[1]) / n,
                               static_cast<double>(c.idx[2]) / n, static_cast<double>(c.idx[3]) / n};
  };
  std::vector<double> best_x = grid_x(best);
  double best_value = refiner.value(best_x);

  auto consider = [&](const std::vector<double>& x) {
    const double v = refiner.value(x);
    if (std::isfinite(v) && v > best_value) {
      best_value = v;
      best_x = x;
    }
  };

  if (cfg.refine && cfg.refine_iters > 0) {
    const double h = 0.5 / n;
    for (int s = 0; s < cfg.multistarts && s < static_cast<int>(top.size()); ++s)
      consider(refiner.refine(grid_x(top[s]), {h, h, h, h}));

    for (const double corner : boundary_corners(d)) {
      for (int k = 1; k <= kLadderDepth; ++k) {
        const double eps = std::ldexp(1.0, -k);
        if (2 * eps >= 1.0 - 2 * kMinGap) continue;
        std::vector<double> x{corner - eps, corner, corner + eps, 0.0};
        double rung_best = -1.0;
        for (int j = 0; j < n; ++j) {
          const double delta = wrap(static_cast<double>(j) / n - x[2]);
          if (delta <= kMinGap || delta >= 1.0 - 2 * eps - kMinGap) continue;
          std::vector<double> y = x;
          y[3] = x[2] + delta;
          const double v = refiner.value(y);
          if (std::isfinite(v) && v > rung_best) {
            rung_best = v;
            x[3] = y[3];
          }
        }
        if (rung_best < 0) continue;
        consider(x);
        consider(refiner.refine(x, {eps / 4, eps / 4, eps / 4, h}));
      }
    }
  }

  PtolemyEstimate out;
  out.witness = make_result(refiner, best_x, best_value);
  out.lower = best_value;
  out.closed = closed_form_ptolemy(d);
  out.config = cfg;
  out.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::optional<PtolemyClosedForm> closed_form_ptolemy(const Domain& d) {
  PtolemyClosedForm cf;
  switch (d.kind()) {
    case DomainKind::Sector: {
      const double a = d.as<shape::Sector>()->alpha;
      cf.value = 1.0 / std::sin(a / 2);
      cf.source = "sector: 1/sin(alpha/2)";
      return cf;
    }
    case DomainKind::DoubleSector: {
      const auto* s = d.as<shape::DoubleSector>();
      const double m = std::min({s->alpha, s->beta, s->alpha + s->beta - kPi});
      cf.value = m > 0 ? 1.0 / std::sin(m / 2) : INFINITY;
      cf.source = "double sector: 1/sin(min{alpha, beta, alpha+beta-pi}/2)";
      return cf;
    }
    case DomainKind::Triangle: {
      const auto ang = interior_angles(d.vertices());
      cf.value = 1.0 / std::sin(*std::min_element(ang.begin(), ang.end()) / 2);
      cf.source = "triangle: 1/sin(alpha/2), alpha the smallest angle";
      cf.note = "a proof step quotes theta = min{alpha, beta, alpha+beta-pi}, which does not fit triangle "
                "angles; the value follows the statement (smallest angle)";
      return cf;
    }
    case DomainKind::Parallelogram: {
      const auto* p = d.as<shape::Parallelogram>();
      const double big = std::max(p->r, p->s), small = std::min(p->r, p->s);
      const double sa = std::sin(p->alpha);
      const double f = std::sqrt(p->r * p->r + 2 * p->r * p->s * std::cos(p->alpha) + p->s * p->s) / (small * sa);
      const double half_angle = 1.0 / std::sin(p->alpha / 2);
      const double diagonal = std::sqrt(1 + std::pow(big / (2 * small * sa), 2));
      const double diagonal_alt = std::sqrt(1 + std::pow(1.0 / (2 * sa), 2));
      const double f_mean = 0.5 * (f + 1 / f);
      cf.terms = {{"half_angle", half_angle},
                  {"diagonal", diagonal},
                  {"diagonal_r_over_r", diagonal_alt},
                  {"f_mean", f_mean},
                  {"f", f}};
      cf.note = "the diagonal term is printed both as max/(2 min sin alpha) and as r/(2r sin alpha); "
                "both are listed, the lower bound uses the former";
      if (d.is_rhombus()) {
        cf.value = half_angle;
        cf.bounds = std::pair{half_angle, half_angle};
        cf.source = "rhombus: 1/sin(alpha/2)";
      } else if (d.is_rectangle()) {
        const double q = big / small;
        cf.bounds = std::pair{std::max(std::sqrt(2.0), std::sqrt(1 + q * q / 4)), std::sqrt(1 + q * q)};
        cf.source = "rectangle: max{sqrt2, sqrt(1+M^2/(4m^2))} <= P <= sqrt(1+M^2/m^2)";
      } else {
        cf.bounds = std::pair{std::max({half_angle, diagonal, f_mean}), f};
        cf.source = "parallelogram: max{1/sin(alpha/2), diagonal, (f+1/f)/2} <= P <= f";
      }
      return cf;
    }
    case DomainKind::Ellipse: {
      const auto* e = d.as<shape::Ellipse>();
      cf.bounds = std::pair{0.5 * (e->a / e->b + e->b / e->a), 1.0 / std::sin(e->b * kPi / (2 * e->a))};
      cf.source = "ellipse: (a/b+b/a)/2 <= P <= 1/sin(b pi/(2a))";
      return cf;
    }
    case DomainKind::Disk:
    case DomainKind::HalfPlane:
      cf.value = 1.0;
      cf.source = "circle or line boundary: 1";
      return cf;
    default:
      return std::nullopt;
  }
}

SectorReduction reduce_quadrilateral_to_sector(Complex a, Complex b, Complex c, Complex d) {
  MobiusMap m = mobius_three_point(a, b, c);
  const ExtComplex w = m(d);
  if (w.is_infinite()) throw DegenerateInput("reduce_quadrilateral_to_sector: coincident points");
  Complex z = w.value();
  if (z == 0.0) throw DegenerateInput("reduce_quadrilateral_to_sector: coincident points");
  if (z.imag() < 0) {
    m = mobius_three_point(c, b, a);
    z = m(d).value();
  }
  double theta = std::arg(z);
  if (theta <= 0) theta = kPi;  // concyclic: d lands on the negative real axis
  return {theta, std::abs(z), m};
}

ParallelogramNormalization normalize_to_parallelogram(Complex a, Complex b, Complex c, Complex d) {
  const SectorReduction r = reduce_quadrilateral_to_sector(a, b, c, d);
  const Complex e = std::polar(std::sqrt(r.t), r.theta / 2);
  const MobiusMap target = mobius_three_point(0.0, 1.0, 1.0 + e);
  const MobiusMap m = target.inverse() * r.m;
  ParallelogramNormalization out{{m(a).value(), m(b).value(), m(c).value(), m(d).value()}, r.theta / 2, m};
  return out;
}

nlohmann::json ext_to_json(const ExtComplex& z) {
  if (z.is_infinite()) return "inf";
  return nlohmann::json::array({z.value().real(), z.value().imag()});
}

namespace {
nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}
}  // namespace

nlohmann::json to_json(const PtolemyClosedForm& cf) {
  nlohmann::json j;
  j["value"] = cf.value ? finite_or_string(*cf.value) : nlohmann::json(nullptr);
  j["bounds"] = cf.bounds ? nlohmann::json::array({cf.bounds->first, cf.bounds->second}) : nlohmann::json(nullptr);
  j["source"] = cf.source;
  if (!cf.terms.empty()) {
    j["terms"] = nlohmann::json::object();
    for (const auto& t : cf.terms) j["terms"][t.name] = t.value;
  }
  if (!cf.note.empty()) j["note"] = cf.note;
  return j;
}

nlohmann::json to_json(const PtolemyEstimate& e, bool meta) {
  nlohmann::json j;
  j["schema"] = 1;
  j["lower"] = e.lower;
  j["closed_form"] = e.closed && e.closed->value ? finite_or_string(*e.closed->value) : nlohmann::json(nullptr);
  j["bounds"] = e.closed && e.closed->bounds
                    ? nlohmann::json::array({e.closed->bounds->first, e.closed->bounds->second})
                    : nlohmann::json(nullptr);
  if (e.closed) j["closed_form_detail"] = to_json(*e.closed);
  nlohmann::json w;
  w["points"] = nlohmann::json::array();
  for (const auto& p : e.witness.points) w["points"].push_back(ext_to_json(p));
  w["params"] = e.witness.params;
  w["value"] = e.witness.value;
  j["witness"] = w;
  j["config"] = {{"grid_n", e.config.grid_n},
                 {"refine_iters", e.config.refine_iters},
                 {"multistarts", e.config.multistarts},
                 {"seed", e.config.seed},
                 {"refine", e.config.refine}};
  if (meta) j["wall_time_ms"] = e.wall_time_ms;
  return j;
}

}  // namespace confgeom
