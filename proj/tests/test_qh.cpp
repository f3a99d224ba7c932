#include <doctest.h>

#include <cmath>
#include <random>

#include "confgeom/errors.hpp"
#include "confgeom/qh.hpp"
#include "test_util.hpp"

using namespace confgeom;
using testutil::kPi;

namespace {

Complex rhombus_axis(const Domain& d) { return std::polar(1.0, d.as<shape::Parallelogram>()->alpha / 2); }
Complex rhombus_center(const Domain& d) {
  const auto* p = d.as<shape::Parallelogram>();
  return 0.5 * (p->vertices[0] + p->vertices[2]);
}

double beta_newton() {
  double t = 3.0;
  for (int i = 0; i < 60; ++i) {
    const double f = std::asinh(t) + std::atan(t) - kPi;
    const double df = 1 / std::sqrt(1 + t * t) + 1 / (1 + t * t);
    t -= f / df;
  }
  return t;
}

GridSolverConfig coarse(int passes = 1) {
  GridSolverConfig c;
  c.resolution = 32;
  c.passes = passes;
  return c;
}

// Doubles the resolution while the grid is too coarse to connect the pair.
double refined_k(const Domain& d, Complex x, Complex y, GridSolverConfig c) {
  for (;;) {
    try {
      return k_grid(d, x, y, c);
    } catch (const Disconnected&) {
      if (c.resolution >= 512) throw;
      c.resolution *= 2;
    }
  }
}

}  // namespace

TEST_CASE("j metric examples") {
  const Domain slit = Domain::arc_slit(0.3);
  CHECK(j_metric(slit, 0.0, 2.0) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  const Domain e = Domain::ellipse(2, 1);
  const double t = 2 - 0.5;
  CHECK(j_metric(e, -t, t) == doctest::Approx(std::log(7.0)).epsilon(1e-12));
  CHECK(j_metric(e, 0.3, 0.3) == 0.0);
  CHECK_THROWS_AS(j_metric(e, 0.0, 3.0), OutsideDomain);
}

TEST_CASE("k exact examples") {
  const Domain pp = Domain::punctured_plane();
  CHECK(*k_exact(pp, 1.0, -1.0) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(*k_exact(pp, 1.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const double beta = beta_newton();
  const Domain tp = Domain::twice_punctured_plane();
  CHECK(*k_exact(tp, {0, beta}, {0, -beta}) == doctest::Approx(2 * std::asinh(beta)).epsilon(1e-14));
  CHECK_FALSE(k_exact(tp, {0.2, 1}, {0, -1}).has_value());
  CHECK_FALSE(k_exact(Domain::triangle({0, 0}, {1, 0}, {0, 1}), {0.2, 0.2}, {0.3, 0.1}).has_value());
  CHECK_THROWS_AS(k_exact(pp, 0.0, 1.0), OutsideDomain);

  const Domain hp = Domain::half_plane();
  CHECK(*k_exact(hp, {0, 1}, {0, 2}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  const Domain rh = Domain::parallelogram(std::sqrt(2.0), std::sqrt(2.0), kPi / 2);
  const Complex c = rhombus_center(rh), u = rhombus_axis(rh);
  CHECK(*k_exact(rh, c - 0.9 * u, c + 0.9 * u) ==
        doctest::Approx(-2 * std::log(0.1) / std::sin(kPi / 4)).epsilon(1e-12));

  const double a = 2, b = 1, g = a * a - b * b, knee = a - b * b / a;
  CHECK(*k_exact(Domain::ellipse(a, b), -knee, knee) ==
        doctest::Approx(2 * std::sqrt(g) / b * std::asin(std::sqrt(g) / a)).epsilon(1e-12));
  CHECK(*k_exact(Domain::ellipse(a, b), {0, -0.6}, {0, 0.6}) ==
        doctest::Approx(2 * (std::log(b) - std::log(b - 0.6))).epsilon(1e-12));
}

TEST_CASE("k grid examples") {
  CHECK(k_grid(Domain::half_plane(), {0, 1}, {0, 2}) == doctest::Approx(std::log(2.0)).epsilon(0.01));
  CHECK(k_grid(Domain::punctured_plane(), 1.0, {0, 1}) == doctest::Approx(kPi / 2).epsilon(0.02));
  const Domain rh = Domain::parallelogram(std::sqrt(2.0), std::sqrt(2.0), kPi / 2);
  const Complex c = rhombus_center(rh), u = rhombus_axis(rh);
  CHECK(k_grid(rh, c - 0.9 * u, c + 0.9 * u) ==
        doctest::Approx(-2 * std::log(0.1) / std::sin(kPi / 4)).epsilon(0.02));
}

TEST_CASE("k grid config validation") {
  const Domain d = Domain::disk();
  GridSolverConfig c;
  c.resolution = 16;
  CHECK_THROWS_AS(k_grid(d, 0.1, 0.2, c), ConfigError);
  c.resolution = 64;
  c.stencil = 12;
  CHECK_THROWS_AS(k_grid(d, 0.1, 0.2, c), ConfigError);
  CHECK_THROWS_AS(k_grid(d, 0.1, 2.0), OutsideDomain);
  CHECK(k_grid(d, 0.3, 0.3) == 0.0);
}

TEST_CASE("k grid against exact formulas at resolution 512") {
  GridSolverConfig c;
  c.resolution = 512;
  auto check = [&](const Domain& d, Complex x, Complex y) {
    const double ex = *k_exact(d, x, y);
    CHECK(k_grid(d, x, y, c) == doctest::Approx(ex).epsilon(0.02));
  };
  check(Domain::punctured_plane(), 2.0, {0, -0.7});
  check(Domain::half_plane(), {0.5, 0.2}, {0.5, 3});
  const Domain rh = Domain::parallelogram(1, 1, kPi / 3);
  check(rh, rhombus_center(rh) - 0.5 * rhombus_axis(rh), rhombus_center(rh) + 0.7 * rhombus_axis(rh));
  check(Domain::ellipse(2, 1), -1.5, 1.5);
  check(Domain::ellipse(2, 1), {0, -0.6}, {0, 0.6});
}

TEST_CASE("sector lower bound") {
  CHECK(k_lower_sector(kPi / 3, 2.0, std::polar(2.0, 0.5)) == 0.0);
  CHECK(k_lower_sector(kPi / 2, std::polar(1.0, 0.3), std::polar(std::exp(1.0), 1.0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const Complex x = std::polar(1.0, kPi / 6), y = std::polar(10.0, kPi / 6);
  CHECK(k_lower_sector(kPi / 3, x, y) == doctest::Approx(2 * std::log(10.0)).epsilon(1e-14));
  CHECK(k_grid(Domain::sector(kPi / 3), x, y) >= 2 * std::log(10.0));
}

TEST_CASE("band bound sits between the radial bound and the grid value") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    const double alpha = testutil::uniform(rng, 0.3, kPi);
    const Complex x = std::polar(testutil::uniform(rng, 0.2, 1.0), testutil::uniform(rng, 0.05, 0.95) * alpha);
    const Complex y = std::polar(testutil::uniform(rng, 0.2, 1.0), testutil::uniform(rng, 0.05, 0.95) * alpha);
    const double band = k_lower_sector_band(alpha, x, y);
    CHECK(band >= k_lower_sector(alpha, x, y) - 1e-12);
    GridSolverConfig c;
    c.resolution = 128;
    CHECK(band <= k_grid(Domain::sector(alpha), x, y, c) * (1 + 1e-9));
  }
  // Bisector pairs: the bound is attained.
  const double alpha = 2.0;
  const Complex x = std::polar(0.1, 1.0), y = std::polar(3.0, 1.0);
  CHECK(k_lower_sector_band(alpha, x, y) == doctest::Approx(*k_exact(Domain::sector(alpha), x, y)).epsilon(1e-12));
  // Same modulus: pure angular travel.
  const Complex p = std::polar(1.0, 0.2), q = std::polar(1.0, 1.0);
  CHECK(k_lower_sector_band(alpha, p, q) == doctest::Approx(std::log(std::tan(0.5) / std::tan(0.1))).epsilon(1e-3));
  CHECK_THROWS_AS(k_lower_sector_band(4.0, p, q), DomainError);
}

TEST_CASE("triangle geodesic radius") {
  CHECK(triangle_geodesic_radius(kPi / 3, kPi / 3) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(triangle_geodesic_radius(0.7, 0.7) == doctest::Approx(std::sin(0.35) / 2).epsilon(1e-15));
  // A circle of this radius centred on the bisector from 0 is tangent to both legs.
  const double a = kPi / 6, b = kPi / 3, r = triangle_geodesic_radius(a, b);
  const double ra = r / std::sin(a / 2), rb = r / std::sin(b / 2);
  CHECK(ra + rb == doctest::Approx(1.0).epsilon(1e-14));
  const Complex ca = std::polar(ra, a / 2), cb = 1.0 - std::polar(rb, -b / 2);
  CHECK(std::abs(ca.imag() - r * std::cos(a / 2)) < 1e-14 + std::abs(ca.imag()));
  CHECK(std::abs(std::abs(ca) * std::sin(a / 2) - r) < 1e-14);
  CHECK(std::abs(std::abs(1.0 - cb) * std::sin(b / 2) - r) < 1e-14);
}

TEST_CASE("twice punctured symmetric formula peaks at beta") {
  auto f = [](double t) { return 2 * std::min(std::asinh(t), kPi - std::atan(t)); };
  double lo = 0.5, hi = 10.0;
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (int i = 0; i < 200; ++i) {
    const double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    (f(m1) < f(m2) ? lo : hi) = (f(m1) < f(m2) ? m1 : m2);
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(beta_newton()).epsilon(1e-6));
  const double beta = beta_newton();
  for (int i = 1; i <= 1000; ++i) {
    const double t = 0.01 * i;
    CHECK(f(t) <= f(beta) + 1e-14);
  }
}

TEST_CASE("property: j is symmetric and below k over the catalog") {
  std::mt19937_64 rng(5);
  const auto domains = testutil::catalog();
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const Domain& d = domains[i % domains.size()];
    const double clear = 1e-3 * d.diameter();
    const Complex x = testutil::random_inside(rng, d, clear), y = testutil::random_inside(rng, d, clear);
    const double j = j_metric(d, x, y);
    if (j != j_metric(d, y, x)) ++violations;
    const auto ex = k_exact(d, x, y);
    const double k = ex ? *ex : refined_k(d, x, y, coarse());
    if (j > k * 1.02) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("property: raw grid value decreases as resolution doubles") {
  std::mt19937_64 rng(6);
  const std::vector<Domain> convex{Domain::triangle({0, 0}, {1, 0}, {0.3, 0.8}), Domain::parallelogram(2, 1, kPi / 3),
                                   Domain::ellipse(2, 1), Domain::disk(), Domain::sector(kPi / 2)};
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const Domain& d = convex[i % convex.size()];
    const Complex x = testutil::random_inside(rng, d, 0.02), y = testutil::random_inside(rng, d, 0.02);
    GridSolverConfig c = coarse(0);
    c.box = d.frame();
    c.stencil = i % 2 ? 8 : 16;
    const double k32 = k_grid(d, x, y, c);
    c.resolution = 64;
    const double k64 = k_grid(d, x, y, c);
    if (k64 > k32 + 1e-12 * k32) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("property: grid value is symmetric") {
  std::mt19937_64 rng(7);
  const auto domains = testutil::catalog();
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const Domain& d = domains[i % domains.size()];
    const double clear = 1e-2 * d.diameter();
    const Complex x = testutil::random_inside(rng, d, clear), y = testutil::random_inside(rng, d, clear);
    GridSolverConfig c = coarse(0);
    c.box = d.frame();
    try {
      const double a = k_grid(d, x, y, c), b = k_grid(d, y, x, c);
      if (!testutil::rel_close(a, b, 1e-9)) ++violations;
    } catch (const Disconnected&) {
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("property: triangle inequality for j and k") {
  std::mt19937_64 rng(8);
  const auto domains = testutil::catalog();
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const Domain& d = domains[i % domains.size()];
    const double clear = 1e-2 * d.diameter();
    const Complex x = testutil::random_inside(rng, d, clear), y = testutil::random_inside(rng, d, clear),
                  z = testutil::random_inside(rng, d, clear);
    if (j_metric(d, x, z) > j_metric(d, x, y) + j_metric(d, y, z) + 1e-12) ++violations;
    if (i % 5 == 0) {
      GridSolverConfig c = coarse();
      c.box = d.frame();
      const double xz = refined_k(d, x, z, c), xy = refined_k(d, x, y, c), yz = refined_k(d, y, z, c);
      if (xz > 1.02 * (xy + yz)) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("metric sample dispatch and serialization") {
  const Domain pp = Domain::punctured_plane();
  const MetricSample s = metric_sample(pp, 1.0, -1.0);
  CHECK(s.method == KMethod::Exact);
  CHECK(s.k == doctest::Approx(kPi));
  CHECK(*s.ratio == doctest::Approx(kPi / std::log(3.0)));
  const Domain tri = Domain::triangle({0, 0}, {1, 0}, {0.3, 0.8});
  CHECK_THROWS_AS(metric_sample(tri, {0.2, 0.1}, {0.5, 0.2}, MethodChoice::Exact), NoExactFormula);
  const MetricSample g = metric_sample(tri, {0.2, 0.1}, {0.5, 0.2});
  CHECK(g.method == KMethod::Grid);
  const auto j = to_json(g);
  CHECK(j["k_method"] == "grid");
  CHECK(metric_sample(pp, 1.0, 1.0).ratio == std::nullopt);
  const auto path = k_grid_path(tri, {0.2, 0.1}, {0.5, 0.2});
  const std::string csv = polyline_csv(path.points);
  CHECK(csv.rfind("x,y\n", 0) == 0);
  CHECK(path.points.front() == Complex(0.2, 0.1));
  CHECK(path.points.back() == Complex(0.5, 0.2));
  CHECK(qh_length(tri, path.points) == doctest::Approx(path.length).epsilon(1e-12));
}
