#include <cmath>
#include <random>

#include "confgeom/domain.hpp"
#include "confgeom/errors.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace confgeom;
using testutil::kPi;

namespace {

double simpson_ellipse_arc(double a, double b, double t, int panels) {
  auto f = [&](double u) { return std::hypot(a * std::sin(u), b * std::cos(u)); };
  const double h = t / panels;
  double sum = f(0) + f(t);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4 : 2) * f(i * h);
  return sum * h / 3;
}

double scan_ellipse_distance(double a, double b, Complex p, int n) {
  double best = INFINITY;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * kPi * i / n;
    best = std::min(best, std::abs(p - Complex(a * std::cos(t), b * std::sin(t))));
  }
  return best;
}

std::vector<Domain> bounded_catalog() {
  return {Domain::disk(), Domain::disk(Complex(1, -2), 0.5), Domain::ellipse(2, 1), Domain::ellipse(5, 0.5),
          Domain::triangle(0.0, 1.0, Complex(0.3, 0.8)), Domain::parallelogram(2, 1, kPi / 3),
          Domain::parallelogram(1, 1, kPi / 2)};
}

}  // namespace

TEST_CASE("factory validation") {
  CHECK_THROWS_AS(Domain::sector(0), InvalidDomain);
  CHECK_THROWS_AS(Domain::sector(2 * kPi), InvalidDomain);
  CHECK_THROWS_AS(Domain::double_sector(1.0, 1.0), InvalidDomain);
  CHECK_NOTHROW(Domain::double_sector(2.0, 2.0));
  CHECK_THROWS_AS(Domain::triangle(0.0, 1.0, 2.0), InvalidDomain);
  CHECK_THROWS_AS(Domain::parallelogram(1, 1, 2.0), InvalidDomain);
  CHECK_THROWS_AS(Domain::ellipse(1, 2), InvalidDomain);
  CHECK_THROWS_AS(Domain::arc_slit(2.0), InvalidDomain);
  CHECK_THROWS_AS(Domain::disk(0.0, -1), InvalidDomain);
  const Domain cw = Domain::triangle(0.0, Complex(0, 1), 1.0);
  CHECK(contains(cw, Complex(0.2, 0.2)));
}

TEST_CASE("boundary_point examples") {
  CHECK(std::abs(boundary_point(Domain::disk(), 0.25) - Complex(0, 1)) < 1e-12);
  CHECK(std::abs(boundary_point(Domain::parallelogram(1, 1, kPi / 2), 0.5) - Complex(1, 1)) < 1e-12);
  const Domain e = Domain::ellipse(2, 1);
  CHECK(std::abs(boundary_point(e, 0.25) - Complex(0, 1)) < 1e-10);
  const double perim = e.perimeter();
  CHECK(perim == doctest::Approx(4 * simpson_ellipse_arc(2, 1, kPi / 2, 1000000)).epsilon(1e-12));
  for (double s : {0.1, 0.37, 0.8}) {
    const Complex p = boundary_point(e, s);
    double t = std::atan2(p.imag() / 1.0, p.real() / 2.0);
    if (t < 0) t += 2 * kPi;
    CHECK(simpson_ellipse_arc(2, 1, t, 1000000) == doctest::Approx(s * perim).epsilon(1e-10));
  }
  CHECK_THROWS_AS(boundary_point(Domain::sector(1.0), 0.1), UnboundedDomain);
}

TEST_CASE("unbounded charts") {
  const Domain s = Domain::sector(kPi / 2);
  CHECK(std::abs(boundary_point_unbounded(s, 0, 3).value() - 3.0) < 1e-15);
  CHECK(std::abs(boundary_point_unbounded(s, 1, 2).value() - Complex(0, 2)) < 1e-15);
  CHECK(boundary_point_unbounded(s, 1, INFINITY).is_infinite());
  CHECK_THROWS_AS(boundary_point_unbounded(s, 2, 1.0), BadChart);

  const Domain ds = Domain::double_sector(2 * kPi / 3, 2 * kPi / 3);
  CHECK(std::abs(boundary_point_unbounded(ds, 0, 0).value()) < 1e-15);
  CHECK(std::abs(boundary_point_unbounded(ds, 0, 1).value() - 1.0) < 1e-15);
  CHECK(std::abs(boundary_point_unbounded(ds, 1, 0).value() - 1.0) < 1e-15);
  CHECK(std::abs(boundary_point_unbounded(ds, 2, 0).value()) < 1e-15);
  CHECK(std::abs(boundary_point_unbounded(ds, 1, 1).value() - (1.0 + std::polar(1.0, kPi / 3))) < 1e-12);
  CHECK(std::abs(boundary_point_unbounded(ds, 2, 1).value() - std::polar(1.0, 2 * kPi / 3)) < 1e-12);

  // Compact chart passes through each leg in order and through infinity.
  CHECK(extended_boundary_point(s, 0.5).is_infinite());
  CHECK(std::abs(extended_boundary_point(s, 0.25).value() - 1.0) < 1e-12);
  CHECK(std::abs(extended_boundary_point(s, 0.75).value() - Complex(0, 1)) < 1e-12);
  CHECK(extended_boundary_point(ds, 0.625).is_infinite());
  for (double u : {0.01, 0.2, 0.3, 0.5, 0.7, 0.95}) {
    const ExtComplex p = extended_boundary_point(ds, u);
    CHECK(dist_to_boundary(ds, p.value()) < 1e-12 * std::max(1.0, std::abs(p.value())));
  }
}

TEST_CASE("dist_to_boundary examples") {
  const Domain e = Domain::ellipse(2, 1);
  CHECK(dist_to_boundary(e, 0.0) == doctest::Approx(1.0));
  CHECK(dist_to_boundary(e, 1.0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(dist_to_boundary(e, Complex(0.7, 0.4)) ==
        doctest::Approx(scan_ellipse_distance(2, 1, Complex(0.7, 0.4), 1000000)).epsilon(1e-9));
  CHECK(dist_to_boundary(Domain::half_plane(), Complex(3, 2)) == 2.0);
  CHECK(dist_to_boundary(Domain::arc_slit(0.1), 0.0) == 1.0);
  CHECK(dist_to_boundary(Domain::arc_slit(0.1), 2.0) == 1.0);
  CHECK(dist_to_boundary(Domain::twice_punctured_plane(), Complex(0, 1)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("contains examples") {
  CHECK(contains(Domain::sector(kPi / 2), Complex(1, 1)));
  CHECK_FALSE(contains(Domain::sector(kPi / 2), -1.0));
  CHECK_FALSE(contains(Domain::twice_punctured_plane(), 1.0));
  CHECK(contains(Domain::twice_punctured_plane(), 1.0 + 1e-13));
  CHECK_FALSE(contains(Domain::punctured_plane(), 0.0));
  CHECK(contains(Domain::sector(3 * kPi / 2), Complex(-1, -0.5)));
  CHECK(contains(Domain::double_sector(2 * kPi / 3, 2 * kPi / 3), Complex(0.5, 0.5)));
  CHECK_FALSE(contains(Domain::double_sector(2 * kPi / 3, 2 * kPi / 3), Complex(-0.5, 0.1)));
  CHECK(contains(Domain::arc_slit(0.1), Complex(0, 0)));
  CHECK(contains(Domain::arc_slit(0.1), Complex(2, 0)));
  CHECK(contains(Domain::arc_slit(0.1), std::polar(1.0, 0.05)));
  CHECK_FALSE(contains(Domain::arc_slit(0.1), std::polar(1.0, 2.0)));
  CHECK_FALSE(contains(Domain::disk_exterior(), 0.5));
}

TEST_CASE("boundary chart is 1-Lipschitz and lies on the boundary") {
  std::mt19937_64 rng(17);
  for (const Domain& d : bounded_catalog()) {
    const double perim = d.perimeter();
    for (int n = 0; n < 1000; ++n) {
      const double s1 = testutil::uniform(rng, 0, 1), s2 = testutil::uniform(rng, 0, 1);
      const Complex p1 = boundary_point(d, s1), p2 = boundary_point(d, s2);
      CHECK(std::abs(p1 - p2) <= perim * std::abs(s1 - s2) * (1 + 1e-9) + 1e-12);
      CHECK(dist_to_boundary(d, p1) <= 1e-9 * d.diameter());
    }
  }
}

TEST_CASE("ellipse distance agrees with the axis closed form") {
  for (auto [a, b] : {std::pair{2.0, 1.0}, std::pair{3.0, 0.4}, std::pair{1.5, 1.4}}) {
    const double g = a * a - b * b, switch_at = a - b * b / a;
    for (int i = 0; i < 100; ++i) {
      const double t = i == 99 ? switch_at : 1.2 * a * i / 98.0;
      const double closed = std::abs(t) <= switch_at ? b * std::sqrt(1 - t * t / g) : std::abs(a - t);
      CHECK(ellipse_boundary_distance(a, b, Complex(t, 1e-13)) == doctest::Approx(closed).epsilon(1e-10));
      CHECK(ellipse_boundary_distance(a, b, t) == doctest::Approx(closed).epsilon(1e-12));
    }
  }
  std::mt19937_64 rng(8);
  for (int n = 0; n < 50; ++n) {
    const Complex p = testutil::random_point(rng, 3);
    CHECK(ellipse_boundary_distance(2, 1, p) ==
          doctest::Approx(scan_ellipse_distance(2, 1, p, 200000)).epsilon(1e-6));
  }
}

TEST_CASE("sector bisector distance") {
  for (double alpha : {0.3, kPi / 3, kPi / 2, 2.5, kPi}) {
    const Domain s = Domain::sector(alpha);
    for (double r : {1e-6, 0.5, 1.0, 123.0}) {
      CHECK(std::abs(dist_to_boundary(s, std::polar(r, alpha / 2)) - r * std::sin(alpha / 2)) <= 1e-12 * r);
    }
  }
}
