#include "confgeom/plane.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "confgeom/errors.hpp"

namespace confgeom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_positive(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

}  // namespace

CircleOrLine circle_through(Complex a, Complex b, Complex c) {
  const double scale = std::max({std::abs(a - b), std::abs(b - c), std::abs(c - a)});
  const double floor = 1e-15 * std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
  if (std::abs(a - b) <= floor || std::abs(b - c) <= floor || std::abs(c - a) <= floor)
    throw DegenerateInput("circle_through: coincident points");

  const Complex den = (b - c) * std::conj(a) + (c - a) * std::conj(b) + (a - b) * std::conj(c);
  // den is translation invariant and equals 4i times the signed triangle area.
  if (std::abs(den) < 1e-12 * scale * scale) {
    Complex p = a, q = b;
    if (std::abs(c - a) > std::abs(q - p)) q = c;
    if (std::abs(c - b) > std::abs(q - p)) { p = b; q = c; }
    return Line{p, (q - p) / std::abs(q - p)};
  }
  const Complex num = (b - c) * std::norm(a) + (c - a) * std::norm(b) + (a - b) * std::norm(c);
  const Complex center = num / den;
  return Circle{center, std::abs(center - a)};
}

double visual_angle(Complex x, Complex z, Complex y) {
  return std::abs(std::arg((y - z) / (x - z)));
}

double signed_area(std::span<const Complex> v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex p = v[i], q = v[(i + 1) % v.size()];
    twice += p.real() * q.imag() - q.real() * p.imag();
  }
  return 0.5 * twice;
}

std::vector<double> interior_angles(std::span<const Complex> v) {
  const std::size_t n = v.size();
  if (n < 3) throw DegeneratePolygon("polygon needs at least three vertices");
  double scale = 0.0;
  for (const Complex p : v) scale = std::max(scale, std::abs(p));
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(v[(i + 1) % n] - v[i]) <= 1e-14 * std::max(1.0, scale))
      throw DegeneratePolygon("polygon has a zero-length edge");
  }
  const double area = signed_area(v);
  if (std::abs(area) <= 1e-14 * std::max(1.0, scale * scale))
    throw DegeneratePolygon("polygon has zero area");
  const bool ccw = area > 0;

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex prev = v[(i + n - 1) % n] - v[i];
    const Complex next = v[(i + 1) % n] - v[i];
    const double turn = ccw ? std::arg(prev / next) : std::arg(next / prev);
    out[i] = wrap_positive(turn);
  }
  return out;
}

double quad_sector_angle(Complex a, Complex b, Complex c, Complex d) {
  const std::array<Complex, 4> q{a, b, c, d};
  const auto ang = interior_angles(q);
  return std::min(ang[0] + ang[2], ang[1] + ang[3]);
}

VisualAngleMax max_visual_angle(Complex x, Complex y) {
  if (!(x.imag() > 0) || !(y.imag() > 0))
    throw DegenerateInput("max_visual_angle: points must lie in the upper half-plane");
  if (std::abs(x - y) <= 1e-15 * std::max(std::abs(x), std::abs(y)))
    throw DegenerateInput("max_visual_angle: coincident points");

  const double dy = y.imag() - x.imag();
  if (std::abs(dy) <= 1e-14 * std::max(x.imag(), y.imag())) {
    const double z = 0.5 * (x.real() + y.real());
    return {z, visual_angle(x, Complex(z, 0), y)};
  }
  // Line through x and y meets the axis at k; a circle through x and y tangent
  // to the axis touches it at distance sqrt(|x-k||y-k|) from k (power of k).
  const double k = x.real() - x.imag() * (y.real() - x.real()) / dy;
  const double r = std::sqrt(std::abs(Complex(k, 0) - x) * std::abs(Complex(k, 0) - y));
  VisualAngleMax best{k - r, visual_angle(x, Complex(k - r, 0), y)};
  const double other = visual_angle(x, Complex(k + r, 0), y);
  if (other > best.angle) best = {k + r, other};
  return best;
}

}  // namespace confgeom
