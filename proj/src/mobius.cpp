#include "confgeom/mobius.hpp"

#include <algorithm>
#include <cmath>

#include "confgeom/errors.hpp"

namespace confgeom {

namespace {

constexpr double kDetEpsilon = 1e-14;

void require_distinct(const ExtComplex& a, const ExtComplex& b, const char* what) {
  if (a == b) throw DegenerateInput(std::string(what) + ": coincident points");
  if (a.is_finite() && b.is_finite()) {
    const double scale = std::max({1.0, std::abs(a.value()), std::abs(b.value())});
    if (std::abs(a.value() - b.value()) <= 1e-15 * scale)
      throw DegenerateInput(std::string(what) + ": coincident points");
  }
}

}  // namespace

MobiusMap::MobiusMap(Complex a, Complex b, Complex c, Complex d) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  const Complex det = a * d - b * c;
  if (scale == 0.0 || !(std::abs(det) > kDetEpsilon * scale * scale))
    throw DegenerateInput("Mobius map with vanishing determinant");
  const Complex root = std::sqrt(det);
  a_ = a / root;
  b_ = b / root;
  c_ = c / root;
  d_ = d / root;
}

ExtComplex MobiusMap::operator()(const ExtComplex& z) const {
  if (z.is_infinite()) {
    if (c_ == 0.0) return ExtComplex::infinity();
    return ExtComplex(a_ / c_);
  }
  const Complex w = z.value();
  const Complex den = c_ * w + d_;
  // Relative test: the pole -D/C is hit exactly only up to rounding of C*w.
  if (std::abs(den) <= 4e-16 * (std::abs(c_ * w) + std::abs(d_))) return ExtComplex::infinity();
  const Complex out = (a_ * w + b_) / den;
  if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) return ExtComplex::infinity();
  return ExtComplex(out);
}

MobiusMap MobiusMap::inverse() const { return {d_, -b_, -c_, a_}; }

MobiusMap operator*(const MobiusMap& l, const MobiusMap& r) {
  return {l.a_ * r.a_ + l.b_ * r.c_, l.a_ * r.b_ + l.b_ * r.d_, l.c_ * r.a_ + l.d_ * r.c_,
          l.c_ * r.b_ + l.d_ * r.d_};
}

MobiusMap mobius_three_point(const ExtComplex& a, const ExtComplex& b, const ExtComplex& c) {
  require_distinct(a, b, "mobius_three_point");
  require_distinct(b, c, "mobius_three_point");
  require_distinct(a, c, "mobius_three_point");
  if (a.is_infinite()) {
    const Complex bv = b.value(), cv = c.value();
    return {0.0, bv - cv, 1.0, -cv};
  }
  if (b.is_infinite()) {
    const Complex av = a.value(), cv = c.value();
    return {1.0, -av, 1.0, -cv};
  }
  const Complex av = a.value(), bv = b.value();
  if (c.is_infinite()) return {1.0, -av, 0.0, bv - av};
  const Complex cv = c.value();
  return {bv - cv, -av * (bv - cv), bv - av, -cv * (bv - av)};
}

ExtComplex cross_ratio(const ExtComplex& a, const ExtComplex& b, const ExtComplex& c,
                       const ExtComplex& d) {
  const std::array<const ExtComplex*, 4> pts{&a, &b, &c, &d};
  int infinite_at = -1;
  for (int i = 0; i < 4; ++i) {
    if (pts[i]->is_infinite()) {
      if (infinite_at >= 0) throw TwoInfinite("cross_ratio: two arguments at infinity");
      infinite_at = i;
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) require_distinct(*pts[i], *pts[j], "cross_ratio");

  auto diff = [&](int i, int j) -> Complex {
    if (i == infinite_at || j == infinite_at) return 1.0;
    return pts[i]->value() - pts[j]->value();
  };
  // Limit sign of the two factors containing the infinite point: a and d enter
  // numerator and denominator with the same sign, b and c with opposite signs.
  static constexpr std::array<double, 4> kInfSign{1.0, -1.0, -1.0, 1.0};
  const double sign = infinite_at >= 0 ? kInfSign[infinite_at] : 1.0;
  return ExtComplex(sign * diff(0, 2) * diff(1, 3) / (diff(0, 1) * diff(2, 3)));
}

}  // namespace confgeom
