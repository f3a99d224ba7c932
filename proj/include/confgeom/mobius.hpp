#pragma once

#include <array>

#include "confgeom/ext_complex.hpp"

namespace confgeom {

/// Fractional-linear map z -> (Az + B) / (Cz + D), stored with AD - BC = 1.
class MobiusMap {
 public:
  /// Throws DegenerateInput when AD - BC vanishes relative to the coefficient scale.
  MobiusMap(Complex a, Complex b, Complex c, Complex d);

  static MobiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }

  [[nodiscard]] ExtComplex operator()(const ExtComplex& z) const;
  [[nodiscard]] MobiusMap inverse() const;
  [[nodiscard]] Complex determinant() const { return a_ * d_ - b_ * c_; }

  [[nodiscard]] Complex a() const { return a_; }
  [[nodiscard]] Complex b() const { return b_; }
  [[nodiscard]] Complex c() const { return c_; }
  [[nodiscard]] Complex d() const { return d_; }

  /// Composition: (lhs * rhs)(z) == lhs(rhs(z)).
  friend MobiusMap operator*(const MobiusMap& lhs, const MobiusMap& rhs);

 private:
  Complex a_, b_, c_, d_;
};

inline ExtComplex apply(const MobiusMap& m, const ExtComplex& z) { return m(z); }

/// The map sending a -> 0, b -> 1, c -> infinity.
MobiusMap mobius_three_point(const ExtComplex& a, const ExtComplex& b, const ExtComplex& c);

/// Cross ratio [a,b,c,d] = (a-c)(b-d) / ((a-b)(c-d)), which equals 1 - m(d) for
/// m = mobius_three_point(a, b, c). One argument may be infinite; the factors
/// containing it cancel in the limit.
ExtComplex cross_ratio(const ExtComplex& a, const ExtComplex& b, const ExtComplex& c,
                       const ExtComplex& d);

}  // namespace confgeom
