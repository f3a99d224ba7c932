#include "confgeom/ext_complex.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "confgeom/errors.hpp"

namespace confgeom {

ExtComplex::ExtComplex(Complex z) : z_(z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DegenerateInput("finite extended-complex value with non-finite coordinates");
}

ExtComplex::ExtComplex(double re, double im) : ExtComplex(Complex(re, im)) {}

Complex ExtComplex::value() const {
  if (infinite_) throw DegenerateInput("value() requested at infinity");
  return z_;
}

std::ostream& operator<<(std::ostream& os, const ExtComplex& z) {
  if (z.is_infinite()) return os << "inf";
  return os << z.value();
}

double distance(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() || b.is_infinite()) return std::numeric_limits<double>::infinity();
  return std::abs(a.value() - b.value());
}

}  // namespace confgeom
