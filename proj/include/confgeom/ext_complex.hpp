#pragma once

#include <complex>
#include <iosfwd>

namespace confgeom {

using Complex = std::complex<double>;

/// A point of the extended plane: a finite complex number or the point at
/// infinity. Infinity is a distinct state, never a large float.
class ExtComplex {
 public:
  constexpr ExtComplex() = default;
  ExtComplex(Complex z);  // NOLINT(google-explicit-constructor)
  ExtComplex(double re, double im = 0.0);

  static constexpr ExtComplex infinity() {
    ExtComplex e;
    e.infinite_ = true;
    return e;
  }

  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }
  [[nodiscard]] constexpr bool is_finite() const { return !infinite_; }

  /// Finite value; throws DegenerateInput at infinity.
  [[nodiscard]] Complex value() const;

  friend bool operator==(const ExtComplex& a, const ExtComplex& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.z_ == b.z_;
  }

 private:
  Complex z_{};
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtComplex& z);

/// Distance in the plane; infinite if either end is infinity.
double distance(const ExtComplex& a, const ExtComplex& b);

}  // namespace confgeom
