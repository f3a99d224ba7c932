#pragma once

#include <span>
#include <variant>
#include <vector>

#include "confgeom/ext_complex.hpp"

namespace confgeom {

struct Circle {
  Complex center;
  double radius;
};

struct Line {
  Complex point;
  Complex direction;  // unit modulus
};

using CircleOrLine = std::variant<Circle, Line>;

/// Circle through three points (circumcenter formula in complex form), or the
/// line through them when they are collinear up to a scale-free threshold.
CircleOrLine circle_through(Complex a, Complex b, Complex c);

/// Unsigned angle at z between the rays towards x and y, in [0, pi].
double visual_angle(Complex x, Complex z, Complex y);

/// Signed area of a polygon (positive for counterclockwise vertex order).
double signed_area(std::span<const Complex> vertices);

/// Interior angle at each vertex of a simple polygon, each in (0, 2*pi).
/// Clockwise input is accepted; angles are measured on the interior side.
std::vector<double> interior_angles(std::span<const Complex> vertices);

/// min(alpha + gamma, beta + delta) for the quadrilateral (a, b, c, d).
double quad_sector_angle(Complex a, Complex b, Complex c, Complex d);

struct VisualAngleMax {
  double point;  // location on the real axis
  double angle;
};

/// Real-axis point maximizing the angle subtended by x and y (both in the
/// upper half-plane): the tangency point of a circle through x and y that
/// touches the real axis.
VisualAngleMax max_visual_angle(Complex x, Complex y);

}  // namespace confgeom
