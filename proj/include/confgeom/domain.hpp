#pragma once

#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "confgeom/ext_complex.hpp"

namespace confgeom {

enum class DomainKind {
  Sector,
  DoubleSector,
  Triangle,
  Parallelogram,
  Ellipse,
  Disk,
  HalfPlane,
  ArcSlit,
  PuncturedPlane,
  TwicePuncturedPlane,
  DiskExterior,
};

std::string_view to_string(DomainKind kind);

struct Box {
  double xmin, xmax, ymin, ymax;
};

/// Arc-length table for an axis-aligned ellipse parameterized by
/// t -> (a cos t, b sin t).
class EllipseArc {
 public:
  static constexpr int kTableSize = 4096;

  EllipseArc(double a, double b);

  [[nodiscard]] double perimeter() const { return cumulative_.back(); }
  /// Arc length from t = 0 to t in [0, 2*pi].
  [[nodiscard]] double arc_length(double t) const;
  /// Inverse of arc_length.
  [[nodiscard]] double param_at_length(double length) const;

 private:
  [[nodiscard]] double speed(double t) const;
  double a_, b_;
  std::vector<double> cumulative_;
};

namespace shape {
struct Sector { double alpha; };
struct DoubleSector { double alpha, beta; };
struct Triangle { std::vector<Complex> vertices; };  // counterclockwise
struct Parallelogram { Complex origin; double r, s, alpha; std::vector<Complex> vertices; };
struct Ellipse { double a, b; std::shared_ptr<const EllipseArc> arc; };
struct Disk { Complex center; double radius; };
struct HalfPlane {};
struct ArcSlit { double gap; };
struct PuncturedPlane {};
struct TwicePuncturedPlane {};
struct DiskExterior {};
}  // namespace shape

/// A plane domain from the catalog. Immutable once constructed; parameter
/// ranges are validated by the factories, which throw InvalidDomain.
class Domain {
 public:
  using Shape = std::variant<shape::Sector, shape::DoubleSector, shape::Triangle,
                             shape::Parallelogram, shape::Ellipse, shape::Disk, shape::HalfPlane,
                             shape::ArcSlit, shape::PuncturedPlane, shape::TwicePuncturedPlane,
                             shape::DiskExterior>;

  static Domain sector(double alpha);
  static Domain double_sector(double alpha, double beta);
  static Domain triangle(Complex v1, Complex v2, Complex v3);
  /// Sides r (along the real axis from origin) and s, corner angle alpha at
  /// origin, which must be the smallest inner angle.
  static Domain parallelogram(double r, double s, double alpha, Complex origin = 0.0);
  static Domain ellipse(double a, double b);
  static Domain disk(Complex center = 0.0, double radius = 1.0);
  static Domain half_plane();
  static Domain arc_slit(double gap);
  static Domain punctured_plane();
  static Domain twice_punctured_plane();
  static Domain disk_exterior();

  [[nodiscard]] DomainKind kind() const;
  [[nodiscard]] const Shape& shape() const { return shape_; }
  template <typename T>
  [[nodiscard]] const T* as() const { return std::get_if<T>(&shape_); }

  /// Triangle, Parallelogram, Ellipse, Disk.
  [[nodiscard]] bool bounded() const;
  /// Boundary is a Jordan curve of the extended plane traversed by the Ptolemy estimator.
  [[nodiscard]] bool jordan() const;
  [[nodiscard]] bool is_polygon() const;
  [[nodiscard]] bool is_rhombus() const;
  [[nodiscard]] bool is_rectangle() const;
  /// Counterclockwise vertices of a polygon domain, empty otherwise.
  [[nodiscard]] const std::vector<Complex>& vertices() const;
  /// Perimeter of a bounded domain.
  [[nodiscard]] double perimeter() const;
  /// Region used for grids and random sampling.
  [[nodiscard]] Box frame() const;
  [[nodiscard]] double diameter() const;

 private:
  explicit Domain(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

/// Point at normalized arc length s of a bounded boundary, counterclockwise
/// from a fixed anchor. Throws UnboundedDomain for other domains.
Complex boundary_point(const Domain& d, double s);

/// Number of legs of an unbounded boundary (Sector, DoubleSector, ArcSlit).
int leg_count(const Domain& d);

/// Point at chart coordinate t >= 0 along a boundary leg, measured from the
/// leg's finite anchor. t = +inf gives infinity on half-line legs.
///   Sector:       leg 0 = [0, inf) on the real axis, leg 1 = t e^{i alpha}.
///   DoubleSector: leg 0 = segment [0, 1], leg 1 = 1 + t e^{i(pi - beta)},
///                 leg 2 = t e^{i alpha}.
///   ArcSlit:      leg 0 = e^{i(gap + t)}, t in [0, 2*pi - gap].
ExtComplex boundary_point_unbounded(const Domain& d, int leg, double t);

/// Compact chart s in [0, 1) over a Jordan boundary, including unbounded
/// ones, in positive orientation. Bounded domains use normalized arc length.
ExtComplex extended_boundary_point(const Domain& d, double s);

/// Chart positions of corners (polygon vertices, sector vertices, and the
/// point at infinity where two half-lines meet at a nonzero angle).
std::vector<double> boundary_corners(const Domain& d);

/// Euclidean distance from x to the boundary.
double dist_to_boundary(const Domain& d, Complex x);

/// Strict interior membership.
bool contains(const Domain& d, Complex x);

/// Distance from p to the ellipse (x/a)^2 + (y/b)^2 = 1 with a >= b.
double ellipse_boundary_distance(double a, double b, Complex p);

}  // namespace confgeom
