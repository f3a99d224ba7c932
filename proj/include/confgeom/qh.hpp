#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confgeom/domain.hpp"
#include "json.hpp"

namespace confgeom {

enum class KMethod { Exact, Grid, Bound };
std::string_view to_string(KMethod m);

struct MetricSample {
  Complex x, y;
  double j = 0.0;
  double k = 0.0;
  KMethod method = KMethod::Exact;
  std::optional<double> ratio;  // k / j, absent when j = 0
};

struct GridSolverConfig {
  int resolution = 256;  // nodes per side of the square box
  int stencil = 16;      // 8 or 16
  int passes = 3;        // path straightening passes; 0 returns the raw graph distance
  std::optional<Box> box;
};

struct GeodesicPath {
  double length = 0.0;
  double raw_length = 0.0;  // graph distance before straightening
  std::vector<Complex> points;
};

/// log(1 + |x-y| / min(d(x), d(y))). Throws OutsideDomain.
double j_metric(const Domain& d, Complex x, Complex y);

/// Quasihyperbolic distance where a closed formula applies: any pair in the
/// punctured plane or half-plane; pairs on the bisector of a sector with
/// alpha <= pi; pairs on the long diagonal of a rhombus; pairs on either axis
/// of an ellipse; pairs on a diameter of a disk; the pair (ti, -ti) in the
/// twice punctured plane. nullopt otherwise. Throws OutsideDomain.
std::optional<double> k_exact(const Domain& d, Complex x, Complex y);

/// Shortest path on a grid graph inside the domain, refined by straightening
/// the polyline. An upper approximation of k. Throws ConfigError,
/// OutsideDomain, Disconnected.
GeodesicPath k_grid_path(const Domain& d, Complex x, Complex y, const GridSolverConfig& cfg = {});
double k_grid(const Domain& d, Complex x, Complex y, const GridSolverConfig& cfg = {});

/// Quasihyperbolic length of a polyline, adaptive Gauss quadrature.
double qh_length(const Domain& d, const std::vector<Complex>& polyline);

/// |log(|x|/|y|)| / sin(alpha/2), a lower bound for k in S_alpha, alpha <= pi.
double k_lower_sector(double alpha, Complex x, Complex y);

/// Sharper lower bound for k in S_alpha (alpha <= pi). In logarithmic
/// coordinates the weight depends on the angle only; splitting the angular
/// range between x and y into bands and bounding the weight from below on
/// each band gives a convex allocation problem that is solved exactly.
double k_lower_sector_band(double alpha, Complex x, Complex y, int bands = 0);

/// Radius sin(a/2) sin(b/2) / (sin(a/2) + sin(b/2)) for a triangle with
/// vertices 0, 1 and angles alpha, beta there (alpha + beta < pi).
double triangle_geodesic_radius(double alpha, double beta);

enum class MethodChoice { Auto, Exact, Grid };

/// j and k for a pair; Auto tries k_exact first. Exact throws NoExactFormula
/// when no formula covers the pair.
MetricSample metric_sample(const Domain& d, Complex x, Complex y, MethodChoice choice = MethodChoice::Auto,
                           const GridSolverConfig& cfg = {});

nlohmann::json to_json(const MetricSample& s);
std::string polyline_csv(const std::vector<Complex>& points);

}  // namespace confgeom
