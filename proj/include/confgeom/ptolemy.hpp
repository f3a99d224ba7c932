#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confgeom/domain.hpp"
#include "confgeom/ext_complex.hpp"
#include "confgeom/mobius.hpp"
#include "json.hpp"

namespace confgeom {

/// (|a-b||c-d| + |a-d||b-c|) / (|a-c||b-d|). With one point at infinity the
/// factors containing it cancel. Throws DegenerateInput on coincident points
/// and TwoInfinite when more than one point is infinite.
double ptolemy_ratio(const ExtComplex& a, const ExtComplex& b, const ExtComplex& c,
                     const ExtComplex& d);

struct QuadrupleResult {
  std::array<ExtComplex, 4> points;
  std::array<double, 4> params;  // boundary chart positions in [0, 1)
  double value = 0.0;
};

struct PtolemyConfig {
  int grid_n = 128;
  int refine_iters = 400;
  int multistarts = 16;
  std::uint64_t seed = 0;
  bool refine = true;  // simplex refinement and corner ladder
  int threads = 0;     // 0 = hardware concurrency
};

struct NamedValue {
  std::string name;
  double value;
};

struct PtolemyClosedForm {
  std::optional<double> value;
  std::optional<std::pair<double, double>> bounds;
  std::string source;
  std::vector<NamedValue> terms;  // individual bound terms, when useful
  std::string note;
};

struct PtolemyEstimate {
  double lower = 0.0;
  std::optional<PtolemyClosedForm> closed;
  QuadrupleResult witness;
  PtolemyConfig config;
  double wall_time_ms = 0.0;
};

/// Best p over ordered boundary quadruples: exhaustive search on grid_n
/// chart samples, then simplex refinement from the top cells and from
/// shrinking quadruples around every corner. A lower estimate of P(D).
/// Throws ConfigError for grid_n < 8 and InvalidDomain for domains whose
/// boundary is not a Jordan curve.
PtolemyEstimate estimate_ptolemy_constant(const Domain& d, const PtolemyConfig& cfg = {});

/// Exact value or (lo, hi) bounds where known; nullopt otherwise.
std::optional<PtolemyClosedForm> closed_form_ptolemy(const Domain& d);

struct SectorReduction {
  double theta;
  double t;
  MobiusMap m;
};

/// A Moebius map sending the quadrilateral to 0, 1, infinity, t e^{i theta}
/// with theta = min(alpha + gamma, beta + delta). When that minimum is the
/// pair at a and c, the map sends (a, b, c) to (0, 1, infinity); otherwise it
/// sends (c, b, a) there.
SectorReduction reduce_quadrilateral_to_sector(Complex a, Complex b, Complex c, Complex d);

struct ParallelogramNormalization {
  std::array<Complex, 4> vertices;  // images of a, b, c, d
  double angle;                     // smallest angle of the parallelogram
  MobiusMap m;
};

/// Moebius map taking a simple quadrilateral onto a parallelogram whose
/// smallest angle is half the reduced sector angle.
ParallelogramNormalization normalize_to_parallelogram(Complex a, Complex b, Complex c, Complex d);

nlohmann::json ext_to_json(const ExtComplex& z);
nlohmann::json to_json(const PtolemyClosedForm& cf);
nlohmann::json to_json(const PtolemyEstimate& e, bool meta);

}  // namespace confgeom
