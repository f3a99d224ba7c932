#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "confgeom/domain.hpp"
#include "confgeom/ptolemy.hpp"
#include "confgeom/qh.hpp"

namespace confgeom {

struct Certificate {
  std::string name;
  double value = 0.0;
  std::string witness;  // description of the pair family
};

struct LadderStep {
  double parameter;  // epsilon, delta or |x| of the pair family
  MetricSample sample;
};

/// Pair family approaching the supremum, with the ratio extrapolated to the limit.
struct Ladder {
  std::string family;
  std::vector<LadderStep> steps;
  double extrapolated = 0.0;
};

struct UniformityConfig {
  int samples = 8;
  std::uint64_t seed = 0;
  GridSolverConfig qh{};
  bool structured = true;
  int threads = 0;  // 0 = hardware concurrency
};

struct UniformityEstimate {
  double lower = 0.0;
  std::optional<Certificate> certificate;
  std::optional<std::pair<double, double>> closed_bounds;
  MetricSample witness;
  std::vector<Ladder> ladders;
  std::vector<NamedValue> notes;  // extra reported quantities
  UniformityConfig config;
  double wall_time_ms = 0.0;
};

/// Largest k/j over the structured certificate pairs and cfg.samples random
/// interior pairs. Deterministic for a fixed seed.
UniformityEstimate estimate_uniformity(const Domain& d, const UniformityConfig& cfg = {});

/// Closed-form lower bound for the uniformity constant. Throws NoCertificate.
Certificate certificate_lower_bound(const Domain& d);

/// Known (lo, hi) enclosure of the uniformity constant, if any.
std::optional<std::pair<double, double>> closed_bounds(const Domain& d);

/// Structured pair families for the domain; empty if there is no construction.
std::vector<Ladder> certificate_ladders(const Domain& d, const GridSolverConfig& qh = {});

/// Limit of a sequence sampled at parameters h_i -> 0, by fitting
/// (a + b h) / (1 + c h) through the last three points.
double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& values);

/// Root of arsinh t + arctan t = pi.
double solve_beta();
double twice_punctured_certificate();
/// 1 + 1/sin(alpha/2); DomainError outside (0, pi].
double sector_uniformity(double alpha);
double bilipschitz_transfer(double a, double lipschitz);
double arc_slit_certificate(double gap);
/// Lower bound for an ellipse with axis ratio c = a/b >= 1.
double ellipse_certificate(double c);
/// Both candidate readings of the rectangle transfer bound, sides a >= b.
std::pair<double, double> rectangle_readings(double a, double b);

/// Random interior point of frame() with boundary clearance.
Complex sample_point(const Domain& d, std::mt19937_64& rng, double clearance);

struct ConjectureReport {
  double a_lower = 0.0;  // larger of the estimate and the certificate
  std::string a_source;  // "estimate" or "certificate"
  double one_plus_p_lower = 0.0;
  double margin = 0.0;
};

ConjectureReport conjecture_report(const Domain& d, const UniformityConfig& ucfg = {},
                                   const PtolemyConfig& pcfg = {});

nlohmann::json to_json(const UniformityEstimate& e, bool meta);
nlohmann::json to_json(const ConjectureReport& r);
/// One row per domain: domain, certificate, value, lo, hi.
std::string certificate_csv(const std::vector<std::pair<std::string, Domain>>& domains);

}  // namespace confgeom
