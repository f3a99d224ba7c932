#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "confgeom/mobius.hpp"

namespace testutil {

using confgeom::Complex;
inline constexpr double kPi = std::numbers::pi;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Complex random_point(std::mt19937_64& rng, double r = 3.0) {
  return {uniform(rng, -r, r), uniform(rng, -r, r)};
}

inline confgeom::MobiusMap random_mobius(std::mt19937_64& rng) {
  for (;;) {
    Complex a = random_point(rng, 2), b = random_point(rng, 2), c = random_point(rng, 2),
            d = random_point(rng, 2);
    if (std::abs(a * d - b * c) > 0.2) return {a, b, c, d};
  }
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testutil

#include <vector>

#include "confgeom/domain.hpp"

namespace testutil {

// Rejection sample inside the frame, keeping a margin from the boundary.
inline Complex random_inside(std::mt19937_64& rng, const confgeom::Domain& d, double clearance) {
  const confgeom::Box b = d.frame();
  for (;;) {
    const Complex z{uniform(rng, b.xmin, b.xmax), uniform(rng, b.ymin, b.ymax)};
    if (confgeom::contains(d, z) && confgeom::dist_to_boundary(d, z) > clearance) return z;
  }
}

inline std::vector<confgeom::Domain> catalog() {
  using confgeom::Domain;
  return {Domain::sector(kPi / 3),
          Domain::sector(1.5 * kPi),
          Domain::double_sector(2 * kPi / 3, 2 * kPi / 3),
          Domain::triangle({0, 0}, {1, 0}, {0.3, 0.8}),
          Domain::parallelogram(2, 1, kPi / 3),
          Domain::parallelogram(1, 1, kPi / 2),
          Domain::ellipse(2, 1),
          Domain::disk(),
          Domain::half_plane(),
          Domain::arc_slit(0.5),
          Domain::punctured_plane(),
          Domain::twice_punctured_plane(),
          Domain::disk_exterior()};
}

}  // namespace testutil
