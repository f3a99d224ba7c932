#pragma once

#include <vector>

namespace confgeom {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <typename F>
  double integrate(F&& f, double lo, double hi) const {
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

/// Cached n-point rule; thread safe.
const GaussRule& gauss_rule(int n);

}  // namespace confgeom
