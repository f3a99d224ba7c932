#pragma once

#include <functional>
#include <vector>

namespace confgeom {

struct NelderMeadResult {
  std::vector<double> x;
  double value;
  int iterations;
};

/// Downhill simplex minimization from x0 with per-coordinate initial steps.
/// Stops after max_iter iterations or when the simplex values spread less
/// than ftol (absolute).
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const std::vector<double>& step,
                             int max_iter, double ftol = 1e-15);

}  // namespace confgeom
