#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "confgeom/domain.hpp"

namespace confgeom {

struct PlotOverlay {
  std::optional<std::array<ExtComplex, 4>> quadruple;  // boundary order
  std::vector<Complex> geodesic;
};

/// SVG 1.1 drawing of the boundary (clipped to frame() for unbounded
/// domains) with optional overlays. The viewBox is the drawn extent plus a
/// 10% margin on each side; y points up.
std::string render_svg(const Domain& d, const PlotOverlay& overlay = {});

}  // namespace confgeom
