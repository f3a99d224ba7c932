#include "confgeom/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace confgeom {

namespace {

constexpr double kPi = std::numbers::pi;

struct Extent {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  void add(Complex z) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  bool empty() const { return xmin > xmax; }
};

bool in_box(const Box& b, Complex z) {
  return z.real() >= b.xmin && z.real() <= b.xmax && z.imag() >= b.ymin && z.imag() <= b.ymax;
}

// Boundary pieces as polylines; closed pieces repeat their first point.
std::vector<std::vector<Complex>> boundary_pieces(const Domain& d, std::vector<Complex>& markers) {
  std::vector<std::vector<Complex>> pieces;
  if (d.is_polygon()) {
    auto v = d.vertices();
    v.push_back(v.front());
    pieces.push_back(v);
    return pieces;
  }
  auto circle = [](Complex c, double r) {
    std::vector<Complex> out;
    for (int i = 0; i <= 256; ++i) out.push_back(c + std::polar(r, 2 * kPi * i / 256));
    return out;
  };
  if (d.bounded()) {
    std::vector<Complex> out;
    for (int i = 0; i <= 512; ++i) out.push_back(boundary_point(d, (i % 512) / 512.0));
    pieces.push_back(out);
    return pieces;
  }
  const Box frame = d.frame();
  switch (d.kind()) {
    case DomainKind::PuncturedPlane:
      markers.push_back(0.0);
      break;
    case DomainKind::TwicePuncturedPlane:
      markers.push_back(-1.0);
      markers.push_back(1.0);
      break;
    case DomainKind::DiskExterior:
      pieces.push_back(circle(0.0, 1.0));
      break;
    case DomainKind::HalfPlane:
      pieces.push_back({Complex(frame.xmin, 0), Complex(frame.xmax, 0)});
      break;
    default: {
      // Legs of the unbounded charts, cut where they leave the frame.
      const double far = std::hypot(frame.xmax - frame.xmin, frame.ymax - frame.ymin);
      for (int leg = 0; leg < leg_count(d); ++leg) {
        std::vector<Complex> out;
        const bool arc = d.kind() == DomainKind::ArcSlit;
        const bool segment = d.kind() == DomainKind::DoubleSector && leg == 0;
        const double span = arc ? 2 * kPi - d.as<shape::ArcSlit>()->gap : segment ? 1.0 : far;
        const int n = arc ? 512 : 2;
        for (int i = 0; i <= n; ++i) {
          const ExtComplex z = boundary_point_unbounded(d, leg, span * i / n);
          if (z.is_finite()) out.push_back(z.value());
        }
        if (!arc && !segment) {
          // Clip the segment to the frame.
          const Complex a = out.front(), b = out.back();
          double lo = 0, hi = 1;
          for (int k = 0; k < 60; ++k) {
            const double mid = 0.5 * (lo + hi);
            (in_box(frame, a + mid * (b - a)) ? lo : hi) = mid;
          }
          out = {a, a + lo * (b - a)};
        }
        pieces.push_back(out);
      }
    }
  }
  return pieces;
}

std::string num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << (std::abs(v) < 1e-12 ? 0.0 : v);
  return out.str();
}

std::string pt(Complex z) { return num(z.real()) + "," + num(-z.imag()); }

}  // namespace

std::string render_svg(const Domain& d, const PlotOverlay& overlay) {
  std::vector<Complex> markers;
  const auto pieces = boundary_pieces(d, markers);
  Extent ext;
  for (const auto& p : pieces)
    for (Complex z : p) ext.add(z);
  for (Complex z : markers) ext.add(z);
  if (overlay.quadruple)
    for (const auto& z : *overlay.quadruple)
      if (z.is_finite()) ext.add(z.value());
  for (Complex z : overlay.geodesic) ext.add(z);
  if (ext.empty() || !d.bounded()) {
    const Box f = d.frame();
    ext.add({f.xmin, f.ymin});
    ext.add({f.xmax, f.ymax});
  }
  const double w = std::max(ext.xmax - ext.xmin, 1e-9), h = std::max(ext.ymax - ext.ymin, 1e-9);
  const double mx = 0.1 * w, my = 0.1 * h;
  const double stroke = 0.004 * std::max(w, h), dot = 0.012 * std::max(w, h);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(ext.xmin - mx) << ' '
      << num(-ext.ymax - my) << ' ' << num(w + 2 * mx) << ' ' << num(h + 2 * my) << "\">\n"
      << "<title>" << to_string(d.kind()) << "</title>\n";
  for (const auto& p : pieces) {
    if (p.size() < 2) continue;
    const bool closed = p.size() > 2 && p.front() == p.back();
    svg << "<path class=\"boundary\" fill=\"none\" stroke=\"black\" stroke-width=\"" << num(stroke) << "\" d=\"M "
        << pt(p[0]);
    for (std::size_t i = 1; i + (closed ? 1 : 0) < p.size(); ++i) svg << " L " << pt(p[i]);
    svg << (closed ? " Z" : "") << "\"/>\n";
  }
  for (Complex z : markers)
    svg << "<circle class=\"puncture\" cx=\"" << num(z.real()) << "\" cy=\"" << num(-z.imag()) << "\" r=\""
        << num(dot) << "\" fill=\"white\" stroke=\"black\" stroke-width=\"" << num(stroke) << "\"/>\n";
  if (overlay.quadruple) {
    const auto& q = *overlay.quadruple;
    for (int i = 0; i < 2; ++i) {
      if (q[i].is_infinite() || q[i + 2].is_infinite()) continue;
      svg << "<line class=\"diagonal\" x1=\"" << num(q[i].value().real()) << "\" y1=\"" << num(-q[i].value().imag())
          << "\" x2=\"" << num(q[i + 2].value().real()) << "\" y2=\"" << num(-q[i + 2].value().imag())
          << "\" stroke=\"steelblue\" stroke-dasharray=\"" << num(3 * stroke) << "\" stroke-width=\"" << num(stroke)
          << "\"/>\n";
    }
    for (int i = 0; i < 4; ++i) {
      if (q[i].is_infinite()) continue;
      svg << "<circle class=\"quadruple\" data-order=\"" << i << "\" cx=\"" << num(q[i].value().real()) << "\" cy=\""
          << num(-q[i].value().imag()) << "\" r=\"" << num(dot) << "\" fill=\"crimson\"/>\n";
    }
  }
  if (overlay.geodesic.size() >= 2) {
    svg << "<polyline class=\"geodesic\" fill=\"none\" stroke=\"darkgreen\" stroke-width=\"" << num(stroke)
        << "\" points=\"";
    for (std::size_t i = 0; i < overlay.geodesic.size(); ++i) svg << (i ? " " : "") << pt(overlay.geodesic[i]);
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace confgeom
