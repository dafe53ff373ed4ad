#include "stiler/svg.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

namespace stiler {

namespace {

struct Mapper {
  Point center;
  double cx, cy, scale;

  std::array<double, 2> interior(Point p) const {
    const auto w = disk_coords(p, center);
    return {cx + scale * w[0], cy - scale * w[1]};
  }
  // Ideal boundary image under the same Mobius map (z - c) / (z - cbar).
  std::array<double, 2> ideal(BoundaryPoint x) const {
    std::complex<double> w;
    if (x.infinite) {
      w = {1.0, 0.0};
    } else {
      const std::complex<double> c{center.u, center.v};
      w = (x.value - c) / (x.value - std::conj(c));
    }
    return {cx + scale * w.real(), cy - scale * w.imag()};
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // Avoid the signed zero so identical geometry prints identically.
  if (std::string_view(buf) == "-0.000") return "0.000";
  return buf;
}

// Circle orthogonal to the rendered disk through two of its boundary points;
// nullopt when the points are antipodal and the geodesic is a diameter.
struct ArcCircle {
  double cx, cy, r;
};
std::optional<ArcCircle> ortho_circle(const Mapper& m, std::array<double, 2> a,
                                      std::array<double, 2> b) {
  // Work in unit-disk coordinates, then rescale.
  const double ax = (a[0] - m.cx) / m.scale, ay = (a[1] - m.cy) / m.scale;
  const double bx = (b[0] - m.cx) / m.scale, by = (b[1] - m.cy) / m.scale;
  const double denom = 1.0 + ax * bx + ay * by;
  if (std::abs(denom) < 1e-9) return std::nullopt;
  const double cx = (ax + bx) / denom, cy = (ay + by) / denom;
  const double r2 = cx * cx + cy * cy - 1.0;
  if (r2 <= 0.0) return std::nullopt;
  return ArcCircle{m.cx + m.scale * cx, m.cy + m.scale * cy, m.scale * std::sqrt(r2)};
}

// SVG path segment from s to t: the minor arc of the given circle, or a
// straight chord for diameters.  sweep follows the sign of the cross
// product around the circle center in page coordinates.
std::string arc_to(std::array<double, 2> s, std::array<double, 2> t,
                   const std::optional<ArcCircle>& c) {
  if (!c) return "L " + num(t[0]) + " " + num(t[1]);
  const double cross =
      (s[0] - c->cx) * (t[1] - c->cy) - (s[1] - c->cy) * (t[0] - c->cx);
  const char* sweep = cross > 0.0 ? "1" : "0";
  return "A " + num(c->r) + " " + num(c->r) + " 0 0 " + sweep + " " + num(t[0]) + " " +
         num(t[1]);
}

}  // namespace

std::string render_svg(const Arrangement& A, const Coloring* coloring,
                       const GrowthResult* growth, const RenderSpec& spec) {
  if (spec.palette.size() < 7)
    throw Error(ErrorCode::InvalidArgument, "render palette needs at least 7 entries");
  for (std::size_t i = 0; i < spec.palette.size(); ++i)
    for (std::size_t j = i + 1; j < spec.palette.size(); ++j)
      if (spec.palette[i] == spec.palette[j])
        throw Error(ErrorCode::InvalidArgument, "render palette entries must be distinct");

  const double s = 0.49 * std::min(spec.width, spec.height);  // 2% margin
  const Mapper m{A.center(), spec.width / 2.0, spec.height / 2.0, s};
  const auto& fam = A.family();

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << " "
      << spec.height << "\">\n";
  out << "<circle cx=\"" << num(m.cx) << "\" cy=\"" << num(m.cy) << "\" r=\"" << num(s)
      << "\" fill=\"#ffffff\" stroke=\"#333333\" stroke-width=\"" << num(spec.boundary_width)
      << "\"/>\n";
  // Region and trusted sub-disk rings (both centered at the basepoint).
  out << "<circle cx=\"" << num(m.cx) << "\" cy=\"" << num(m.cy) << "\" r=\""
      << num(s * std::tanh(A.radius() / 2.0))
      << "\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\" stroke-dasharray=\"4,4\"/>\n";
  out << "<circle cx=\"" << num(m.cx) << "\" cy=\"" << num(m.cy) << "\" r=\""
      << num(s * std::tanh(A.trusted_radius() / 2.0))
      << "\" fill=\"none\" stroke=\"#dddddd\" stroke-width=\"1\" stroke-dasharray=\"2,4\"/>\n";

  if (spec.toggles.tiles) {
    out << "<g id=\"tiles\">\n";
    for (int fi : A.complete_tiles()) {
      const auto& f = A.faces()[static_cast<std::size_t>(fi)];
      std::string d;
      bool first = true;
      for (int hid : f.walk) {
        const auto& he = A.half_edges()[static_cast<std::size_t>(hid)];
        const auto a = m.interior(A.vertices()[static_cast<std::size_t>(he.origin)].p);
        const auto b = m.interior(A.vertices()[static_cast<std::size_t>(he.target)].p);
        if (first) {
          d = "M " + num(a[0]) + " " + num(a[1]);
          first = false;
        }
        const Geodesic& line = fam.lines[static_cast<std::size_t>(he.line)];
        d += " " + arc_to(a, b, ortho_circle(m, m.ideal(line.e1), m.ideal(line.e2)));
      }
      d += " Z";
      const auto& fill =
          spec.palette[static_cast<std::size_t>(f.side_count) % spec.palette.size()];
      out << "<path d=\"" << d << "\" fill=\"" << fill << "\" fill-opacity=\"0.18\"/>\n";
    }
    out << "</g>\n";
  }

  if (spec.toggles.lines) {
    out << "<g id=\"lines\">\n";
    for (std::size_t i = 0; i < fam.lines.size(); ++i) {
      std::string stroke = "#444444";
      if (coloring && i < coloring->color.size() && coloring->color[i] >= 1)
        stroke = spec.palette[static_cast<std::size_t>(coloring->color[i] - 1) %
                              spec.palette.size()];
      const auto a = m.ideal(fam.lines[i].e1);
      const auto b = m.ideal(fam.lines[i].e2);
      const auto circle = ortho_circle(m, a, b);
      if (circle) {
        out << "<path d=\"M " << num(a[0]) << " " << num(a[1]) << " "
            << arc_to(a, b, circle) << "\" fill=\"none\" stroke=\"" << stroke
            << "\" stroke-width=\"" << num(spec.line_width) << "\"/>\n";
      } else {
        out << "<line x1=\"" << num(a[0]) << "\" y1=\"" << num(a[1]) << "\" x2=\"" << num(b[0])
            << "\" y2=\"" << num(b[1]) << "\" stroke=\"" << stroke << "\" stroke-width=\""
            << num(spec.line_width) << "\"/>\n";
      }
    }
    out << "</g>\n";
  }

  if (spec.toggles.growth_polygon && growth && !growth->states.empty()) {
    const GrowthState& last = growth->states.back();
    std::string d;
    bool first = true;
    for (int hid : last.boundary) {
      const auto& he = A.half_edges()[static_cast<std::size_t>(hid)];
      const auto a = m.interior(A.vertices()[static_cast<std::size_t>(he.origin)].p);
      const auto b = m.interior(A.vertices()[static_cast<std::size_t>(he.target)].p);
      if (first) {
        d = "M " + num(a[0]) + " " + num(a[1]);
        first = false;
      }
      const Geodesic& line = fam.lines[static_cast<std::size_t>(he.line)];
      d += " " + arc_to(a, b, ortho_circle(m, m.ideal(line.e1), m.ideal(line.e2)));
    }
    d += " Z";
    out << "<g id=\"growth\"><path d=\"" << d
        << "\" fill=\"none\" stroke=\"#111111\" stroke-width=\"" << num(spec.boundary_width)
        << "\" stroke-dasharray=\"6,4\"/></g>\n";
  }

  if (spec.toggles.vertices) {
    out << "<g id=\"vertices\">\n";
    for (int vi : A.interior_vertices()) {
      const auto p = m.interior(A.vertices()[static_cast<std::size_t>(vi)].p);
      out << "<circle cx=\"" << num(p[0]) << "\" cy=\"" << num(p[1])
          << "\" r=\"2\" fill=\"#222222\"/>\n";
    }
    out << "</g>\n";
  }

  if (spec.toggles.cone_points) {
    const RoleAssignment roles = role_normalize(fam.sig);
    const TriangleGroup G = build_generators(roles.role_signature());
    out << "<g id=\"cone-points\">\n";
    const std::array<std::pair<Point, const char*>, 3> pts{
        std::pair{G.X, "#000000"}, {G.Y, "#555555"}, {G.Z, "#aaaaaa"}};
    for (const auto& [p, fill] : pts) {
      const auto q = m.interior(p);
      out << "<circle cx=\"" << num(q[0]) << "\" cy=\"" << num(q[1]) << "\" r=\"4\" fill=\""
          << fill << "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
    }
    out << "</g>\n";
  }

  out << "</svg>\n";
  return out.str();
}

void render_svg_file(const std::string& path, const Arrangement& A, const Coloring* coloring,
                     const GrowthResult* growth, const RenderSpec& spec) {
  write_file_atomic(path, render_svg(A, coloring, growth, spec));
}

}  // namespace stiler
