#pragma once

// Poincare-disk rendering: the upper half-plane is sent through the Cayley
// map, geodesics become circular arcs orthogonal to the unit circle (or
// diameters), and each family line is one stroked SVG element.

#include <string>
#include <vector>

#include "stiler/report.hpp"

namespace stiler {

struct RenderSpec {
  int width = 900;
  int height = 900;
  // Pairwise distinct stroke colors, cycled by color index; at least 7.
  std::vector<std::string> palette = {"#e6194b", "#3cb44b", "#b8a500", "#4363d8",
                                      "#f58231", "#911eb4", "#42b8d4"};
  double line_width = 1.4;
  double boundary_width = 2.0;
  struct {
    bool lines = true;
    bool vertices = false;
    bool tiles = true;
    bool cone_points = true;
    bool growth_polygon = false;
  } toggles;
};

// coloring and growth may be null: lines fall back to grayscale, the growth
// overlay is skipped.  Returns a complete SVG 1.1 document; deterministic
// for identical inputs (fixed precision, fixed element order).
std::string render_svg(const Arrangement& A, const Coloring* coloring,
                       const GrowthResult* growth, const RenderSpec& spec = {});

// Atomic file variant.
void render_svg_file(const std::string& path, const Arrangement& A, const Coloring* coloring,
                     const GrowthResult* growth, const RenderSpec& spec = {});

}  // namespace stiler
