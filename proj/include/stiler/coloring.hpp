#pragma once

// Convex polygon growth over complete tiles (seed, ring annexation, reflex
// fix-up at triangle apexes), the line-generation map it induces, and the
// greedy coloring processed in generation order.

#include <array>
#include <vector>

#include "stiler/arrangement.hpp"

namespace stiler {

inline constexpr int kUnassignedGeneration = -1;

struct GrowthState {
  std::vector<int> polygon;           // sorted complete-tile face ids, union = P_n
  int generation = 0;                 // n
  std::vector<int> boundary;          // boundary half-edge ids, one cyclic walk,
                                      // interior on the left
  std::vector<int> boundary_vertices; // target vertex of each boundary half-edge
  bool convex = false;                // every boundary interior angle < pi (+1e-9)
  int fixups = 0;                     // tiles adjoined at reflex vertices this step
  int max_edge_interior_points = 0;   // crossing points interior to one boundary side
};

struct GrowthResult {
  std::vector<GrowthState> states;  // P_0 .. P_reached
  std::vector<int> generation;      // line -> first n with the line meeting P_n,
                                    // kUnassignedGeneration when never reached
  int reached = 0;                  // generation of the last state
  bool exhausted = false;           // stopped early: the next ring needs a tile
                                    // that is not complete
  int fixup_total = 0;
};

// P_0 is the seed tile; each step annexes every complete tile meeting the
// boundary at a vertex or an edge, then restores convexity by adjoining the
// fourth tile at each reflex vertex (which must be the apex of a member
// triangle).  A step that would need a non-complete tile is not taken.
// Throws NonConvexUnfixable when a reflex vertex has no triangle member,
// NotADisk when a union stops being a single disk, NoCompleteTiles when
// there is no seed.
GrowthResult polygon_growth(const Arrangement& A, int steps, const Tolerances& tol = {});
// Same with a caller-chosen seed: -1 picks seed_tile(A), anything else must
// be the face id of a complete tile (InvalidIndex otherwise).
GrowthResult polygon_growth(const Arrangement& A, int steps, int seed,
                            const Tolerances& tol);

struct Coloring {
  std::vector<int> color;                // per line, 1-based
  int colors_used = 0;                   // over generation-assigned lines
  int colors_used_total = 0;             // including rim lines colored last
  std::vector<int> backward_conflicts;   // already-colored crossing lines when assigned
  int max_backward_conflicts = 0;        // over generation-assigned lines
  int unassigned_lines = 0;              // rim lines outside the generation map
};

// Lines ordered by (generation, canonical endpoint key), unreached lines
// last; each line takes the smallest color absent among already-colored
// lines crossing it.  Crossing is the full-geodesic relation.
Coloring greedy_color(const Arrangement& A, const std::vector<int>& generation,
                      const Tolerances& tol = {});
// Same, reusing a crossing graph the caller already has.
Coloring greedy_color(const Arrangement& A, const std::vector<int>& generation,
                      const IntersectionGraph& graph);

struct ColorCheck {
  bool pass = true;
  std::array<int, 2> witness{-1, -1};  // a same-colored crossing pair when failing
};

// Brute scan over all crossing pairs.
ColorCheck verify_coloring(const Arrangement& A, const Coloring& c, const Tolerances& tol = {});
// Same, reusing a crossing graph the caller already has.
ColorCheck verify_coloring(const Arrangement& A, const Coloring& c,
                           const IntersectionGraph& graph);

}  // namespace stiler
