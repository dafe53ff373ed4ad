#pragma once

// The line family inside a disk, its planar subdivision (vertices, edges,
// tiles), and the checks that run on it: crossing axioms, tile census,
// adjacency observations, plane properties, local degree/clique bounds.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stiler/trigroup.hpp"

namespace stiler {

// Poincare-disk coordinates of z in the model centered at z0 (z0 maps to the
// origin, the ideal boundary to the unit circle).  Hyperbolic distance
// between two points is always >= twice the Euclidean distance of their
// images, which makes these coordinates safe for proximity grids.
std::array<double, 2> disk_coords(Point z, Point z0);

struct LineFamily {
  std::vector<Geodesic> lines;
  std::vector<Word> witnesses;  // witnesses[i] maps the base line to lines[i]
  Signature sig;
  Point center{0.0, 1.0};
  double region_radius = 0.0;
  int word_length = 0;   // ball radius actually enumerated
  bool stabilized = false;
  std::vector<std::size_t> layer_counts;  // family size after each ball radius
  std::vector<std::string> warnings;
};

// Translates of l under ball elements, filtered to lines meeting the closed
// disk of radius R about `center`, deduplicated by chordal endpoint pairs.
// The ball radius is raised until two consecutive layers contribute nothing
// (stabilized) or N_max is reached (NotStabilized warning in the result).
// A candidate sharing one endpoint with a distinct existing line (within
// tol.point chordal) is degenerate: excluded with a warning.
LineFamily build_line_family(const TriangleGroup& G, const Geodesic& l, double R,
                             int N_max = 14, Point center = {0.0, 1.0},
                             std::size_t ball_cap = 200000, const Tolerances& tol = {});

// Planar subdivision of the clipped disk.  Faces are walked with the
// interior on the left; the clip circle contributes arc edges and the
// region outside the circle is the single outer face.
class Arrangement {
 public:
  struct Vertex {
    Point p;
    int line_a = -1, line_b = -1;  // crossing: both set; clip vertex: only line_a
    bool clip = false;
    double dist = 0.0;   // hyperbolic distance to the disk center
    double angle = 0.0;  // clip vertices: position angle on the clip circle
  };
  struct HalfEdge {
    int origin = -1, target = -1;
    int twin = -1, next = -1;
    int line = -1;  // -1 on clip arcs
    int face = -1;
    double out_angle = 0.0;  // tangent direction at the origin
  };
  struct Face {
    std::vector<int> walk;  // half-edge ids in boundary order
    bool outer = false;
    bool has_clip = false;
    bool complete = false;  // no clip edge and every vertex within the trusted sub-disk
    bool convex = false;    // complete tiles: every interior angle < pi (+1e-9)
    int side_count = 0;     // boundary edges lying on family lines
    std::vector<int> lines;  // sorted distinct line indices on the boundary
    double min_vertex_dist = 0.0;
  };

  const LineFamily& family() const { return family_; }
  double radius() const { return family_.region_radius; }
  double trusted_radius() const { return 0.5 * family_.region_radius; }
  Point center() const { return family_.center; }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<HalfEdge>& half_edges() const { return half_edges_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<int>& interior_vertices() const { return interior_vertices_; }
  const std::vector<int>& complete_tiles() const { return complete_tiles_; }
  int outer_face() const { return outer_face_; }

  // Number of faces meeting the vertex (= wedges in the rotation system).
  int face_degree(int vertex) const {
    return static_cast<int>(rotation_[static_cast<std::size_t>(vertex)].size());
  }
  // Faces on both sides of a line edge, every interior edge listed once.
  struct EdgeNeighbors {
    int face_a, face_b, line, half_edge;
  };
  const std::vector<EdgeNeighbors>& edge_neighbors() const { return edge_neighbors_; }

  friend Arrangement build_arrangement(const LineFamily& family, const Tolerances& tol);

 private:
  LineFamily family_;
  Tolerances tol_;
  std::vector<Vertex> vertices_;
  std::vector<HalfEdge> half_edges_;
  std::vector<Face> faces_;
  std::vector<std::vector<int>> rotation_;  // outgoing half-edges per vertex, ccw
  std::vector<int> interior_vertices_;
  std::vector<int> complete_tiles_;
  std::vector<EdgeNeighbors> edge_neighbors_;
  int outer_face_ = -1;
};

// Throws TriplePointDetected (with the line indices) when three lines meet
// within tol.point; clip-grazing crossings are skipped with a warning
// recorded in the family copy.
Arrangement build_arrangement(const LineFamily& family, const Tolerances& tol = {});

struct AxiomReport {
  bool pair_intersections_ok = true;  // structural: one crossing per pair
  int max_pair_intersections = 0;
  double min_vertex_separation = 0.0;  // hyperbolic, over distinct crossing points
  bool separation_ok = true;           // min separation > tol.point
  bool vertex_degree_ok = true;        // every interior vertex meets 4 faces
  bool euler_ok = true;                // V - E + F = 2, exact integers
  long euler_v = 0, euler_e = 0, euler_f = 0;
  std::vector<std::string> violations;
};

AxiomReport verify_crossing_axioms(const Arrangement& A, const Tolerances& tol = {});

// Exact minimum pairwise hyperbolic distance between interior vertices
// (infinity when fewer than two exist).  Grid-accelerated but exact.
double min_vertex_separation(const Arrangement& A);

// side count -> number of complete tiles; throws NoCompleteTiles when the
// region holds no complete tile.
std::map<int, int> tile_census(const Arrangement& A);

struct AdjacencyReport {
  bool obs2_ok = true;             // case 1: no two 4-gons share an edge
  bool obs3_ok = true;             // case 1: triangle neighbors are 2r-gons, 2r >= 6
  bool case3_edge_rule_ok = true;  // case 3: every edge separates a triangle from a q-gon
  std::vector<std::string> violations;
};

// Checks run over edges between two complete tiles; each observation is
// gated to the case it belongs to and passes vacuously otherwise.
AdjacencyReport adjacency_observations(const Arrangement& A, const RoleAssignment& roles);

struct IntersectionGraph {
  std::size_t n = 0;
  std::vector<std::vector<int>> adj;  // sorted neighbor lists
  std::vector<std::pair<int, int>> edges;

  bool has_edge(int a, int b) const;
};

// Crossing relation of the full geodesics (not clipped to the disk).
IntersectionGraph intersection_graph(const LineFamily& family, const Tolerances& tol = {});

struct PlaneCheck {
  bool pass = true;
  std::vector<int> witness;  // a violating k-clique when pass is false
};

// Pass iff the graph has no k-clique (among any k lines some pair is
// disjoint); exhaustive search, k >= 2.
PlaneCheck check_k_plane(const IntersectionGraph& g, int k);

// The complete tile nearest the basepoint (minimum vertex distance, ties by
// the sorted rounded vertex list); throws NoCompleteTiles.
int seed_tile(const Arrangement& A);

struct LocalChecks {
  int seed = -1;
  bool seed_degree_ok = true;  // each seed-tile line crosses <= 4 of the others
  int max_seed_degree = 0;
  bool cliques_bound_triangles = true;  // every in-trusted-disk 3-clique is a triangle tile
  std::size_t cliques_in_disk = 0;
  std::size_t cliques_matched = 0;
  std::vector<std::string> violations;
};

LocalChecks local_degree_and_clique_checks(const Arrangement& A, const IntersectionGraph& g,
                                           const Tolerances& tol = {});

}  // namespace stiler
