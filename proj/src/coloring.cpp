#include "stiler/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace stiler {

namespace {

double norm_angle(double a) { return std::atan2(std::sin(a), std::cos(a)); }

// Outgoing half-edges per vertex; order is irrelevant here, faces and
// half-edges are looked up by identity.
std::vector<std::vector<int>> vertex_star(const Arrangement& A) {
  std::vector<std::vector<int>> star(A.vertices().size());
  for (std::size_t h = 0; h < A.half_edges().size(); ++h)
    star[static_cast<std::size_t>(A.half_edges()[h].origin)].push_back(static_cast<int>(h));
  return star;
}

// Interior angle of the member union at the vertex between an arriving
// boundary half-edge and the departing one; reflex angles land in (pi, 2pi).
double union_interior_angle(const Arrangement& A, int h_in, int h_out) {
  const auto& hes = A.half_edges();
  const double in_dir =
      norm_angle(hes[static_cast<std::size_t>(hes[static_cast<std::size_t>(h_in)].twin)].out_angle +
                 M_PI);
  const double out_dir = hes[static_cast<std::size_t>(h_out)].out_angle;
  return M_PI - norm_angle(out_dir - in_dir);
}

// Walks the boundary of the member union, interior on the left.  A valid
// union is a disk: one cycle covering every boundary half-edge, no vertex
// visited twice.
std::vector<int> walk_union_boundary(const Arrangement& A, const std::vector<char>& member) {
  const auto& hes = A.half_edges();
  std::vector<int> boundary_hes;
  for (std::size_t h = 0; h < hes.size(); ++h)
    if (member[static_cast<std::size_t>(hes[h].face)] &&
        !member[static_cast<std::size_t>(hes[static_cast<std::size_t>(hes[h].twin)].face)])
      boundary_hes.push_back(static_cast<int>(h));
  if (boundary_hes.empty())
    throw Error(ErrorCode::ConsistencyFailure, "tile union has no boundary");

  std::vector<int> walk;
  const int start = boundary_hes.front();
  int cur = start;
  do {
    walk.push_back(cur);
    if (walk.size() > hes.size())
      throw Error(ErrorCode::ConsistencyFailure, "union boundary walk does not close");
    int e = hes[static_cast<std::size_t>(cur)].next;
    std::size_t guard = 0;
    while (member[static_cast<std::size_t>(
        hes[static_cast<std::size_t>(hes[static_cast<std::size_t>(e)].twin)].face)]) {
      e = hes[static_cast<std::size_t>(hes[static_cast<std::size_t>(e)].twin)].next;
      if (++guard > hes.size())
        throw Error(ErrorCode::ConsistencyFailure, "vertex rotation does not terminate");
    }
    cur = e;
  } while (cur != start);

  if (walk.size() != boundary_hes.size())
    throw Error(ErrorCode::NotADisk, "tile union boundary is not a single cycle");
  std::set<int> seen;
  for (int h : walk)
    if (!seen.insert(hes[static_cast<std::size_t>(h)].target).second)
      throw Error(ErrorCode::NotADisk, "tile union pinches at a vertex");
  return walk;
}

GrowthState make_state(const Arrangement& A, const std::vector<char>& member, int n, int fixups) {
  GrowthState s;
  s.generation = n;
  s.fixups = fixups;
  for (std::size_t f = 0; f < member.size(); ++f)
    if (member[f]) s.polygon.push_back(static_cast<int>(f));
  s.boundary = walk_union_boundary(A, member);
  const auto& hes = A.half_edges();
  s.convex = true;
  for (std::size_t i = 0; i < s.boundary.size(); ++i) {
    const int h_in = s.boundary[i];
    const int h_out = s.boundary[(i + 1) % s.boundary.size()];
    s.boundary_vertices.push_back(hes[static_cast<std::size_t>(h_in)].target);
    if (union_interior_angle(A, h_in, h_out) > M_PI + 1e-9) s.convex = false;
  }
  // One boundary side = maximal run of walk edges on one line; the vertices
  // inside a run are the crossing points interior to that side.
  std::vector<int> run_lines;
  std::vector<int> run_lengths;
  for (int h : s.boundary) {
    const int line = hes[static_cast<std::size_t>(h)].line;
    if (!run_lines.empty() && run_lines.back() == line) {
      ++run_lengths.back();
    } else {
      run_lines.push_back(line);
      run_lengths.push_back(1);
    }
  }
  if (run_lines.size() > 1 && run_lines.front() == run_lines.back()) {
    run_lengths.front() += run_lengths.back();
    run_lines.pop_back();
    run_lengths.pop_back();
  }
  for (int len : run_lengths)
    s.max_edge_interior_points = std::max(s.max_edge_interior_points, len - 1);
  return s;
}

}  // namespace

GrowthResult polygon_growth(const Arrangement& A, int steps, const Tolerances& tol) {
  return polygon_growth(A, steps, -1, tol);
}

GrowthResult polygon_growth(const Arrangement& A, int steps, int seed_choice,
                            const Tolerances&) {
  const auto& faces = A.faces();
  const auto& hes = A.half_edges();
  const auto star = vertex_star(A);

  GrowthResult res;
  res.generation.assign(A.family().lines.size(), kUnassignedGeneration);
  std::vector<char> member(faces.size(), 0);

  const int seed = seed_choice < 0 ? seed_tile(A) : seed_choice;
  if (seed_choice >= 0 &&
      (seed_choice >= static_cast<int>(faces.size()) || seed_choice == A.outer_face() ||
       !faces[static_cast<std::size_t>(seed_choice)].complete))
    throw Error(ErrorCode::InvalidIndex,
                "seed tile " + std::to_string(seed_choice) + " is not a complete tile");
  member[static_cast<std::size_t>(seed)] = 1;
  res.states.push_back(make_state(A, member, 0, 0));
  for (int l : faces[static_cast<std::size_t>(seed)].lines)
    res.generation[static_cast<std::size_t>(l)] = 0;

  auto faces_at = [&](int v) {
    std::set<int> fs;
    for (int h : star[static_cast<std::size_t>(v)]) fs.insert(hes[static_cast<std::size_t>(h)].face);
    return fs;
  };

  for (int n = 1; n <= steps; ++n) {
    // The step is the union with every tile meeting the boundary; it is
    // taken only when all of them (and all later fix-up tiles) are complete.
    std::set<int> added;
    bool blocked = false;
    for (int v : res.states.back().boundary_vertices) {
      for (int f : faces_at(v)) {
        if (member[static_cast<std::size_t>(f)]) continue;
        if (f == A.outer_face() || !faces[static_cast<std::size_t>(f)].complete) {
          blocked = true;
          break;
        }
        added.insert(f);
      }
      if (blocked) break;
    }
    if (blocked || added.empty()) {
      res.exhausted = true;
      break;
    }

    std::vector<char> trial = member;
    for (int f : added) trial[static_cast<std::size_t>(f)] = 1;

    int fixups = 0;
    std::size_t rounds = 0;
    for (;;) {
      const auto walk = walk_union_boundary(A, trial);
      std::vector<int> reflex;
      for (std::size_t i = 0; i < walk.size(); ++i) {
        const int h_in = walk[i];
        const int h_out = walk[(i + 1) % walk.size()];
        if (union_interior_angle(A, h_in, h_out) > M_PI + 1e-9)
          reflex.push_back(hes[static_cast<std::size_t>(h_in)].target);
      }
      if (reflex.empty()) break;
      for (int v : reflex) {
        std::vector<int> missing;
        bool apex_of_triangle = false;
        for (int f : faces_at(v)) {
          if (trial[static_cast<std::size_t>(f)]) {
            if (faces[static_cast<std::size_t>(f)].side_count == 3) apex_of_triangle = true;
          } else {
            missing.push_back(f);
          }
        }
        if (missing.size() != 1 || !apex_of_triangle)
          throw Error(ErrorCode::NonConvexUnfixable,
                      "reflex vertex " + std::to_string(v) + " is not a triangle apex");
        const int s = missing.front();
        if (s == A.outer_face() || !faces[static_cast<std::size_t>(s)].complete) {
          blocked = true;
          break;
        }
        trial[static_cast<std::size_t>(s)] = 1;
        ++fixups;
      }
      if (blocked) break;
      if (++rounds > faces.size())
        throw Error(ErrorCode::ConsistencyFailure, "convexification does not terminate");
    }
    if (blocked) {
      res.exhausted = true;
      break;
    }

    member = std::move(trial);
    res.states.push_back(make_state(A, member, n, fixups));
    res.fixup_total += fixups;
    for (int f : res.states.back().polygon)
      for (int l : faces[static_cast<std::size_t>(f)].lines)
        if (res.generation[static_cast<std::size_t>(l)] == kUnassignedGeneration)
          res.generation[static_cast<std::size_t>(l)] = n;
  }

  res.reached = res.states.back().generation;
  return res;
}

Coloring greedy_color(const Arrangement& A, const std::vector<int>& generation,
                      const Tolerances& tol) {
  return greedy_color(A, generation, intersection_graph(A.family(), tol));
}

Coloring greedy_color(const Arrangement& A, const std::vector<int>& generation,
                      const IntersectionGraph& graph) {
  const auto& lines = A.family().lines;
  if (generation.size() != lines.size())
    throw Error(ErrorCode::InvalidArgument, "generation map does not cover the family");

  // Canonical key: ordered ideal endpoints, infinity sorted last.
  auto key = [&](int l) {
    const auto& g = lines[static_cast<std::size_t>(l)];
    const double a = g.e1.infinite ? std::numeric_limits<double>::infinity() : g.e1.value;
    const double b = g.e2.infinite ? std::numeric_limits<double>::infinity() : g.e2.value;
    return std::make_pair(std::min(a, b), std::max(a, b));
  };
  std::vector<int> order(lines.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const long ga = generation[static_cast<std::size_t>(a)] == kUnassignedGeneration
                        ? std::numeric_limits<long>::max()
                        : generation[static_cast<std::size_t>(a)];
    const long gb = generation[static_cast<std::size_t>(b)] == kUnassignedGeneration
                        ? std::numeric_limits<long>::max()
                        : generation[static_cast<std::size_t>(b)];
    if (ga != gb) return ga < gb;
    return key(a) < key(b);
  });

  Coloring c;
  c.color.assign(lines.size(), 0);
  c.backward_conflicts.assign(lines.size(), 0);
  for (int l : order) {
    std::set<int> used;
    int conflicts = 0;
    for (int nb : graph.adj[static_cast<std::size_t>(l)])
      if (c.color[static_cast<std::size_t>(nb)] > 0) {
        used.insert(c.color[static_cast<std::size_t>(nb)]);
        ++conflicts;
      }
    int pick = 1;
    while (used.count(pick)) ++pick;
    c.color[static_cast<std::size_t>(l)] = pick;
    c.backward_conflicts[static_cast<std::size_t>(l)] = conflicts;
    const bool assigned = generation[static_cast<std::size_t>(l)] != kUnassignedGeneration;
    c.colors_used_total = std::max(c.colors_used_total, pick);
    if (assigned) {
      c.colors_used = std::max(c.colors_used, pick);
      c.max_backward_conflicts = std::max(c.max_backward_conflicts, conflicts);
    } else {
      ++c.unassigned_lines;
    }
  }
  return c;
}

ColorCheck verify_coloring(const Arrangement& A, const Coloring& c, const Tolerances& tol) {
  return verify_coloring(A, c, intersection_graph(A.family(), tol));
}

ColorCheck verify_coloring(const Arrangement& A, const Coloring& c,
                           const IntersectionGraph& graph) {
  if (c.color.size() != A.family().lines.size())
    throw Error(ErrorCode::InvalidArgument, "coloring does not cover the family");
  ColorCheck r;
  for (const auto& [a, b] : graph.edges)
    if (c.color[static_cast<std::size_t>(a)] == c.color[static_cast<std::size_t>(b)]) {
      r.pass = false;
      r.witness = {a, b};
      return r;
    }
  return r;
}

}  // namespace stiler
