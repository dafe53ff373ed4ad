#include "stiler/arrangement.hpp"

#include "stiler/threads.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace stiler {

std::array<double, 2> disk_coords(Point z, Point z0) {
  const double a = z.u - z0.u, b = z.v - z0.v;
  const double c = z.u - z0.u, d = z.v + z0.v;
  const double n2 = c * c + d * d;
  return {(a * c + b * d) / n2, (b * c - a * d) / n2};
}

namespace {

std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t key2(double x, double y, double cell) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(x / cell))));
  h = combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(y / cell))));
  return h;
}

double norm_angle(double a) { return std::atan2(std::sin(a), std::cos(a)); }

double line_param(const Geodesic& g, Point p) {
  return g.vertical() ? p.v : std::atan2(p.v, p.u - g.m());
}

Point param_point(const Geodesic& g, double t) {
  if (g.vertical()) return {g.x(), t};
  return {g.m() + g.rho() * std::cos(t), g.rho() * std::sin(t)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Line family

LineFamily build_line_family(const TriangleGroup& G, const Geodesic& l, double R, int N_max,
                             Point center, std::size_t ball_cap, const Tolerances& tol) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "region radius must be positive");
  if (N_max < 0) throw Error(ErrorCode::InvalidArgument, "word length bound must be >= 0");

  LineFamily fam;
  fam.sig = G.sig;
  fam.center = center;
  fam.region_radius = R;

  // Breadth-first orbit of the line under left generator application: the
  // depth-N line set equals {g.l : g in the word ball of radius N}, because
  // a k-letter word applies one letter per step.  Enumerating lines instead
  // of group elements quotients out the line stabilizers, which is what
  // keeps deep regions reachable.  Lines are expanded while they meet the
  // disk of radius `reach`; the band beyond R covers every parent of an
  // in-disk line (one generator displacement) plus path wander.
  const std::array<Isometry, 6> gen = {G.x, G.x.inverse(), G.y,
                                       G.y.inverse(), G.z, G.z.inverse()};
  double max_disp = 0.0;
  for (const auto& s : gen)
    max_disp = std::max(max_disp, hyperbolic_distance(center, s.apply(center)));
  const double reach = R + max_disp + 2.0;

  struct Node {
    Geodesic g;
    int parent;          // node index; -1 at the root
    std::int8_t letter;  // first letter of the witness word
    int family = -1;     // index in fam.lines, -1 for frontier/excluded lines
  };
  std::vector<Node> nodes;

  constexpr double kCell = 1e-5;  // endpoint grid, far above tol.point
  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  const auto probe_hits = [&](const std::array<double, 2>& p, std::vector<int>& hits) {
    for (int mask = 0; mask < 4; ++mask) {
      const double dx = (mask & 1) ? tol.point : -tol.point;
      const double dy = (mask & 2) ? tol.point : -tol.point;
      const auto it = grid.find(key2(p[0] + dx, p[1] + dy, kCell));
      if (it != grid.end()) hits.insert(hits.end(), it->second.begin(), it->second.end());
    }
  };

  const auto witness_of = [&](int idx) {
    // Path letters are freely reduced already: a cancelling child always
    // duplicates its grandparent's line and is never stored.
    Word w;
    for (int i = idx; i > 0; i = nodes[static_cast<std::size_t>(i)].parent)
      w.letters.push_back(nodes[static_cast<std::size_t>(i)].letter);
    return w;
  };

  const auto add_candidate = [&](BoundaryPoint a, BoundaryPoint b, int parent,
                                 std::int8_t letter) {
    // Endpoints chordally closer than tol.point describe a line far outside
    // any usable disk; skip before the Geodesic constructor rejects them.
    if (chordal(a, b) <= tol.point) return;
    const Geodesic cand(a, b, tol);
    if (distance_point_to_geodesic(center, cand) > reach) return;

    const auto p1 = cayley_boundary(cand.e1), p2 = cayley_boundary(cand.e2);
    std::vector<int> hits;
    probe_hits(p1, hits);
    probe_hits(p2, hits);
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());

    int shared_with = -1;
    for (int idx : hits) {
      const Node& other = nodes[static_cast<std::size_t>(idx)];
      const double c11 = chordal(cand.e1, other.g.e1), c12 = chordal(cand.e1, other.g.e2);
      const double c21 = chordal(cand.e2, other.g.e1), c22 = chordal(cand.e2, other.g.e2);
      if ((c11 <= tol.point && c22 <= tol.point) || (c12 <= tol.point && c21 <= tol.point))
        return;  // duplicate line
      if (other.family >= 0 && std::min(std::min(c11, c12), std::min(c21, c22)) <= tol.point)
        shared_with = other.family;
    }

    if (nodes.size() >= ball_cap)
      throw Error(ErrorCode::BallTooLarge, "line enumeration cap " + std::to_string(ball_cap) +
                                               " exceeded at word length " +
                                               std::to_string(fam.word_length + 1));
    const bool in_disk = distance_point_to_geodesic(center, cand) <= R;
    nodes.push_back(Node{cand, parent, letter, -1});
    const int self = static_cast<int>(nodes.size()) - 1;
    if (in_disk && shared_with >= 0) {
      // Degenerate family geometry: excluded from the family, but its orbit
      // subtree stays explorable.
      std::ostringstream msg;
      msg << "near-tangent line pair: translate '" << witness_of(self).str()
          << "' shares an endpoint with line " << shared_with << " within tolerance; excluded";
      fam.warnings.push_back(msg.str());
    } else if (in_disk) {
      nodes[static_cast<std::size_t>(self)].family = static_cast<int>(fam.lines.size());
      fam.lines.push_back(cand);
      fam.witnesses.push_back(witness_of(self));
    }
    grid[key2(p1[0], p1[1], kCell)].push_back(self);
    grid[key2(p2[0], p2[1], kCell)].push_back(self);
  };

  add_candidate(l.e1, l.e2, -1, 0);
  fam.layer_counts.push_back(fam.lines.size());

  std::size_t layer_begin = 0, layer_end = nodes.size();
  for (int n = 1; n <= N_max; ++n) {
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      const Geodesic parent_line = nodes[i].g;  // copy: nodes reallocates
      for (std::int8_t letter = 0; letter < 6; ++letter)
        add_candidate(gen[static_cast<std::size_t>(letter)].apply(parent_line.e1),
                      gen[static_cast<std::size_t>(letter)].apply(parent_line.e2),
                      static_cast<int>(i), letter);
    }
    layer_begin = layer_end;
    layer_end = nodes.size();
    fam.layer_counts.push_back(fam.lines.size());
    fam.word_length = n;
    if (layer_begin == layer_end) {
      // The orbit within reach is exhausted; nothing can ever be added.
      fam.stabilized = true;
      break;
    }
    const std::size_t k = fam.layer_counts.size();
    if (k >= 3 && fam.layer_counts[k - 1] == fam.layer_counts[k - 2] &&
        fam.layer_counts[k - 2] == fam.layer_counts[k - 3]) {
      fam.stabilized = true;
      break;
    }
  }
  if (!fam.stabilized) {
    std::ostringstream msg;
    msg << "NotStabilized: family still growing at word length " << fam.word_length
        << " (size " << fam.lines.size() << ")";
    fam.warnings.push_back(msg.str());
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Arrangement build

Arrangement build_arrangement(const LineFamily& family, const Tolerances& tol) {
  if (family.lines.empty())
    throw Error(ErrorCode::InvalidArgument, "arrangement needs a nonempty line family");

  Arrangement A;
  A.family_ = family;
  A.tol_ = tol;
  const Point center = family.center;
  const double R = family.region_radius;
  const EuclideanCircle clip = hyperbolic_circle(center, R);
  const int n_lines = static_cast<int>(family.lines.size());

  // Chord of each line inside the clip circle, as a parameter interval.
  struct Chord {
    bool valid = false;
    double t0 = 0.0, t1 = 0.0;
    Point p0, p1;
  };
  std::vector<Chord> chords(static_cast<std::size_t>(n_lines));
  for (int i = 0; i < n_lines; ++i) {
    const Geodesic& g = family.lines[static_cast<std::size_t>(i)];
    Chord ch;
    if (g.vertical()) {
      const double dx = g.x() - clip.cu;
      const double s2 = clip.r * clip.r - dx * dx;
      if (s2 > 0.0) {
        const double s = std::sqrt(s2);
        ch.t0 = clip.cv - s;
        ch.t1 = clip.cv + s;
        ch.valid = ch.t1 - ch.t0 > 1e-9;
      }
    } else {
      // Radical-line substitution into the angle parameterization.
      const double m = g.m(), rho = g.rho();
      const double K = rho * rho - m * m - clip.r * clip.r + clip.cu * clip.cu +
                       clip.cv * clip.cv;
      const double Ac = clip.cu - m, Bc = clip.cv;
      const double C = (K - 2.0 * m * Ac) / (2.0 * rho);
      const double D = std::hypot(Ac, Bc);
      if (D > 0.0 && std::abs(C) < D) {
        const double phi0 = std::atan2(Bc, Ac);
        const double delta = std::acos(std::clamp(C / D, -1.0, 1.0));
        double ta = phi0 - delta, tb = phi0 + delta;
        if (std::sin(ta) <= 0.0 || std::sin(tb) <= 0.0)
          throw Error(ErrorCode::ConsistencyFailure, "clip chord left the upper half-plane");
        ta = norm_angle(ta);
        tb = norm_angle(tb);
        ch.t0 = std::min(ta, tb);
        ch.t1 = std::max(ta, tb);
        ch.valid = ch.t1 - ch.t0 > 1e-9;
      }
    }
    if (ch.valid) {
      ch.p0 = param_point(g, ch.t0);
      ch.p1 = param_point(g, ch.t1);
    } else {
      A.family_.warnings.push_back("line " + std::to_string(i) +
                                   " grazes the clip circle; no usable chord, skipped");
    }
    chords[static_cast<std::size_t>(i)] = ch;
  }

  // Pairwise crossings inside both chords.  Two chords of the clip circle
  // cross inside it exactly when their rim endpoints interleave, so the
  // candidate pairs are enumerated by a rank sweep over the rim order
  // instead of testing every pair.
  struct Crossing {
    int a, b;
    Point p;
    double ta, tb;
  };
  std::vector<Crossing> crossings;

  const auto try_pair = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    const auto pt = geodesics_intersect(family.lines[static_cast<std::size_t>(i)],
                                        family.lines[static_cast<std::size_t>(j)], tol);
    if (!pt) return;
    const Chord& ci = chords[static_cast<std::size_t>(i)];
    const Chord& cj = chords[static_cast<std::size_t>(j)];
    const double ti = line_param(family.lines[static_cast<std::size_t>(i)], *pt);
    const double tj = line_param(family.lines[static_cast<std::size_t>(j)], *pt);
    if (ti <= ci.t0 || ti >= ci.t1 || tj <= cj.t0 || tj >= cj.t1) return;
    if (hyperbolic_distance(*pt, ci.p0) <= tol.point ||
        hyperbolic_distance(*pt, ci.p1) <= tol.point ||
        hyperbolic_distance(*pt, cj.p0) <= tol.point ||
        hyperbolic_distance(*pt, cj.p1) <= tol.point) {
      A.family_.warnings.push_back("crossing of lines " + std::to_string(i) + "," +
                                   std::to_string(j) +
                                   " grazes the clip circle; vertex skipped");
      return;
    }
    crossings.push_back({i, j, *pt, ti, tj});
  };

  {
    struct RimEnd {
      double angle;
      int line;
    };
    std::vector<RimEnd> ends;
    ends.reserve(2 * static_cast<std::size_t>(n_lines));
    for (int i = 0; i < n_lines; ++i) {
      const Chord& ch = chords[static_cast<std::size_t>(i)];
      if (!ch.valid) continue;
      ends.push_back({std::atan2(ch.p0.v - clip.cv, ch.p0.u - clip.cu), i});
      ends.push_back({std::atan2(ch.p1.v - clip.cv, ch.p1.u - clip.cu), i});
    }
    std::sort(ends.begin(), ends.end(), [](const RimEnd& a, const RimEnd& b) {
      return a.angle != b.angle ? a.angle < b.angle : a.line < b.line;
    });
    std::vector<int> open_rank(static_cast<std::size_t>(n_lines), -1);
    std::set<std::pair<int, int>> open;  // (open rank, line)
    for (std::size_t k = 0; k < ends.size(); ++k) {
      const int line = ends[k].line;
      if (open_rank[static_cast<std::size_t>(line)] < 0) {
        open_rank[static_cast<std::size_t>(line)] = static_cast<int>(k);
        open.insert({static_cast<int>(k), line});
      } else {
        // Chords still open that opened after this one interleave with it.
        const std::pair<int, int> self{open_rank[static_cast<std::size_t>(line)], line};
        for (auto it = open.upper_bound(self); it != open.end(); ++it)
          try_pair(line, it->second);
        open.erase(self);
      }
    }
  }

  // Triple-point scan: two crossings sharing a line within tol.point means
  // three lines meet at one point, which the construction rules out.
  {
    constexpr double kCell = 1e-5;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    for (std::size_t idx = 0; idx < crossings.size(); ++idx) {
      const auto w = disk_coords(crossings[idx].p, center);
      for (int mask = 0; mask < 4; ++mask) {
        const double dx = (mask & 1) ? tol.point : -tol.point;
        const double dy = (mask & 2) ? tol.point : -tol.point;
        const auto it = grid.find(key2(w[0] + dx, w[1] + dy, kCell));
        if (it == grid.end()) continue;
        for (std::size_t other : it->second) {
          const Crossing& c1 = crossings[idx];
          const Crossing& c2 = crossings[other];
          const bool share = c1.a == c2.a || c1.a == c2.b || c1.b == c2.a || c1.b == c2.b;
          if (!share) continue;
          if (hyperbolic_distance(c1.p, c2.p) <= tol.point) {
            std::vector<int> ls{c1.a, c1.b, c2.a, c2.b};
            std::sort(ls.begin(), ls.end());
            ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
            std::ostringstream msg;
            msg << "lines";
            for (int v : ls) msg << ' ' << v;
            msg << " meet within " << tol.point << " near (" << c1.p.u << ", " << c1.p.v << ")";
            throw Error(ErrorCode::TriplePointDetected, msg.str());
          }
        }
      }
      grid[key2(w[0], w[1], kCell)].push_back(idx);
    }
  }

  // Nodes: crossings first, then the clip vertices of each usable chord.
  auto& verts = A.vertices_;
  for (const Crossing& c : crossings) {
    Arrangement::Vertex v;
    v.p = c.p;
    v.line_a = c.a;
    v.line_b = c.b;
    v.dist = hyperbolic_distance(center, c.p);
    verts.push_back(v);
    A.interior_vertices_.push_back(static_cast<int>(verts.size()) - 1);
  }
  std::vector<std::array<int, 2>> clip_nodes(static_cast<std::size_t>(n_lines), {-1, -1});
  for (int i = 0; i < n_lines; ++i) {
    const Chord& ch = chords[static_cast<std::size_t>(i)];
    if (!ch.valid) continue;
    for (int end = 0; end < 2; ++end) {
      Arrangement::Vertex v;
      v.p = end == 0 ? ch.p0 : ch.p1;
      v.line_a = i;
      v.clip = true;
      v.dist = hyperbolic_distance(center, v.p);
      v.angle = std::atan2(v.p.v - clip.cv, v.p.u - clip.cu);
      clip_nodes[static_cast<std::size_t>(i)][end] = static_cast<int>(verts.size());
      verts.push_back(v);
    }
  }

  // Line edges between parameter-consecutive nodes.
  auto& hes = A.half_edges_;
  std::vector<char> is_cw_arc;
  const auto push_pair = [&](int origin, int target, int line, double ang_o, double ang_t,
                             bool arc_cw_second) {
    Arrangement::HalfEdge f, r;
    f.origin = origin;
    f.target = target;
    f.line = line;
    f.out_angle = ang_o;
    r.origin = target;
    r.target = origin;
    r.line = line;
    r.out_angle = ang_t;
    f.twin = static_cast<int>(hes.size()) + 1;
    r.twin = static_cast<int>(hes.size());
    hes.push_back(f);
    hes.push_back(r);
    is_cw_arc.push_back(false);
    is_cw_arc.push_back(arc_cw_second);
  };

  std::vector<std::vector<std::pair<double, int>>> on_line(static_cast<std::size_t>(n_lines));
  for (std::size_t idx = 0; idx < crossings.size(); ++idx) {
    on_line[static_cast<std::size_t>(crossings[idx].a)].emplace_back(crossings[idx].ta,
                                                                     static_cast<int>(idx));
    on_line[static_cast<std::size_t>(crossings[idx].b)].emplace_back(crossings[idx].tb,
                                                                     static_cast<int>(idx));
  }
  for (int i = 0; i < n_lines; ++i) {
    const Chord& ch = chords[static_cast<std::size_t>(i)];
    if (!ch.valid) continue;
    const Geodesic& g = family.lines[static_cast<std::size_t>(i)];
    std::vector<std::pair<double, int>> seq = std::move(on_line[static_cast<std::size_t>(i)]);
    seq.emplace_back(ch.t0, clip_nodes[static_cast<std::size_t>(i)][0]);
    seq.emplace_back(ch.t1, clip_nodes[static_cast<std::size_t>(i)][1]);
    std::sort(seq.begin(), seq.end());
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
      if (seq[k + 1].first - seq[k].first <= 1e-12)
        throw Error(ErrorCode::ConsistencyFailure,
                    "coincident nodes along line " + std::to_string(i));
      const int a = seq[k].second, b = seq[k + 1].second;
      const auto ta = tangent_at(g, verts[static_cast<std::size_t>(a)].p, true);
      const auto tb = tangent_at(g, verts[static_cast<std::size_t>(b)].p, false);
      push_pair(a, b, i, std::atan2(ta[1], ta[0]), std::atan2(tb[1], tb[0]), false);
    }
  }

  // Clip arcs between angularly consecutive clip vertices.
  std::vector<std::pair<double, int>> rim;
  for (std::size_t v = 0; v < verts.size(); ++v)
    if (verts[v].clip) rim.emplace_back(verts[v].angle, static_cast<int>(v));
  std::sort(rim.begin(), rim.end());
  if (rim.empty())
    throw Error(ErrorCode::ConsistencyFailure, "no line reaches the clip circle");
  for (std::size_t k = 0; k < rim.size(); ++k) {
    const int a = rim[k].second;
    const int b = rim[(k + 1) % rim.size()].second;
    const double pa = rim[k].first;
    const double pb = rim[(k + 1) % rim.size()].first;
    // ccw half-edge a->b, cw half-edge b->a (left side outside the disk)
    push_pair(a, b, -1, norm_angle(pa + M_PI / 2.0), norm_angle(pb - M_PI / 2.0), true);
  }

  // Rotation system and next links: the successor of a half-edge is the
  // clockwise neighbor of its twin at the target vertex.
  auto& rot = A.rotation_;
  rot.assign(verts.size(), {});
  for (std::size_t h = 0; h < hes.size(); ++h)
    rot[static_cast<std::size_t>(hes[h].origin)].push_back(static_cast<int>(h));
  std::vector<int> pos(hes.size(), -1);
  for (auto& out : rot) {
    std::sort(out.begin(), out.end(), [&](int x, int y) {
      if (hes[static_cast<std::size_t>(x)].out_angle !=
          hes[static_cast<std::size_t>(y)].out_angle)
        return hes[static_cast<std::size_t>(x)].out_angle <
               hes[static_cast<std::size_t>(y)].out_angle;
      return hes[static_cast<std::size_t>(x)].line < hes[static_cast<std::size_t>(y)].line;
    });
    for (std::size_t k = 0; k < out.size(); ++k) pos[static_cast<std::size_t>(out[k])] =
        static_cast<int>(k);
  }
  for (std::size_t h = 0; h < hes.size(); ++h) {
    const int t = hes[h].twin;
    const auto& out = rot[static_cast<std::size_t>(hes[h].target)];
    const int k = pos[static_cast<std::size_t>(t)];
    hes[h].next = out[static_cast<std::size_t>((k + static_cast<int>(out.size()) - 1) %
                                               static_cast<int>(out.size()))];
  }

  // Face extraction.
  auto& faces = A.faces_;
  const double trusted = 0.5 * R;
  for (std::size_t h0 = 0; h0 < hes.size(); ++h0) {
    if (hes[h0].face >= 0) continue;
    Arrangement::Face f;
    const int id = static_cast<int>(faces.size());
    int h = static_cast<int>(h0);
    std::size_t guard = 0;
    do {
      hes[static_cast<std::size_t>(h)].face = id;
      f.walk.push_back(h);
      if (hes[static_cast<std::size_t>(h)].line < 0) {
        f.has_clip = true;
        if (is_cw_arc[static_cast<std::size_t>(h)]) f.outer = true;
      } else {
        ++f.side_count;
        f.lines.push_back(hes[static_cast<std::size_t>(h)].line);
      }
      h = hes[static_cast<std::size_t>(h)].next;
      if (++guard > hes.size())
        throw Error(ErrorCode::ConsistencyFailure, "face walk failed to close");
    } while (h != static_cast<int>(h0));

    std::sort(f.lines.begin(), f.lines.end());
    f.lines.erase(std::unique(f.lines.begin(), f.lines.end()), f.lines.end());
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (int he : f.walk) {
      const double d = verts[static_cast<std::size_t>(hes[static_cast<std::size_t>(he)].origin)].dist;
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    f.min_vertex_dist = dmin;
    f.complete = !f.has_clip && dmax <= trusted;
    if (f.complete) {
      f.convex = true;
      for (int he : f.walk) {
        const auto& cur = hes[static_cast<std::size_t>(he)];
        const double in_dir =
            norm_angle(hes[static_cast<std::size_t>(cur.twin)].out_angle + M_PI);
        const double out_dir = hes[static_cast<std::size_t>(cur.next)].out_angle;
        const double interior = M_PI - norm_angle(out_dir - in_dir);
        if (interior > M_PI + 1e-9) f.convex = false;
      }
    }
    faces.push_back(std::move(f));
  }

  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    if (!faces[fi].outer) continue;
    if (A.outer_face_ >= 0)
      throw Error(ErrorCode::ConsistencyFailure, "multiple outer faces");
    if (faces[fi].side_count > 0)
      throw Error(ErrorCode::ConsistencyFailure, "outer face touches a line edge");
    A.outer_face_ = static_cast<int>(fi);
  }
  if (A.outer_face_ < 0)
    throw Error(ErrorCode::ConsistencyFailure, "outer face not found");

  for (std::size_t fi = 0; fi < faces.size(); ++fi)
    if (faces[fi].complete) A.complete_tiles_.push_back(static_cast<int>(fi));

  for (std::size_t h = 0; h < hes.size(); ++h) {
    if (hes[h].line < 0 || static_cast<int>(h) > hes[h].twin) continue;
    A.edge_neighbors_.push_back({hes[h].face, hes[static_cast<std::size_t>(hes[h].twin)].face,
                                 hes[h].line, static_cast<int>(h)});
  }
  return A;
}

// ---------------------------------------------------------------------------
// Axiom checks

double min_vertex_separation(const Arrangement& A) {
  const auto& iv = A.interior_vertices();
  if (iv.size() < 2) return std::numeric_limits<double>::infinity();
  std::vector<std::array<double, 2>> w;
  w.reserve(iv.size());
  std::vector<Point> pts;
  pts.reserve(iv.size());
  for (int v : iv) {
    pts.push_back(A.vertices()[static_cast<std::size_t>(v)].p);
    w.push_back(disk_coords(pts.back(), A.center()));
  }
  // Grid with cell D/2 sees every pair at hyperbolic distance < D, because
  // the disk-coordinate gap is at most half the hyperbolic distance.
  double D = 0.02;
  for (;;) {
    const double cell = 0.5 * D;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto cx = static_cast<std::int64_t>(std::floor(w[i][0] / cell));
      const auto cy = static_cast<std::int64_t>(std::floor(w[i][1] / cell));
      for (std::int64_t dx = -1; dx <= 1; ++dx)
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          std::uint64_t h = 0xcbf29ce484222325ULL;
          h = combine(h, static_cast<std::uint64_t>(cx + dx));
          h = combine(h, static_cast<std::uint64_t>(cy + dy));
          const auto it = grid.find(h);
          if (it == grid.end()) continue;
          for (std::size_t j : it->second)
            best = std::min(best, hyperbolic_distance(pts[i], pts[j]));
        }
      std::uint64_t h = 0xcbf29ce484222325ULL;
      h = combine(h, static_cast<std::uint64_t>(cx));
      h = combine(h, static_cast<std::uint64_t>(cy));
      grid[h].push_back(i);
    }
    if (best < D) return best;  // certified: any closer pair was visible
    D *= 8.0;
    if (D > 1e6) return best;
  }
}

AxiomReport verify_crossing_axioms(const Arrangement& A, const Tolerances& tol) {
  AxiomReport rep;

  std::unordered_map<std::uint64_t, int> pair_count;
  for (int v : A.interior_vertices()) {
    const auto& vert = A.vertices()[static_cast<std::size_t>(v)];
    const std::uint64_t key =
        (static_cast<std::uint64_t>(vert.line_a) << 32) | static_cast<std::uint32_t>(vert.line_b);
    rep.max_pair_intersections = std::max(rep.max_pair_intersections, ++pair_count[key]);
  }
  rep.pair_intersections_ok = rep.max_pair_intersections <= 1;

  rep.min_vertex_separation = min_vertex_separation(A);
  rep.separation_ok = rep.min_vertex_separation > tol.point;
  if (!rep.separation_ok)
    rep.violations.push_back("two crossing points within " + std::to_string(tol.point));

  for (int v : A.interior_vertices()) {
    const int deg = A.face_degree(v);
    if (deg != 4) {
      rep.vertex_degree_ok = false;
      rep.violations.push_back("vertex " + std::to_string(v) + " meets " + std::to_string(deg) +
                               " faces");
    }
  }

  rep.euler_v = static_cast<long>(A.vertices().size());
  rep.euler_e = static_cast<long>(A.half_edges().size() / 2);
  rep.euler_f = static_cast<long>(A.faces().size());
  rep.euler_ok = rep.euler_v - rep.euler_e + rep.euler_f == 2;
  if (!rep.euler_ok)
    rep.violations.push_back("Euler relation violated: V=" + std::to_string(rep.euler_v) +
                             " E=" + std::to_string(rep.euler_e) +
                             " F=" + std::to_string(rep.euler_f));
  return rep;
}

std::map<int, int> tile_census(const Arrangement& A) {
  if (A.complete_tiles().empty())
    throw Error(ErrorCode::NoCompleteTiles,
                "no complete tile inside the trusted sub-disk; enlarge the region radius");
  std::map<int, int> census;
  for (int f : A.complete_tiles()) ++census[A.faces()[static_cast<std::size_t>(f)].side_count];
  return census;
}

AdjacencyReport adjacency_observations(const Arrangement& A, const RoleAssignment& roles) {
  AdjacencyReport rep;
  const auto side = [&](int f) { return A.faces()[static_cast<std::size_t>(f)].side_count; };
  const auto complete = [&](int f) { return A.faces()[static_cast<std::size_t>(f)].complete; };

  for (const auto& e : A.edge_neighbors()) {
    if (!complete(e.face_a) || !complete(e.face_b)) continue;
    const int sa = side(e.face_a), sb = side(e.face_b);
    if (roles.case_label == 1) {
      if (sa == 4 && sb == 4) {
        rep.obs2_ok = false;
        rep.violations.push_back("two 4-gons (faces " + std::to_string(e.face_a) + "," +
                                 std::to_string(e.face_b) + ") share an edge");
      }
      for (int round = 0; round < 2; ++round) {
        const int tri = round == 0 ? sa : sb;
        const int other = round == 0 ? sb : sa;
        if (tri != 3) continue;
        if (other != 2 * roles.r || 2 * roles.r < 6) {
          rep.obs3_ok = false;
          rep.violations.push_back("triangle neighbor has " + std::to_string(other) +
                                   " sides (faces " + std::to_string(e.face_a) + "," +
                                   std::to_string(e.face_b) + ")");
        }
      }
    } else if (roles.case_label == 3) {
      const bool ok = (sa == 3 && sb == roles.q) || (sb == 3 && sa == roles.q);
      if (!ok) {
        rep.case3_edge_rule_ok = false;
        rep.violations.push_back("edge separates " + std::to_string(sa) + "-gon from " +
                                 std::to_string(sb) + "-gon (faces " + std::to_string(e.face_a) +
                                 "," + std::to_string(e.face_b) + ")");
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Intersection graph and plane properties

bool IntersectionGraph::has_edge(int a, int b) const {
  const auto& v = adj[static_cast<std::size_t>(a)];
  return std::binary_search(v.begin(), v.end(), b);
}

IntersectionGraph intersection_graph(const LineFamily& family, const Tolerances& tol) {
  IntersectionGraph g;
  g.n = family.lines.size();
  g.adj.assign(g.n, {});
  // Each row scans its upper triangle independently; the ordered merge below
  // keeps neighbor lists sorted and the edge order canonical.
  std::vector<std::vector<int>> later(g.n);
  parallel_for(g.n, [&](std::size_t i) {
    for (int j = static_cast<int>(i) + 1; j < static_cast<int>(g.n); ++j)
      if (geodesics_interleave(family.lines[i], family.lines[static_cast<std::size_t>(j)],
                               tol.point))
        later[i].push_back(j);
  });
  for (int i = 0; i < static_cast<int>(g.n); ++i)
    for (int j : later[static_cast<std::size_t>(i)]) {
      g.adj[static_cast<std::size_t>(i)].push_back(j);
      g.adj[static_cast<std::size_t>(j)].push_back(i);
      g.edges.emplace_back(i, j);
    }
  return g;
}

namespace {

bool clique_dfs(const IntersectionGraph& g, std::vector<int>& clique, std::vector<int>& cands,
                std::size_t k) {
  if (clique.size() == k) return true;
  if (clique.size() + cands.size() < k) return false;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const int v = cands[i];
    std::vector<int> next;
    for (std::size_t j = i + 1; j < cands.size(); ++j)
      if (g.has_edge(v, cands[j])) next.push_back(cands[j]);
    clique.push_back(v);
    if (clique_dfs(g, clique, next, k)) return true;
    clique.pop_back();
  }
  return false;
}

}  // namespace

PlaneCheck check_k_plane(const IntersectionGraph& g, int k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "plane property needs k >= 2");
  PlaneCheck res;
  std::vector<int> clique;
  std::vector<int> cands(g.n);
  for (std::size_t i = 0; i < g.n; ++i) cands[i] = static_cast<int>(i);
  if (clique_dfs(g, clique, cands, static_cast<std::size_t>(k))) {
    res.pass = false;
    res.witness = clique;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Seed tile and local checks

namespace {

std::vector<std::pair<long long, long long>> face_key(const Arrangement& A, int f) {
  std::vector<std::pair<long long, long long>> key;
  for (int he : A.faces()[static_cast<std::size_t>(f)].walk) {
    const auto& p =
        A.vertices()[static_cast<std::size_t>(A.half_edges()[static_cast<std::size_t>(he)].origin)]
            .p;
    key.emplace_back(std::llround(p.u * 1e9), std::llround(p.v * 1e9));
  }
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

int seed_tile(const Arrangement& A) {
  if (A.complete_tiles().empty())
    throw Error(ErrorCode::NoCompleteTiles, "no complete tile to seed from");
  int best = -1;
  std::vector<std::pair<long long, long long>> best_key;
  for (int f : A.complete_tiles()) {
    if (best < 0) {
      best = f;
      best_key = face_key(A, f);
      continue;
    }
    const double df = A.faces()[static_cast<std::size_t>(f)].min_vertex_dist;
    const double db = A.faces()[static_cast<std::size_t>(best)].min_vertex_dist;
    if (df < db - 1e-12) {
      best = f;
      best_key = face_key(A, f);
    } else if (df <= db + 1e-12) {
      auto key = face_key(A, f);
      if (key < best_key) {
        best = f;
        best_key = std::move(key);
      }
    }
  }
  return best;
}

LocalChecks local_degree_and_clique_checks(const Arrangement& A, const IntersectionGraph& g,
                                           const Tolerances& tol) {
  LocalChecks rep;
  rep.seed = seed_tile(A);
  const auto& seed_lines = A.faces()[static_cast<std::size_t>(rep.seed)].lines;
  for (int a : seed_lines) {
    int deg = 0;
    for (int b : seed_lines)
      if (a != b && g.has_edge(a, b)) ++deg;
    rep.max_seed_degree = std::max(rep.max_seed_degree, deg);
    if (deg > 4) {
      rep.seed_degree_ok = false;
      rep.violations.push_back("seed line " + std::to_string(a) + " crosses " +
                               std::to_string(deg) + " seed-tile lines");
    }
  }

  // Complete triangle tiles, keyed by their line triple.
  std::map<std::array<int, 3>, int> triangles;
  for (int f : A.complete_tiles()) {
    const auto& face = A.faces()[static_cast<std::size_t>(f)];
    if (face.side_count == 3 && face.lines.size() == 3)
      triangles[{face.lines[0], face.lines[1], face.lines[2]}] = f;
  }

  const double trusted = A.trusted_radius();
  for (const auto& [a, b] : g.edges) {
    const auto& na = g.adj[static_cast<std::size_t>(a)];
    for (int c : na) {
      if (c <= b || !g.has_edge(b, c)) continue;
      const auto pab = geodesics_intersect(A.family().lines[static_cast<std::size_t>(a)],
                                           A.family().lines[static_cast<std::size_t>(b)], tol);
      const auto pac = geodesics_intersect(A.family().lines[static_cast<std::size_t>(a)],
                                           A.family().lines[static_cast<std::size_t>(c)], tol);
      const auto pbc = geodesics_intersect(A.family().lines[static_cast<std::size_t>(b)],
                                           A.family().lines[static_cast<std::size_t>(c)], tol);
      if (!pab || !pac || !pbc) continue;
      const Point ctr = A.center();
      if (hyperbolic_distance(ctr, *pab) > trusted || hyperbolic_distance(ctr, *pac) > trusted ||
          hyperbolic_distance(ctr, *pbc) > trusted)
        continue;
      ++rep.cliques_in_disk;
      if (triangles.count({a, b, c})) {
        ++rep.cliques_matched;
      } else {
        rep.cliques_bound_triangles = false;
        rep.violations.push_back("3-clique " + std::to_string(a) + "," + std::to_string(b) + "," +
                                 std::to_string(c) +
                                 " inside the trusted sub-disk bounds no triangle tile");
      }
    }
  }
  return rep;
}

}  // namespace stiler
