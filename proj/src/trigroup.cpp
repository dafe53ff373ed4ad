#include "stiler/trigroup.hpp"

#include "stiler/threads.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <set>
#include <sstream>

namespace stiler {

const char* geometry_name(GeometryType g) {
  switch (g) {
    case GeometryType::Hyperbolic: return "hyperbolic";
    case GeometryType::Euclidean: return "euclidean";
    case GeometryType::Spherical: return "spherical";
  }
  return "unknown";
}

const char* incidence_name(IncidenceStatus s) {
  switch (s) {
    case IncidenceStatus::Incident: return "incident";
    case IncidenceStatus::Separated: return "separated";
    case IncidenceStatus::Ambiguous: return "ambiguous";
  }
  return "unknown";
}

Signature classify_signature(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2)
    throw Error(ErrorCode::InvalidIndex, "cone indices must be integers >= 2");
  Signature sig;
  sig.p = p;
  sig.q = q;
  sig.r = r;
  // 1/p + 1/q + 1/r versus 1, cleared of denominators.
  const long long lhs = static_cast<long long>(q) * r + static_cast<long long>(p) * r +
                        static_cast<long long>(p) * q;
  const long long rhs = static_cast<long long>(p) * q * r;
  if (lhs < rhs)
    sig.geometry = GeometryType::Hyperbolic;
  else if (lhs == rhs)
    sig.geometry = GeometryType::Euclidean;
  else
    sig.geometry = GeometryType::Spherical;
  return sig;
}

Signature RoleAssignment::role_signature() const { return classify_signature(p, q, r); }

RoleAssignment role_normalize(const Signature& sig) {
  if (sig.geometry != GeometryType::Hyperbolic)
    throw Error(ErrorCode::NonHyperbolicSignature,
                "signature (" + std::to_string(sig.p) + "," + std::to_string(sig.q) + "," +
                    std::to_string(sig.r) + ") is " + geometry_name(sig.geometry) +
                    "; the pipeline handles hyperbolic signatures only");

  RoleAssignment roles;
  roles.input = {sig.p, sig.q, sig.r};

  std::array<int, 3> sorted = roles.input;
  std::sort(sorted.begin(), sorted.end());
  const int low = sorted[0], mid = sorted[1];

  auto first_index_of = [&](int value, int skip = -1) {
    for (int i = 0; i < 3; ++i)
      if (i != skip && roles.input[i] == value) return i;
    return -1;
  };

  if (low >= 3) {
    // No 2-cone: any role order works, keep the input order.
    roles.permutation = {0, 1, 2};
    roles.case_label = 1;
    roles.word_exponent = 1;
  } else if (mid == 3) {
    // {3, q, 2}, hyperbolic forces q >= 7.
    const int pi = first_index_of(3);
    const int ri = first_index_of(2, pi);
    roles.permutation = {pi, 3 - pi - ri, ri};
    roles.case_label = 3;
    roles.word_exponent = 2;
  } else if (mid == 4) {
    // {4, q, 2}, hyperbolic forces q >= 5.
    const int pi = first_index_of(4);
    const int ri = first_index_of(2, pi);
    roles.permutation = {pi, 3 - pi - ri, ri};
    roles.case_label = 2;
    roles.word_exponent = 1;
  } else if (mid >= 5) {
    // {p, q, 2} with p, q >= 5: the 2 takes the z role, larger index first.
    const int ri = first_index_of(2);
    int a = -1, b = -1;
    for (int i = 0; i < 3; ++i) {
      if (i == ri) continue;
      (a < 0 ? a : b) = i;
    }
    if (roles.input[b] > roles.input[a]) std::swap(a, b);
    roles.permutation = {a, b, ri};
    roles.case_label = 1;
    roles.word_exponent = 1;
  } else {
    // mid == 2 means two cone angles pi, which is never hyperbolic, and
    // hyperbolic {3,q,2}/{4,q,2}/{p,q,2} are all covered above.
    throw Error(ErrorCode::UncoveredSignature,
                "hyperbolic signature outside the covered list (unexpected)");
  }

  roles.p = roles.input[roles.permutation[0]];
  roles.q = roles.input[roles.permutation[1]];
  roles.r = roles.input[roles.permutation[2]];
  roles.triangles_expected =
      roles.case_label == 3 || (roles.case_label == 1 && (roles.p == 3 || roles.q == 3));
  roles.color_bound = roles.triangles_expected ? 7 : 5;
  return roles;
}

std::vector<int> expected_census(const RoleAssignment& roles) {
  std::set<int> sides;
  if (roles.case_label == 2) {
    sides.insert(roles.q);
  } else if (roles.case_label == 3) {
    sides.insert(3);
    sides.insert(roles.q);
  } else {
    sides.insert(roles.p);
    sides.insert(roles.q);
    sides.insert(2 * roles.r);
  }
  return {sides.begin(), sides.end()};
}

// ---------------------------------------------------------------------------
// Group construction

TriangleGroup build_generators(const Signature& sig) {
  if (sig.geometry != GeometryType::Hyperbolic)
    throw Error(ErrorCode::NonHyperbolicSignature,
                "generator construction requires a hyperbolic signature");
  const double a = M_PI / sig.p, b = M_PI / sig.q, g = M_PI / sig.r;
  const double cosh_c = (std::cos(a) * std::cos(b) + std::cos(g)) / (std::sin(a) * std::sin(b));
  if (!(cosh_c > 1.0))
    throw Error(ErrorCode::NonHyperbolicSignature, "vertex distance degenerates");
  const double c = std::acosh(cosh_c);

  TriangleGroup G;
  G.sig = sig;
  G.xy_distance = c;
  G.X = {0.0, 1.0};
  G.Y = {0.0, std::exp(c)};
  G.x = rotation_about(G.X, 2.0 * M_PI / sig.p);
  G.y = rotation_about(G.Y, 2.0 * M_PI / sig.q);
  G.z = (G.x * G.y).inverse();  // xyz = 1 exactly

  const auto cls = classify_isometry(G.z);
  const double want = 2.0 * M_PI / sig.r;
  if (cls.kind != IsometryKind::Elliptic || std::abs(cls.angle - want) > 1e-8)
    throw Error(ErrorCode::ConsistencyFailure,
                "third rotation angle mismatch in generator construction");
  G.Z = elliptic_fixed_point(G.z);
  return G;
}

// ---------------------------------------------------------------------------
// Words

namespace {

void push_reduced(std::vector<int8_t>& out, int8_t letter) {
  if (!out.empty() && (out.back() ^ 1) == letter)
    out.pop_back();
  else
    out.push_back(letter);
}

constexpr std::size_t kMaxExponent = 4096;  // keeps hostile inputs bounded

}  // namespace

Word Word::from_letters(std::initializer_list<int> ls) {
  Word w;
  for (int l : ls) push_reduced(w.letters, static_cast<int8_t>(l));
  return w;
}

Word Word::parse(const std::string& text) {
  Word w;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t tok = i;
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::WordSyntax,
                  why + " at offset " + std::to_string(tok));
    };
    const char gch = text[i++];
    int gen;
    switch (gch) {
      case 'x': gen = 0; break;
      case 'y': gen = 1; break;
      case 'z': gen = 2; break;
      default: fail(std::string("expected generator x, y, or z, got '") + gch + "'"); gen = 0;
    }
    long exp = 1;
    if (i < n && text[i] == '^') {
      ++i;
      bool neg = false;
      if (i < n && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
      if (i >= n || !std::isdigit(static_cast<unsigned char>(text[i])))
        fail("expected an integer exponent after '^'");
      long mag = 0;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
        mag = mag * 10 + (text[i++] - '0');
        if (mag > static_cast<long>(kMaxExponent)) fail("exponent too large");
      }
      if (mag == 0) fail("exponent 0 is not allowed");
      exp = neg ? -mag : mag;
    }
    if (i < n && !std::isspace(static_cast<unsigned char>(text[i])))
      fail("unexpected character in token");
    const int8_t letter = static_cast<int8_t>(gen * 2 + (exp < 0 ? 1 : 0));
    for (long k = 0; k < std::labs(exp); ++k) push_reduced(w.letters, letter);
  }
  return w;
}

std::string Word::str() const {
  std::ostringstream out;
  std::size_t i = 0;
  bool first = true;
  while (i < letters.size()) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    const long run = static_cast<long>(j - i);
    const long exp = (letters[i] & 1) ? -run : run;
    if (!first) out << ' ';
    out << "xyz"[letters[i] / 2];
    if (exp != 1) out << '^' << exp;
    first = false;
    i = j;
  }
  return out.str();
}

Word Word::operator*(const Word& rhs) const {
  Word w;
  w.letters = letters;
  for (int8_t l : rhs.letters) push_reduced(w.letters, l);
  return w;
}

Word Word::inverse() const {
  Word w;
  w.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it)
    w.letters.push_back(static_cast<int8_t>(*it ^ 1));
  return w;
}

Isometry evaluate_word(const TriangleGroup& G, const Word& w) {
  const std::array<Isometry, 6> gen = {G.x, G.x.inverse(), G.y, G.y.inverse(),
                                       G.z, G.z.inverse()};
  Isometry out = Isometry::identity();
  for (int8_t l : w.letters) out = out * gen[l];
  return out;
}

long default_order_cap(const Signature& sig) {
  return 4L * sig.p * sig.q * sig.r;
}

std::optional<long> element_order(const TriangleGroup& G, const Isometry& g, long cap) {
  if (cap < 2L * G.sig.p * G.sig.q * G.sig.r)
    throw Error(ErrorCode::InvalidArgument, "order cap below 2pqr");
  const Tolerances tol;
  const auto cls = classify_isometry(g, tol);
  if (cls.kind == IsometryKind::Identity) return 1;
  if (cls.kind != IsometryKind::Elliptic) return std::nullopt;
  Isometry h = g;
  for (long n = 1; n <= cap; ++n) {
    if (approx_identity(h, tol.matrix)) return n;
    h = h * g;
  }
  throw Error(ErrorCode::OrderExceedsCap,
              "elliptic element has no order within the cap (tolerance failure)");
}

// ---------------------------------------------------------------------------
// Ball enumeration

namespace {

constexpr double kGridCell = 1e-5;
constexpr double kProbeEps = 1e-8;  // covers the merge and warning radii

std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t key_of(const std::array<double, 4>& m, double shift) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double e : m)
    h = combine(h, static_cast<std::uint64_t>(
                       static_cast<std::int64_t>(std::floor((e + shift) / kGridCell))));
  return h;
}

}  // namespace

GroupBall::GroupBall(const TriangleGroup& G, std::size_t cap, const Tolerances& tol)
    : gen_{G.x, G.x.inverse(), G.y, G.y.inverse(), G.z, G.z.inverse()},
      cap_(cap),
      tol_(tol) {
  elements_.push_back({Isometry::identity(), Word{}, 0});
  layer_starts_ = {0, 1};
  insert_index(0);
}

std::size_t GroupBall::layer_begin(int n) const {
  if (n < 0 || n > radius_ + 1)
    throw Error(ErrorCode::InvalidIndex, "layer index outside the built radius");
  return layer_starts_[static_cast<std::size_t>(n)];
}

std::optional<std::size_t> GroupBall::find(const Isometry& g) const {
  // Probe the 16 cell-corner keys of g and of -g; canonical sign flips when
  // the leading entry sits near zero, so both forms must be checked.
  double best = 1e300;
  std::size_t best_idx = 0;
  bool found = false;
  for (int sign = 0; sign < 2; ++sign) {
    std::array<double, 4> m = g.m;
    if (sign) for (double& e : m) e = -e;
    for (int mask = 0; mask < 16; ++mask) {
      std::array<double, 4> probe = m;
      for (int i = 0; i < 4; ++i) probe[i] += (mask >> i & 1) ? kProbeEps : -kProbeEps;
      const auto it = grid_.find(GridKey{key_of(probe, 0.0)});
      if (it == grid_.end()) continue;
      for (std::uint32_t idx : it->second) {
        const double d = matrix_distance(elements_[idx].g, g);
        if (d < best) {
          best = d;
          best_idx = idx;
          found = true;
        }
      }
    }
  }
  if (found && best <= 10.0 * tol_.matrix && best > tol_.matrix / 10.0 &&
      warnings_.size() < 50) {
    // Should never fire for a healthy discrete group at these tolerances.
    warnings_.push_back(
        "near-threshold element collision at distance " + std::to_string(best) +
        " (witness '" + elements_[best_idx].w.str() + "')");
  }
  if (found && best <= tol_.matrix) return best_idx;
  return std::nullopt;
}

void GroupBall::insert_index(std::size_t idx) {
  grid_[GridKey{key_of(elements_[idx].g.m, 0.0)}].push_back(
      static_cast<std::uint32_t>(idx));
}

std::size_t GroupBall::grow_one_layer() {
  const std::size_t begin = layer_starts_[static_cast<std::size_t>(radius_)];
  const std::size_t end = elements_.size();
  for (std::size_t i = begin; i < end; ++i) {
    const Entry parent = elements_[i];  // copy: the vector reallocates below
    for (int8_t letter = 0; letter < 6; ++letter) {
      if (!parent.w.letters.empty() && (parent.w.letters.back() ^ 1) == letter) continue;
      Isometry g = parent.g * gen_[letter];
      if (find(g).has_value()) continue;
      if (elements_.size() >= cap_)
        throw Error(ErrorCode::BallTooLarge,
                    "element cap " + std::to_string(cap_) + " exceeded at radius " +
                        std::to_string(radius_ + 1));
      Entry e;
      e.g = g;
      e.w = parent.w;
      e.w.letters.push_back(letter);
      e.length = parent.length + 1;
      elements_.push_back(std::move(e));
      insert_index(elements_.size() - 1);
    }
  }
  ++radius_;
  layer_starts_.push_back(elements_.size());
  return elements_.size() - end;
}

void GroupBall::grow_to(int N) {
  while (radius_ < N) grow_one_layer();
}

// ---------------------------------------------------------------------------
// Distinguished word

Word scott_word(const Signature& sig) {
  const RoleAssignment roles = role_normalize(sig);
  if (roles.word_exponent == 2) return Word::from_letters({0, 3, 3});
  return Word::from_letters({0, 3});
}

double scott_trace_identity(const RoleAssignment& roles) {
  const double a = M_PI / roles.p, b = M_PI / roles.q, g = M_PI / roles.r;
  const double cosh_c = (std::cos(a) * std::cos(b) + std::cos(g)) / (std::sin(a) * std::sin(b));
  const double kb = roles.word_exponent * b;
  return 2.0 * std::cos(a) * std::cos(kb) + 2.0 * std::sin(a) * std::sin(kb) * cosh_c;
}

Geodesic scott_axis(const TriangleGroup& G, const Word& w) {
  const Isometry g = evaluate_word(G, w);
  const auto cls = classify_isometry(g);
  if (cls.kind != IsometryKind::Hyperbolic)
    throw Error(ErrorCode::NonHyperbolicElement,
                "distinguished word '" + w.str() + "' classifies as " + kind_name(cls.kind) +
                    " (contradicts the infinite-order guarantee)");
  return axis_of(g);
}

// ---------------------------------------------------------------------------
// Witness search

Word lemma25_search(const TriangleGroup& G, const Word& a, const Word& b, long cap) {
  // Finite-order inputs are the intended setting; an infinite-order input
  // short-circuits as its own witness via the bare-u candidate.
  const std::array<Word, 3> base = {a, b, a * b};
  for (const Word& u : base) element_order(G, evaluate_word(G, u), cap);

  auto hyperbolic = [&](const Word& w) {
    return classify_isometry(evaluate_word(G, w)).kind == IsometryKind::Hyperbolic;
  };
  for (const Word& u : base) {
    if (hyperbolic(u)) return u;
    for (const Word& v : base) {
      const Word vi = v.inverse();
      for (const Word& cand : {u * v, u * vi, u * v * v, u * vi * vi}) {
        if (hyperbolic(cand)) return cand;
      }
    }
  }
  throw Error(ErrorCode::NoWitnessFound,
              "no hyperbolic candidate of the form u v^{+-1} or u v^{+-2}");
}

// ---------------------------------------------------------------------------
// Orbits and incidence

std::vector<Point> orbit_points(const TriangleGroup& G, Point base, Point center, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "orbit disk radius must be positive");

  // Breadth-first orbit of the point under the six letter isometries,
  // mirroring the line-family construction: expansion keeps a band beyond R
  // wide enough that every parent of an in-disk image stays reachable.
  const std::array<Isometry, 6> gen = {G.x, G.x.inverse(), G.y,
                                       G.y.inverse(), G.z, G.z.inverse()};
  double max_disp = 0.0;
  for (const auto& s : gen)
    max_disp = std::max(max_disp, hyperbolic_distance(center, s.apply(center)));
  const double reach = R + hyperbolic_distance(base, center) + max_disp + 2.0;
  const double cosh_reach = std::cosh(reach), cosh_r = std::cosh(R);

  // Dedup grid in the disk model about `center`, where Euclidean cell size
  // stays commensurate with the point tolerance at any depth.
  const auto disk = [&](Point p) -> std::array<double, 2> {
    const std::complex<double> z(p.u, p.v), c(center.u, center.v), cb(center.u, -center.v);
    const std::complex<double> w = (z - c) / (z - cb);
    return {w.real(), w.imag()};
  };
  constexpr double cell = 1e-5, tolp = 1e-7;
  constexpr std::size_t kOrbitCap = 2000000;
  const auto key = [&](double u, double v) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(u / cell))));
    h = combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(v / cell))));
    return h;
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  std::vector<Point> nodes;  // all images within reach, discovery order
  std::vector<Point> out;    // the in-disk subset, discovery order

  const auto try_add = [&](Point p) {
    if (cosh_distance(center, p) > cosh_reach) return;
    const auto w = disk(p);
    for (int mask = 0; mask < 4; ++mask) {
      const double du = (mask & 1) ? tolp : -tolp;
      const double dv = (mask & 2) ? tolp : -tolp;
      const auto it = grid.find(key(w[0] + du, w[1] + dv));
      if (it == grid.end()) continue;
      for (std::size_t idx : it->second)
        if (hyperbolic_distance(nodes[idx], p) <= tolp) return;
    }
    if (nodes.size() >= kOrbitCap)
      throw Error(ErrorCode::BallTooLarge,
                  "orbit enumeration cap " + std::to_string(kOrbitCap) + " exceeded");
    grid[key(w[0], w[1])].push_back(nodes.size());
    nodes.push_back(p);
    if (cosh_distance(center, p) <= cosh_r) out.push_back(p);
  };

  try_add(base);
  std::size_t begin = 0, end = nodes.size();
  while (begin < end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Point p = nodes[i];  // copy: nodes reallocates
      for (const auto& s : gen) try_add(s.apply(p));
    }
    begin = end;
    end = nodes.size();
  }
  return out;
}

namespace {

OrbitIncidence orbit_incidence(const TriangleGroup& G, Point base, Point center, double R,
                               const std::vector<Geodesic>& lines, const Tolerances& tol,
                               double delta_sep) {
  OrbitIncidence inc;
  const auto pts = orbit_points(G, base, center, R);
  inc.orbit_size = pts.size();
  // The scan minimizes sinh d, which is monotone in d; the asinh happens once.
  std::vector<double> chunk_best(pts.size(), 1e300);
  parallel_for(pts.size(), [&](std::size_t i) {
    const Point p = pts[i];
    double best = 1e300;
    for (const Geodesic& l : lines) {
      double s;
      if (l.vertical()) {
        s = std::abs(p.u - l.x()) / p.v;
      } else {
        const double du = p.u - l.m();
        s = std::abs(du * du + p.v * p.v - l.rho() * l.rho()) / (2.0 * l.rho() * p.v);
      }
      best = std::min(best, s);
    }
    chunk_best[i] = best;
  });
  double best = 1e300;
  for (double s : chunk_best) best = std::min(best, s);
  inc.min_distance = std::asinh(best);
  if (inc.min_distance < tol.point)
    inc.status = IncidenceStatus::Incident;
  else if (inc.min_distance > delta_sep)
    inc.status = IncidenceStatus::Separated;
  else
    inc.status = IncidenceStatus::Ambiguous;
  return inc;
}

}  // namespace

ConeIncidenceReport cone_point_incidence(const TriangleGroup& G,
                                         const std::vector<Geodesic>& lines, Point center,
                                         double R, const Tolerances& tol, double delta_sep) {
  if (lines.empty())
    throw Error(ErrorCode::InvalidArgument, "incidence test needs a nonempty line set");
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "disk radius must be positive");
  ConeIncidenceReport rep;
  rep.X = orbit_incidence(G, G.X, center, R, lines, tol, delta_sep);
  rep.Y = orbit_incidence(G, G.Y, center, R, lines, tol, delta_sep);
  rep.Z = orbit_incidence(G, G.Z, center, R, lines, tol, delta_sep);
  return rep;
}

}  // namespace stiler
