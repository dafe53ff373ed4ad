#pragma once

// Triangle rotation groups: generator construction, words, element order,
// ball enumeration, the distinguished infinite-order word and its axis.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stiler/geom.hpp"

namespace stiler {

enum class GeometryType { Hyperbolic, Euclidean, Spherical };

const char* geometry_name(GeometryType g);

struct Signature {
  int p = 2, q = 2, r = 2;
  GeometryType geometry = GeometryType::Spherical;
};

// Exact rational comparison of 1/p + 1/q + 1/r against 1.
Signature classify_signature(int p, int q, int r);

// The construction needs each index in a definite role: x is the rotation
// whose cone appears in the distinguished word, z is the rotation the word
// walks around.  Inputs with an index 2 are permuted so that 2 lands on the
// z role (and a 4 or 3 partner on the x role); all-ge-3 inputs keep their
// given order.
struct RoleAssignment {
  std::array<int, 3> input;        // indices as supplied
  std::array<int, 3> permutation;  // role i reads input[permutation[i]]
  int p = 0, q = 0, r = 0;         // role values
  int case_label = 0;              // 1, 2, or 3
  int word_exponent = 1;           // 1 -> x y^-1, 2 -> x y^-2
  bool triangles_expected = false;
  int color_bound = 5;  // 5 without triangle tiles, 7 with

  Signature role_signature() const;
};

// Throws NonHyperbolicSignature for spherical/Euclidean input and
// UncoveredSignature for a hyperbolic multiset outside the covered list
// (exhaustion over integer indices leaves that path unreachable; it is kept
// as a guard).
RoleAssignment role_normalize(const Signature& sig);

// Side counts that can occur among complete tiles: case 1 -> {p, q, 2r}
// (subset relation), cases 2 and 3 -> exactly {q} and {3, q}.
std::vector<int> expected_census(const RoleAssignment& roles);

// ---------------------------------------------------------------------------
// Group construction

struct TriangleGroup {
  Signature sig;  // hyperbolic, indices as built
  Point X, Y, Z;
  Isometry x, y, z;     // clockwise rotations by 2pi/p, 2pi/q, 2pi/r; xyz = 1
  double xy_distance;   // d(X, Y) from the law of cosines
};

// X at the basepoint i, Y above it on the imaginary axis, z := (xy)^-1 so
// the product relation is exact; Z is recovered as the fixed point of z and
// cross-checked against the angle 2pi/r.
TriangleGroup build_generators(const Signature& sig);

// ---------------------------------------------------------------------------
// Words

// Letters: 0 x, 1 x^-1, 2 y, 3 y^-1, 4 z, 5 z^-1; inverse = code xor 1.
struct Word {
  std::vector<int8_t> letters;  // freely reduced

  static Word from_letters(std::initializer_list<int> ls);
  // Whitespace-separated tokens `x`, `y^-2`, `z^3`; exponent 0 rejected;
  // errors carry the byte offset of the offending token.
  static Word parse(const std::string& text);

  std::string str() const;  // compressed form, e.g. "x y^-2"
  Word operator*(const Word& rhs) const;
  Word inverse() const;
  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }

  bool operator==(const Word& rhs) const { return letters == rhs.letters; }
};

Isometry evaluate_word(const TriangleGroup& G, const Word& w);

// nullopt encodes infinite order (hyperbolic or parabolic class).
// cap must be at least 2*p*q*r; elliptic elements exceeding it raise
// OrderExceedsCap, which signals a tolerance failure in a discrete group.
std::optional<long> element_order(const TriangleGroup& G, const Isometry& g, long cap);

long default_order_cap(const Signature& sig);  // 4*p*q*r

// ---------------------------------------------------------------------------
// Ball enumeration

// Breadth-first enumeration of distinct (sign-identified) elements reachable
// by freely reduced words of bounded length.  Deterministic: letters are
// tried in code order, so each element's witness is its shortest word and
// lexicographically least among those.
class GroupBall {
 public:
  struct Entry {
    Isometry g;
    Word w;
    int length;
  };

  explicit GroupBall(const TriangleGroup& G, std::size_t cap = 200000,
                     const Tolerances& tol = {});

  int radius() const { return radius_; }
  const std::vector<Entry>& elements() const { return elements_; }
  // Elements of word length exactly n occupy [layer_begin(n), layer_begin(n+1)).
  std::size_t layer_begin(int n) const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Extends the ball to radius N; throws BallTooLarge past the element cap.
  void grow_to(int N);
  // Adds one layer; returns the number of new elements.
  std::size_t grow_one_layer();

 private:
  struct GridKey {
    std::uint64_t k;
    bool operator==(const GridKey& o) const { return k == o.k; }
  };
  struct GridHash {
    std::size_t operator()(const GridKey& key) const { return key.k; }
  };

  std::optional<std::size_t> find(const Isometry& g) const;
  void insert_index(std::size_t idx);

  std::array<Isometry, 6> gen_;
  std::size_t cap_;
  Tolerances tol_;
  int radius_ = 0;
  std::vector<Entry> elements_;
  std::vector<std::size_t> layer_starts_;  // layer_starts_[n] = first index of length n
  std::unordered_map<GridKey, std::vector<std::uint32_t>, GridHash> grid_;
  mutable std::vector<std::string> warnings_;
};

// ---------------------------------------------------------------------------
// The distinguished word and its axis

Word scott_word(const Signature& sig);  // x y^-1, or x y^-2 in case 3

// Trace of the distinguished element predicted from the rotation half-angles
// and d(X,Y) alone (no matrix products): 2 cos(a) cos(kb) + 2 sin(a) sin(kb) cosh c
// with a = pi/p, b = pi/q, k the word exponent.
double scott_trace_identity(const RoleAssignment& roles);

// Axis of the distinguished element in the role-normalized group; a
// non-hyperbolic outcome contradicts the trace bound and is fatal.
Geodesic scott_axis(const TriangleGroup& G, const Word& w);

// ---------------------------------------------------------------------------
// Witness search

// Candidate order: for u in (a, b, ab): u, then for v in (a, b, ab):
// u v, u v^-1, u v^2, u v^-2.  First hyperbolic candidate wins.
Word lemma25_search(const TriangleGroup& G, const Word& a, const Word& b, long cap);

// ---------------------------------------------------------------------------
// Orbits and incidence

// Distinct images of `base` under the group, restricted to hyperbolic
// distance <= R from `center`; breadth-first over letter application with
// an expansion band past R, so the set is exhaustive.  Deterministic order.
std::vector<Point> orbit_points(const TriangleGroup& G, Point base, Point center, double R);

enum class IncidenceStatus { Incident, Separated, Ambiguous };

const char* incidence_name(IncidenceStatus s);

struct OrbitIncidence {
  IncidenceStatus status = IncidenceStatus::Separated;
  double min_distance = 0.0;
  std::size_t orbit_size = 0;
};

struct ConeIncidenceReport {
  OrbitIncidence X, Y, Z;
};

// Minimum line-to-orbit distance per cone-point orbit over the disk of
// radius R about `center`; incident below tol.point, separated above
// delta_sep, ambiguous between (never silently resolved).
ConeIncidenceReport cone_point_incidence(const TriangleGroup& G,
                                         const std::vector<Geodesic>& lines, Point center,
                                         double R, const Tolerances& tol = {},
                                         double delta_sep = 1e-3);

}  // namespace stiler
