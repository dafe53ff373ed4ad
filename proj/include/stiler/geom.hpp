#pragma once

// Hyperbolic plane geometry in the upper half-plane model.
//
//   H = { (u,v) : v > 0 },   ds^2 = (du^2 + dv^2) / v^2
//
// Geodesics are vertical Euclidean lines and Euclidean semicircles centered
// on the real axis; both are encoded by their unordered pair of ideal
// endpoints.  Orientation-preserving isometries are real 2x2 matrices of
// determinant one acting as z -> (az+b)/(cz+d); a matrix and its negation
// act identically, so every matrix is kept in a canonical sign.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace stiler {

struct Tolerances {
  double matrix = 1e-9;  // sign-identified matrix coincidence, L-inf on entries
  double trace = 1e-9;   // margin of the elliptic/parabolic/hyperbolic trichotomy
  double point = 1e-7;   // point and ideal-endpoint coincidence (chordal on the boundary)
};

enum class ErrorCode {
  InvalidArgument,
  InvalidIndex,
  WordSyntax,
  NonHyperbolicElement,
  IdenticalGeodesics,
  PointNotOnBoth,
  NonHyperbolicSignature,
  UncoveredSignature,
  OrderExceedsCap,
  BallTooLarge,
  NoWitnessFound,
  TriplePointDetected,
  NonConvexUnfixable,
  NoCompleteTiles,
  NotADisk,
  ConsistencyFailure,
  Io,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Points

struct Point {
  double u = 0.0;
  double v = 1.0;  // invariant: v > 0
};

inline std::complex<double> to_complex(Point p) { return {p.u, p.v}; }

// cosh of the hyperbolic distance; cheap monotone proxy for comparisons.
inline double cosh_distance(Point a, Point b) {
  const double du = a.u - b.u, dv = a.v - b.v;
  return 1.0 + (du * du + dv * dv) / (2.0 * a.v * b.v);
}

// d(a,b) = 2 asinh(|a-b| / (2 sqrt(v_a v_b))); stable for nearby points.
double hyperbolic_distance(Point a, Point b);

// ---------------------------------------------------------------------------
// Ideal boundary

struct BoundaryPoint {
  double value = 0.0;
  bool infinite = false;

  static BoundaryPoint inf() { return {0.0, true}; }
  static BoundaryPoint at(double x) { return {x, false}; }
};

// Chordal metric: distance of the images under the Cayley map x -> (x-i)/(x+i),
// which sends the extended real line onto the unit circle (infinity -> 1).
double chordal(BoundaryPoint a, BoundaryPoint b);

// Image of a boundary point on the unit circle (disk model boundary).
std::array<double, 2> cayley_boundary(BoundaryPoint a);

// Image of an interior point in the unit disk.
std::array<double, 2> cayley_to_disk(Point p);

// ---------------------------------------------------------------------------
// Geodesics

// Unordered pair of distinct ideal endpoints, stored canonically:
// finite endpoints sorted ascending, infinity (if present) always second.
struct Geodesic {
  BoundaryPoint e1, e2;

  Geodesic() : e1{0.0, false}, e2{0.0, true} {}
  Geodesic(BoundaryPoint a, BoundaryPoint b, const Tolerances& tol = {});

  bool vertical() const { return e2.infinite; }
  // Euclidean center/radius, valid only for semicircles.
  double m() const { return 0.5 * (e1.value + e2.value); }
  double rho() const { return 0.5 * (e2.value - e1.value); }
  // Real coordinate of a vertical line.
  double x() const { return e1.value; }
};

// The unique geodesic through two distinct interior points.
Geodesic geodesic_through(Point a, Point b, const Tolerances& tol = {});

bool same_geodesic(const Geodesic& a, const Geodesic& b, double point_tol = 1e-7);
// True when the two lines share (within tol) at least one ideal endpoint but
// are not the same line: they are asymptotic and any crossing test is degenerate.
bool share_endpoint(const Geodesic& a, const Geodesic& b, double point_tol = 1e-7);

// ---------------------------------------------------------------------------
// Isometries

struct Isometry {
  // Row-major a b / c d; invariants: det = 1 (within 1e-12), canonical sign
  // (first entry of magnitude > 1e-12 is positive).
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

  static Isometry identity() { return {}; }
  static Isometry from(double a, double b, double c, double d);

  double a() const { return m[0]; }
  double b() const { return m[1]; }
  double c() const { return m[2]; }
  double d() const { return m[3]; }
  double trace() const { return m[0] + m[3]; }
  double det() const { return m[0] * m[3] - m[1] * m[2]; }

  Isometry inverse() const;
  Point apply(Point p) const;
  BoundaryPoint apply(BoundaryPoint x) const;
  Geodesic apply(const Geodesic& g, const Tolerances& tol = {}) const;

  void canonicalize();
};

Isometry operator*(const Isometry& g, const Isometry& h);

// L-inf distance between sign-identified matrices: min(|g-h|, |g+h|).
double matrix_distance(const Isometry& g, const Isometry& h);

inline bool approx_identity(const Isometry& g, double tol = 1e-9) {
  return matrix_distance(g, Isometry::identity()) <= tol;
}

// ---------------------------------------------------------------------------
// Classification

enum class IsometryKind { Identity, Elliptic, Parabolic, Hyperbolic };

const char* kind_name(IsometryKind k);

struct IsometryClass {
  IsometryKind kind = IsometryKind::Identity;
  double angle = 0.0;               // elliptic: clockwise rotation angle in (0, 2pi)
  double translation_length = 0.0;  // hyperbolic: 2 arccosh(|tr|/2)
};

// Trichotomy on |trace| with margin tol.trace; the elliptic angle is the
// clockwise rotation angle recovered from the derivative at the fixed point,
// which equals 2 arccos(|tr|/2) or 2pi minus it depending on orientation.
IsometryClass classify_isometry(const Isometry& g, const Tolerances& tol = {});

// Fixed point in H of an elliptic element.
Point elliptic_fixed_point(const Isometry& g, const Tolerances& tol = {});

// Translation axis of a hyperbolic element (the geodesic joining its two
// real fixed points).  Throws NonHyperbolicElement otherwise.
Geodesic axis_of(const Isometry& g, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Constructions and predicates

// Elliptic isometry fixing `center` and rotating the tangent space clockwise
// by theta; requires 0 < theta < 2pi.  Clockwise is the project-wide
// orientation convention for rotations.
Isometry rotation_about(Point center, double theta);

// True iff the endpoint pairs interleave on the ideal boundary circle;
// equivalent to the geodesics crossing in exactly one interior point.
bool geodesics_interleave(const Geodesic& a, const Geodesic& b, double point_tol = 1e-7);

// The crossing point if the geodesics meet, std::nullopt if disjoint or
// asymptotic; throws IdenticalGeodesics when both endpoints coincide.
std::optional<Point> geodesics_intersect(const Geodesic& a, const Geodesic& b,
                                         const Tolerances& tol = {});

// Shortest distance from p to the geodesic: map the line to the imaginary
// axis and use sinh d = |u|/v.
double distance_point_to_geodesic(Point p, const Geodesic& g);

// Unoriented crossing angle in (0, pi/2] at a common point p of two
// geodesics; the four corner angles at p are {theta, pi-theta} twice.
// Throws PointNotOnBoth when p is not on both lines (within 1e-6).
double angle_between_at(const Geodesic& a, const Geodesic& b, Point p, const Tolerances& tol = {});

// Euclidean tangent direction of g at a point p on g; `increasing` selects
// the direction of the canonical parameter (v for vertical lines, the
// central angle for semicircles).
std::array<double, 2> tangent_at(const Geodesic& g, Point p, bool increasing);

// Euclidean circle {(u - cu)^2 + (v - cv)^2 = r^2} realizing a hyperbolic
// circle of given center and radius.
struct EuclideanCircle {
  double cu, cv, r;
};
EuclideanCircle hyperbolic_circle(Point center, double radius);

}  // namespace stiler
