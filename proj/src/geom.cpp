#include "stiler/geom.hpp"

#include <algorithm>
#include <cmath>

namespace stiler {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::WordSyntax: return "WordSyntax";
    case ErrorCode::NonHyperbolicElement: return "NonHyperbolicElement";
    case ErrorCode::IdenticalGeodesics: return "IdenticalGeodesics";
    case ErrorCode::PointNotOnBoth: return "PointNotOnBoth";
    case ErrorCode::NonHyperbolicSignature: return "NonHyperbolicSignature";
    case ErrorCode::UncoveredSignature: return "UncoveredSignature";
    case ErrorCode::OrderExceedsCap: return "OrderExceedsCap";
    case ErrorCode::BallTooLarge: return "BallTooLarge";
    case ErrorCode::NoWitnessFound: return "NoWitnessFound";
    case ErrorCode::TriplePointDetected: return "TriplePointDetected";
    case ErrorCode::NonConvexUnfixable: return "NonConvexUnfixable";
    case ErrorCode::NoCompleteTiles: return "NoCompleteTiles";
    case ErrorCode::NotADisk: return "NotADisk";
    case ErrorCode::ConsistencyFailure: return "ConsistencyFailure";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

const char* kind_name(IsometryKind k) {
  switch (k) {
    case IsometryKind::Identity: return "identity";
    case IsometryKind::Elliptic: return "elliptic";
    case IsometryKind::Parabolic: return "parabolic";
    case IsometryKind::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

double hyperbolic_distance(Point a, Point b) {
  const double chord = std::hypot(a.u - b.u, a.v - b.v);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(a.v * b.v)));
}

double chordal(BoundaryPoint a, BoundaryPoint b) {
  if (a.infinite && b.infinite) return 0.0;
  if (a.infinite) std::swap(a, b);
  if (b.infinite) return 2.0 / std::hypot(1.0, a.value);
  return 2.0 * std::abs(a.value - b.value) /
         (std::hypot(1.0, a.value) * std::hypot(1.0, b.value));
}

std::array<double, 2> cayley_boundary(BoundaryPoint a) {
  if (a.infinite) return {1.0, 0.0};
  const double x = a.value;
  if (std::abs(x) <= 1.0) {
    const double d = 1.0 + x * x;
    return {(x * x - 1.0) / d, -2.0 * x / d};
  }
  const double t = 1.0 / x;  // avoids overflow of x^2
  const double d = 1.0 + t * t;
  return {(1.0 - t * t) / d, -2.0 * t / d};
}

std::array<double, 2> cayley_to_disk(Point p) {
  const double den = p.u * p.u + (p.v + 1.0) * (p.v + 1.0);
  return {(p.u * p.u + p.v * p.v - 1.0) / den, -2.0 * p.u / den};
}

// ---------------------------------------------------------------------------
// Geodesic

Geodesic::Geodesic(BoundaryPoint a, BoundaryPoint b, const Tolerances& tol) {
  if (a.infinite && b.infinite)
    throw Error(ErrorCode::InvalidArgument, "geodesic needs two distinct ideal endpoints");
  if (chordal(a, b) <= tol.point)
    throw Error(ErrorCode::InvalidArgument, "geodesic endpoints coincide");
  if (a.infinite) std::swap(a, b);
  if (!b.infinite && a.value > b.value) std::swap(a, b);
  e1 = a;
  e2 = b;
}

Geodesic geodesic_through(Point a, Point b, const Tolerances& tol) {
  const double du = b.u - a.u;
  if (std::abs(du) <= 1e-12 * (1.0 + std::abs(a.u))) {
    if (std::abs(a.v - b.v) <= 1e-15)
      throw Error(ErrorCode::InvalidArgument, "no unique geodesic through coincident points");
    return Geodesic(BoundaryPoint::at(0.5 * (a.u + b.u)), BoundaryPoint::inf(), tol);
  }
  // Center of the semicircle equidistant (in Euclidean terms) from both points.
  const double m =
      (b.u * b.u + b.v * b.v - a.u * a.u - a.v * a.v) / (2.0 * du);
  const double rho = std::hypot(a.u - m, a.v);
  return Geodesic(BoundaryPoint::at(m - rho), BoundaryPoint::at(m + rho), tol);
}

bool same_geodesic(const Geodesic& a, const Geodesic& b, double point_tol) {
  // Unordered endpoint match; the canonical slot order can disagree when one
  // encoding uses infinity and the other a huge finite coordinate.
  const bool direct = chordal(a.e1, b.e1) <= point_tol && chordal(a.e2, b.e2) <= point_tol;
  const bool crossed = chordal(a.e1, b.e2) <= point_tol && chordal(a.e2, b.e1) <= point_tol;
  return direct || crossed;
}

bool share_endpoint(const Geodesic& a, const Geodesic& b, double point_tol) {
  if (same_geodesic(a, b, point_tol)) return false;
  return chordal(a.e1, b.e1) <= point_tol || chordal(a.e1, b.e2) <= point_tol ||
         chordal(a.e2, b.e1) <= point_tol || chordal(a.e2, b.e2) <= point_tol;
}

// ---------------------------------------------------------------------------
// Isometry

void Isometry::canonicalize() {
  const double dt = det();
  if (!(dt > 0.0))
    throw Error(ErrorCode::InvalidArgument, "matrix determinant must be positive");
  if (std::abs(dt - 1.0) > 1e-15) {
    const double s = 1.0 / std::sqrt(dt);
    for (double& e : m) e *= s;
  }
  for (double e : m) {
    if (std::abs(e) > 1e-12) {
      if (e < 0.0)
        for (double& f : m) f = -f;
      return;
    }
  }
  throw Error(ErrorCode::ConsistencyFailure, "matrix is numerically zero");
}

Isometry Isometry::from(double a, double b, double c, double d) {
  Isometry g;
  g.m = {a, b, c, d};
  const double dt = g.det();
  if (std::abs(dt - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "matrix determinant must be 1");
  g.canonicalize();
  return g;
}

Isometry Isometry::inverse() const {
  Isometry g;
  g.m = {m[3], -m[1], -m[2], m[0]};
  g.canonicalize();
  return g;
}

Isometry operator*(const Isometry& g, const Isometry& h) {
  Isometry r;
  r.m = {g.m[0] * h.m[0] + g.m[1] * h.m[2], g.m[0] * h.m[1] + g.m[1] * h.m[3],
         g.m[2] * h.m[0] + g.m[3] * h.m[2], g.m[2] * h.m[1] + g.m[3] * h.m[3]};
  r.canonicalize();
  return r;
}

double matrix_distance(const Isometry& g, const Isometry& h) {
  double diff = 0.0, sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    diff = std::max(diff, std::abs(g.m[i] - h.m[i]));
    sum = std::max(sum, std::abs(g.m[i] + h.m[i]));
  }
  return std::min(diff, sum);
}

Point Isometry::apply(Point p) const {
  const double cu_d = m[2] * p.u + m[3];
  const double den = cu_d * cu_d + m[2] * m[2] * p.v * p.v;
  // Im(g z) = Im(z) / |cz+d|^2 keeps the image strictly in the upper half-plane.
  const double nu = (m[0] * p.u + m[1]) * cu_d + m[0] * m[2] * p.v * p.v;
  return {nu / den, p.v / den};
}

BoundaryPoint Isometry::apply(BoundaryPoint x) const {
  if (x.infinite) {
    if (m[2] == 0.0) return BoundaryPoint::inf();
    return BoundaryPoint::at(m[0] / m[2]);
  }
  const double den = m[2] * x.value + m[3];
  if (den == 0.0) return BoundaryPoint::inf();
  return BoundaryPoint::at((m[0] * x.value + m[1]) / den);
}

Geodesic Isometry::apply(const Geodesic& g, const Tolerances& tol) const {
  return Geodesic(apply(g.e1), apply(g.e2), tol);
}

// ---------------------------------------------------------------------------
// Classification

IsometryClass classify_isometry(const Isometry& g, const Tolerances& tol) {
  IsometryClass out;
  if (approx_identity(g, tol.matrix)) {
    out.kind = IsometryKind::Identity;
    return out;
  }
  const double t = std::abs(g.trace());
  if (t < 2.0 - tol.trace) {
    out.kind = IsometryKind::Elliptic;
    const Point z0 = elliptic_fixed_point(g, tol);
    // Derivative at the fixed point is (cz0+d)^-2; its inverse argument is
    // the clockwise rotation angle.
    const double re = g.c() * z0.u + g.d();
    const double im = g.c() * z0.v;
    double ang = std::atan2(2.0 * re * im, re * re - im * im);
    if (ang <= 0.0) ang += 2.0 * M_PI;
    out.angle = ang;
    return out;
  }
  if (t <= 2.0 + tol.trace) {
    out.kind = IsometryKind::Parabolic;
    return out;
  }
  out.kind = IsometryKind::Hyperbolic;
  out.translation_length = 2.0 * std::acosh(t / 2.0);
  return out;
}

Point elliptic_fixed_point(const Isometry& g, const Tolerances& tol) {
  const double t = std::abs(g.trace());
  if (!(t < 2.0 - tol.trace))
    throw Error(ErrorCode::NonHyperbolicElement, "fixed point requires an elliptic element");
  const double c = g.c();
  // c = 0 with det 1 forces |trace| >= 2, so c != 0 here.
  const double u = (g.a() - g.d()) / (2.0 * c);
  const double v = std::sqrt(std::max(0.0, 4.0 - t * t)) / (2.0 * std::abs(c));
  return {u, v};
}

Geodesic axis_of(const Isometry& g, const Tolerances& tol) {
  const double t = std::abs(g.trace());
  if (!(t > 2.0 + tol.trace))
    throw Error(ErrorCode::NonHyperbolicElement, "axis requires a hyperbolic element");
  // Fixed points solve c z^2 + (d-a) z - b = 0 on the real line.
  const double A = g.c(), B = g.d() - g.a(), C = -g.b();
  if (std::abs(A) <= 1e-14) {
    // Translation-like form fixing infinity; B != 0 since |trace| > 2.
    return Geodesic(BoundaryPoint::at(-C / B), BoundaryPoint::inf(), tol);
  }
  const double disc = B * B - 4.0 * A * C;  // equals trace^2 - 4 > 0
  const double root = std::sqrt(std::max(0.0, disc));
  const double q = -0.5 * (B + std::copysign(root, B == 0.0 ? 1.0 : B));
  // Vieta pairing avoids cancellation in the smaller root.
  return Geodesic(BoundaryPoint::at(q / A), BoundaryPoint::at(C / q), tol);
}

// ---------------------------------------------------------------------------
// Constructions and predicates

Isometry rotation_about(Point center, double theta) {
  if (!(theta > 0.0) || !(theta < 2.0 * M_PI))
    throw Error(ErrorCode::InvalidArgument, "rotation angle must lie in (0, 2pi)");
  if (!(center.v > 0.0))
    throw Error(ErrorCode::InvalidArgument, "rotation center must lie in the upper half-plane");
  const double ch = std::cos(0.5 * theta), sh = std::sin(0.5 * theta);
  const double s = std::sqrt(center.v);
  // Conjugate the clockwise rotation fixing i by z -> v0 z + u0.
  Isometry t = Isometry::from(s, center.u / s, 0.0, 1.0 / s);
  Isometry r = Isometry::from(ch, -sh, sh, ch);
  return t * r * t.inverse();
}

namespace {

// Strictly-inside test for one endpoint against a semicircle's span.
bool strictly_between(double lo, double hi, BoundaryPoint p) {
  return !p.infinite && lo < p.value && p.value < hi;
}

}  // namespace

bool geodesics_interleave(const Geodesic& a, const Geodesic& b, double point_tol) {
  if (same_geodesic(a, b, point_tol) || share_endpoint(a, b, point_tol)) return false;
  if (a.vertical() && b.vertical()) return false;  // both pass through infinity
  if (a.vertical()) {
    return strictly_between(b.e1.value, b.e2.value, a.e1);
  }
  if (b.vertical()) {
    return strictly_between(a.e1.value, a.e2.value, b.e1);
  }
  const bool in1 = strictly_between(a.e1.value, a.e2.value, b.e1);
  const bool in2 = strictly_between(a.e1.value, a.e2.value, b.e2);
  return in1 != in2;
}

std::optional<Point> geodesics_intersect(const Geodesic& a, const Geodesic& b,
                                         const Tolerances& tol) {
  if (same_geodesic(a, b, tol.point))
    throw Error(ErrorCode::IdenticalGeodesics, "geodesics coincide");
  if (!geodesics_interleave(a, b, tol.point)) return std::nullopt;
  if (a.vertical() || b.vertical()) {
    const Geodesic& vert = a.vertical() ? a : b;
    const Geodesic& circ = a.vertical() ? b : a;
    const double x = vert.x();
    const double dm = x - circ.m();
    const double v2 = circ.rho() * circ.rho() - dm * dm;
    return Point{x, std::sqrt(std::max(0.0, v2))};
  }
  const double m1 = a.m(), r1 = a.rho(), m2 = b.m(), r2 = b.rho();
  const double u = 0.5 * (m1 + m2) + (r1 * r1 - r2 * r2) / (2.0 * (m2 - m1));
  const double du = u - m1;
  const double v2 = r1 * r1 - du * du;
  return Point{u, std::sqrt(std::max(0.0, v2))};
}

double distance_point_to_geodesic(Point p, const Geodesic& g) {
  if (g.vertical()) return std::asinh(std::abs(p.u - g.x()) / p.v);
  const double du = p.u - g.m();
  const double s = std::abs(du * du + p.v * p.v - g.rho() * g.rho()) / (2.0 * g.rho() * p.v);
  return std::asinh(s);
}

std::array<double, 2> tangent_at(const Geodesic& g, Point p, bool increasing) {
  double tu, tv;
  if (g.vertical()) {
    tu = 0.0;
    tv = 1.0;
  } else {
    // Tangent of (m + rho cos phi, rho sin phi) in increasing phi.
    tu = -p.v;
    tv = p.u - g.m();
    const double n = std::hypot(tu, tv);
    tu /= n;
    tv /= n;
  }
  if (!increasing) {
    tu = -tu;
    tv = -tv;
  }
  return {tu, tv};
}

double angle_between_at(const Geodesic& a, const Geodesic& b, Point p, const Tolerances& tol) {
  (void)tol;
  if (distance_point_to_geodesic(p, a) > 1e-6 || distance_point_to_geodesic(p, b) > 1e-6)
    throw Error(ErrorCode::PointNotOnBoth, "angle base point misses a geodesic");
  const auto ta = tangent_at(a, p, true);
  const auto tb = tangent_at(b, p, true);
  const double dot = std::abs(ta[0] * tb[0] + ta[1] * tb[1]);
  return std::acos(std::clamp(dot, 0.0, 1.0));
}

EuclideanCircle hyperbolic_circle(Point center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "circle radius must be positive");
  return {center.u, center.v * std::cosh(radius), center.v * std::sinh(radius)};
}

}  // namespace stiler
