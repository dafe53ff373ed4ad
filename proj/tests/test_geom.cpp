#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "stiler/geom.hpp"

using namespace stiler;

namespace {

Isometry random_isometry(std::mt19937& rng) {
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  std::uniform_real_distribution<double> stretch(0.2, 3.0);
  std::uniform_real_distribution<double> ang(0.1, 6.1);
  const double s = std::sqrt(stretch(rng));
  Isometry t = Isometry::from(1.0, shift(rng), 0.0, 1.0);
  Isometry d = Isometry::from(s, 0.0, 0.0, 1.0 / s);
  Isometry r = rotation_about({0.0, 1.0}, ang(rng));
  return t * d * r;
}

Geodesic random_geodesic(std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  std::uniform_int_distribution<int> pick(0, 4);
  if (pick(rng) == 0) return Geodesic(BoundaryPoint::at(coord(rng)), BoundaryPoint::inf());
  double a = coord(rng), b = coord(rng);
  while (std::abs(a - b) < 0.05) b = coord(rng);
  return Geodesic(BoundaryPoint::at(a), BoundaryPoint::at(b));
}

}  // namespace

TEST_CASE("distance between i and 1+i matches the closed form") {
  const double d = hyperbolic_distance({0.0, 1.0}, {1.0, 1.0});
  CHECK(d == doctest::Approx(0.9624236501192069).epsilon(1e-12));  // arccosh(3/2)
  CHECK(std::cosh(d) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("distance along a vertical line is the log ratio of heights") {
  CHECK(hyperbolic_distance({2.0, 1.0}, {2.0, std::exp(3.0)}) == doctest::Approx(3.0));
  CHECK(hyperbolic_distance({0.0, 1e-8}, {0.0, 2e-8}) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("distance is symmetric and vanishes only on the diagonal") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0), v(0.1, 5.0);
  for (int i = 0; i < 200; ++i) {
    Point p{u(rng), v(rng)}, q{u(rng), v(rng)};
    CHECK(hyperbolic_distance(p, q) == doctest::Approx(hyperbolic_distance(q, p)).epsilon(1e-13));
    CHECK(hyperbolic_distance(p, p) == 0.0);
  }
}

TEST_CASE("chordal metric on the boundary circle") {
  CHECK(chordal(BoundaryPoint::at(0.0), BoundaryPoint::inf()) == doctest::Approx(2.0));
  CHECK(chordal(BoundaryPoint::at(0.0), BoundaryPoint::at(1.0)) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(chordal(BoundaryPoint::at(1.0), BoundaryPoint::at(-1.0)) == doctest::Approx(2.0));
  CHECK(chordal(BoundaryPoint::inf(), BoundaryPoint::inf()) == 0.0);
  // Large coordinates approach infinity smoothly instead of overflowing.
  CHECK(chordal(BoundaryPoint::at(1e12), BoundaryPoint::inf()) == doctest::Approx(2e-12));
  const auto img = cayley_boundary(BoundaryPoint::at(1e200));
  CHECK(img[0] == doctest::Approx(1.0));
  CHECK(std::abs(img[1]) < 1e-100);
}

TEST_CASE("chordal distance agrees with the Euclidean gap of Cayley images") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(-30.0, 30.0);
  for (int i = 0; i < 300; ++i) {
    BoundaryPoint a = BoundaryPoint::at(coord(rng));
    BoundaryPoint b = (i % 7 == 0) ? BoundaryPoint::inf() : BoundaryPoint::at(coord(rng));
    const auto pa = cayley_boundary(a), pb = cayley_boundary(b);
    const double gap = std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
    CHECK(chordal(a, b) == doctest::Approx(gap).epsilon(1e-10));
  }
}

TEST_CASE("geodesic constructor canonicalizes endpoint order") {
  Geodesic g(BoundaryPoint::at(3.0), BoundaryPoint::at(-1.0));
  CHECK(g.e1.value == -1.0);
  CHECK(g.e2.value == 3.0);
  CHECK(g.m() == doctest::Approx(1.0));
  CHECK(g.rho() == doctest::Approx(2.0));

  Geodesic v(BoundaryPoint::inf(), BoundaryPoint::at(0.5));
  CHECK(v.vertical());
  CHECK(v.x() == 0.5);

  CHECK_THROWS_AS(Geodesic(BoundaryPoint::at(1.0), BoundaryPoint::at(1.0)), Error);
  CHECK_THROWS_AS(Geodesic(BoundaryPoint::inf(), BoundaryPoint::inf()), Error);
}

TEST_CASE("same_geodesic matches unordered endpoint pairs") {
  Geodesic a(BoundaryPoint::at(-1.0), BoundaryPoint::at(2.0));
  Geodesic b(BoundaryPoint::at(2.0), BoundaryPoint::at(-1.0));
  CHECK(same_geodesic(a, b));
  Geodesic c(BoundaryPoint::at(-1.0), BoundaryPoint::at(2.0 + 1e-12));
  CHECK(same_geodesic(a, c));
  Geodesic d(BoundaryPoint::at(-1.0), BoundaryPoint::at(2.1));
  CHECK_FALSE(same_geodesic(a, d));
  CHECK(share_endpoint(a, d));
  // A huge finite endpoint is chordally indistinguishable from infinity.
  Geodesic v(BoundaryPoint::at(3.0), BoundaryPoint::inf());
  Geodesic w(BoundaryPoint::at(-1e12), BoundaryPoint::at(3.0));
  CHECK(same_geodesic(v, w));
}

TEST_CASE("isometries keep determinant one and canonical sign") {
  Isometry g = Isometry::from(-2.0, 0.0, 0.5, -0.5);
  CHECK(g.a() > 0.0);  // sign flipped to canonical form
  CHECK(g.det() == doctest::Approx(1.0));
  CHECK(matrix_distance(g, g.inverse().inverse()) < 1e-14);
  CHECK_THROWS_AS(Isometry::from(1.0, 0.0, 0.0, 2.0), Error);

  Isometry a = Isometry::from(0.0, -1.0, 1.0, 0.0);
  CHECK(a.m[1] > 0.0);  // first nonzero entry positive
  CHECK(matrix_distance(a, a) == 0.0);
}

TEST_CASE("matrix distance identifies opposite signs") {
  Isometry a = Isometry::from(2.0, 1.0, 1.0, 1.0);
  Isometry b;
  b.m = {-2.0, -1.0, -1.0, -1.0};
  CHECK(matrix_distance(a, b) == 0.0);
}

TEST_CASE("point and boundary action of standard maps") {
  Isometry shift = Isometry::from(1.0, 1.0, 0.0, 1.0);
  Point p = shift.apply(Point{0.0, 1.0});
  CHECK(p.u == doctest::Approx(1.0));
  CHECK(p.v == doctest::Approx(1.0));

  Isometry inv = Isometry::from(0.0, -1.0, 1.0, 0.0);  // z -> -1/z
  Point q = inv.apply(Point{0.0, 2.0});
  CHECK(q.u == doctest::Approx(0.0));
  CHECK(q.v == doctest::Approx(0.5));
  CHECK(inv.apply(BoundaryPoint::at(0.0)).infinite);
  CHECK(inv.apply(BoundaryPoint::inf()).value == doctest::Approx(0.0));
  CHECK_FALSE(shift.apply(BoundaryPoint::at(2.0)).infinite);
  CHECK(shift.apply(BoundaryPoint::at(2.0)).value == doctest::Approx(3.0));
}

TEST_CASE("isometries preserve distance") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0), v(0.2, 4.0);
  for (int i = 0; i < 100; ++i) {
    Isometry g = random_isometry(rng);
    Point p{u(rng), v(rng)}, q{u(rng), v(rng)};
    CHECK(hyperbolic_distance(g.apply(p), g.apply(q)) ==
          doctest::Approx(hyperbolic_distance(p, q)).epsilon(1e-10));
  }
}

TEST_CASE("rotation about a point is elliptic with that clockwise angle") {
  const Point c{0.3, 2.0};
  for (double theta : {0.5, M_PI / 3.0, M_PI / 2.0, M_PI, 4.0, 2.0 * M_PI - 0.3}) {
    Isometry r = rotation_about(c, theta);
    auto cls = classify_isometry(r);
    REQUIRE(cls.kind == IsometryKind::Elliptic);
    CHECK(cls.angle == doctest::Approx(theta).epsilon(1e-9));
    Point f = elliptic_fixed_point(r);
    CHECK(f.u == doctest::Approx(c.u).epsilon(1e-9));
    CHECK(f.v == doctest::Approx(c.v).epsilon(1e-9));
    Point moved = r.apply(c);
    CHECK(hyperbolic_distance(moved, c) < 1e-9);
  }
  CHECK_THROWS_AS(rotation_about(c, 0.0), Error);
  CHECK_THROWS_AS(rotation_about(c, 2.0 * M_PI), Error);
}

TEST_CASE("rotation angles compose additively") {
  const Point c{-1.0, 0.7};
  Isometry a = rotation_about(c, 1.1);
  Isometry b = rotation_about(c, 2.3);
  auto cls = classify_isometry(a * b);
  REQUIRE(cls.kind == IsometryKind::Elliptic);
  CHECK(cls.angle == doctest::Approx(3.4).epsilon(1e-9));
}

TEST_CASE("conjugation moves the fixed point and keeps the angle") {
  std::mt19937 rng(5);
  const Point c{0.0, 1.0};
  for (double theta : {0.8, 2.0, 5.0}) {
    Isometry r = rotation_about(c, theta);
    Isometry g = random_isometry(rng);
    Isometry conj = g * r * g.inverse();
    auto cls = classify_isometry(conj);
    REQUIRE(cls.kind == IsometryKind::Elliptic);
    CHECK(cls.angle == doctest::Approx(theta).epsilon(1e-8));
    Point f = elliptic_fixed_point(conj);
    Point gc = g.apply(c);
    CHECK(hyperbolic_distance(f, gc) < 1e-8);
  }
}

TEST_CASE("trichotomy of trace classifies elements") {
  CHECK(classify_isometry(Isometry::identity()).kind == IsometryKind::Identity);
  CHECK(classify_isometry(Isometry::from(1.0, 1.0, 0.0, 1.0)).kind == IsometryKind::Parabolic);
  auto hyp = classify_isometry(Isometry::from(2.0, 0.0, 0.0, 0.5));
  REQUIRE(hyp.kind == IsometryKind::Hyperbolic);
  CHECK(hyp.translation_length == doctest::Approx(2.0 * std::log(2.0)));
}

TEST_CASE("axis of a diagonal element is the imaginary axis") {
  Isometry g = Isometry::from(3.0, 0.0, 0.0, 1.0 / 3.0);
  Geodesic ax = axis_of(g);
  CHECK(ax.vertical());
  CHECK(ax.x() == doctest::Approx(0.0));
  CHECK_THROWS_AS(axis_of(rotation_about({0.0, 1.0}, 1.0)), Error);
}

TEST_CASE("axis transforms equivariantly under conjugation") {
  std::mt19937 rng(31);
  Isometry h = Isometry::from(2.0, 0.0, 0.0, 0.5);
  for (int i = 0; i < 50; ++i) {
    Isometry g = random_isometry(rng);
    Isometry conj = g * h * g.inverse();
    auto cls = classify_isometry(conj);
    REQUIRE(cls.kind == IsometryKind::Hyperbolic);
    CHECK(cls.translation_length == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
    Geodesic ax = axis_of(conj);
    Geodesic expect = g.apply(axis_of(h));
    CHECK(same_geodesic(ax, expect, 1e-6));
  }
}

TEST_CASE("translation length is the minimum displacement, attained on the axis") {
  Isometry g = Isometry::from(2.0, 0.0, 0.0, 0.5);
  const double len = classify_isometry(g).translation_length;
  Point on{0.0, 1.7};
  CHECK(hyperbolic_distance(on, g.apply(on)) == doctest::Approx(len).epsilon(1e-12));
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0), v(0.2, 4.0);
  for (int i = 0; i < 200; ++i) {
    Point p{u(rng), v(rng)};
    CHECK(hyperbolic_distance(p, g.apply(p)) >= len - 1e-12);
  }
}

TEST_CASE("two semicircles meeting at a known point") {
  Geodesic a(BoundaryPoint::at(-1.0), BoundaryPoint::at(2.0));
  Geodesic b(BoundaryPoint::at(0.0), BoundaryPoint::at(3.0));
  REQUIRE(geodesics_interleave(a, b));
  auto p = geodesics_intersect(a, b);
  REQUIRE(p.has_value());
  CHECK(p->u == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p->v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("vertical line crossing a semicircle") {
  Geodesic v(BoundaryPoint::at(0.0), BoundaryPoint::inf());
  Geodesic c(BoundaryPoint::at(-2.0), BoundaryPoint::at(1.0));
  REQUIRE(geodesics_interleave(v, c));
  auto p = geodesics_intersect(v, c);
  REQUIRE(p.has_value());
  CHECK(p->u == doctest::Approx(0.0));
  CHECK(p->v == doctest::Approx(std::sqrt(1.5 * 1.5 - 0.25)));
}

TEST_CASE("disjoint, nested, and asymptotic pairs do not intersect") {
  Geodesic a(BoundaryPoint::at(-1.0), BoundaryPoint::at(1.0));
  Geodesic nested(BoundaryPoint::at(-0.5), BoundaryPoint::at(0.5));
  Geodesic apart(BoundaryPoint::at(2.0), BoundaryPoint::at(3.0));
  Geodesic touch(BoundaryPoint::at(1.0), BoundaryPoint::at(4.0));
  CHECK_FALSE(geodesics_interleave(a, nested));
  CHECK_FALSE(geodesics_interleave(a, apart));
  CHECK_FALSE(geodesics_interleave(a, touch));
  CHECK(share_endpoint(a, touch));
  CHECK_FALSE(geodesics_intersect(a, nested).has_value());
  CHECK_FALSE(geodesics_intersect(a, touch).has_value());
  CHECK_THROWS_AS(geodesics_intersect(a, a), Error);
  Geodesic v1(BoundaryPoint::at(0.0), BoundaryPoint::inf());
  Geodesic v2(BoundaryPoint::at(1.0), BoundaryPoint::inf());
  CHECK_FALSE(geodesics_interleave(v1, v2));
}

TEST_CASE("interleaving is equivalent to having a crossing point") {
  std::mt19937 rng(97);
  int crossings = 0;
  for (int i = 0; i < 500; ++i) {
    Geodesic a = random_geodesic(rng), b = random_geodesic(rng);
    if (same_geodesic(a, b)) continue;
    auto p = geodesics_intersect(a, b);
    CHECK(p.has_value() == geodesics_interleave(a, b));
    if (p) {
      ++crossings;
      CHECK(distance_point_to_geodesic(*p, a) < 1e-7);
      CHECK(distance_point_to_geodesic(*p, b) < 1e-7);
    }
  }
  CHECK(crossings > 50);  // the sample actually exercises the positive branch
}

TEST_CASE("crossing predicate is isometry invariant") {
  std::mt19937 rng(13);
  for (int i = 0; i < 200; ++i) {
    Geodesic a = random_geodesic(rng), b = random_geodesic(rng);
    if (same_geodesic(a, b) || share_endpoint(a, b, 1e-4)) continue;
    Isometry g = random_isometry(rng);
    CHECK(geodesics_interleave(a, b) == geodesics_interleave(g.apply(a), g.apply(b)));
  }
}

TEST_CASE("distance from a point to a geodesic") {
  CHECK(distance_point_to_geodesic({1.0, 1.0}, Geodesic(BoundaryPoint::at(0.0),
                                                        BoundaryPoint::inf())) ==
        doctest::Approx(std::asinh(1.0)));
  // sinh d = 3/4 gives d = log 2 for the unit semicircle seen from (0,2).
  CHECK(distance_point_to_geodesic({0.0, 2.0},
                                   Geodesic(BoundaryPoint::at(-1.0), BoundaryPoint::at(1.0))) ==
        doctest::Approx(std::log(2.0)));
  CHECK(distance_point_to_geodesic({0.0, 1.0},
                                   Geodesic(BoundaryPoint::at(-1.0), BoundaryPoint::at(1.0))) ==
        doctest::Approx(0.0));
}

TEST_CASE("point-to-line distance is isometry invariant") {
  std::mt19937 rng(51);
  std::uniform_real_distribution<double> u(-3.0, 3.0), v(0.2, 4.0);
  for (int i = 0; i < 200; ++i) {
    Geodesic g = random_geodesic(rng);
    Point p{u(rng), v(rng)};
    Isometry iso = random_isometry(rng);
    CHECK(distance_point_to_geodesic(iso.apply(p), iso.apply(g)) ==
          doctest::Approx(distance_point_to_geodesic(p, g)).epsilon(1e-8));
  }
}

TEST_CASE("crossing angles at a shared point") {
  Geodesic circ(BoundaryPoint::at(-1.0), BoundaryPoint::at(1.0));
  Geodesic vert(BoundaryPoint::at(0.0), BoundaryPoint::inf());
  CHECK(angle_between_at(circ, vert, {0.0, 1.0}) == doctest::Approx(M_PI / 2.0));

  Geodesic c1(BoundaryPoint::at(-1.0), BoundaryPoint::at(1.0));
  Geodesic c2(BoundaryPoint::at(0.0), BoundaryPoint::at(2.0));
  auto p = geodesics_intersect(c1, c2);
  REQUIRE(p.has_value());
  CHECK(angle_between_at(c1, c2, *p) == doctest::Approx(M_PI / 3.0));
  CHECK_THROWS_AS(angle_between_at(c1, c2, {5.0, 5.0}), Error);
}

TEST_CASE("geodesic through two points contains both") {
  Geodesic v = geodesic_through({1.0, 0.5}, {1.0, 2.0});
  CHECK(v.vertical());
  CHECK(v.x() == doctest::Approx(1.0));
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-3.0, 3.0), w(0.2, 4.0);
  for (int i = 0; i < 200; ++i) {
    Point a{u(rng), w(rng)}, b{u(rng), w(rng)};
    if (std::abs(a.u - b.u) < 1e-6 && std::abs(a.v - b.v) < 1e-6) continue;
    Geodesic g = geodesic_through(a, b);
    CHECK(distance_point_to_geodesic(a, g) < 1e-9);
    CHECK(distance_point_to_geodesic(b, g) < 1e-9);
  }
}

TEST_CASE("hyperbolic circles are Euclidean circles at the shifted center") {
  const Point c{0.4, 1.3};
  const double R = 2.1;
  auto circ = hyperbolic_circle(c, R);
  CHECK(circ.cu == doctest::Approx(c.u));
  CHECK(circ.cv == doctest::Approx(c.v * std::cosh(R)));
  CHECK(circ.r == doctest::Approx(c.v * std::sinh(R)));
  for (double psi : {0.0, 0.7, 1.9, 3.1, 4.4, 5.8}) {
    Point p{circ.cu + circ.r * std::cos(psi), circ.cv + circ.r * std::sin(psi)};
    CHECK(hyperbolic_distance(c, p) == doctest::Approx(R).epsilon(1e-10));
  }
}

TEST_CASE("Cayley map sends i to the disk center and preserves small circles") {
  auto z0 = cayley_to_disk({0.0, 1.0});
  CHECK(std::hypot(z0[0], z0[1]) < 1e-15);
  auto z1 = cayley_to_disk({0.0, 3.0});
  CHECK(z1[0] == doctest::Approx(0.5));
  CHECK(z1[1] == doctest::Approx(0.0));
  // Interior points always land strictly inside the unit disk.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0), v(0.01, 50.0);
  for (int i = 0; i < 200; ++i) {
    auto w = cayley_to_disk({u(rng), v(rng)});
    CHECK(std::hypot(w[0], w[1]) < 1.0);
  }
}
