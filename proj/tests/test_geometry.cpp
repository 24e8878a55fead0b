#include <doctest.h>

#include "incidence_lab/geometry.hpp"
#include "support.hpp"

using namespace testing;

TEST_SUITE("geom-core") {
  TEST_CASE("rationals stay canonical") {
    const Rational a = q(2, 4) + q(1, 6);
    CHECK(num(a) == 2);
    CHECK(den(a) == 3);
    CHECK(to_string(q(-3, 6)) == "-1/2");
    CHECK(parse_rational("-10/4") == q(-5, 2));
    CHECK_THROWS_AS(parse_rational("10/-4"), std::invalid_argument);
    CHECK(parse_rational("7") == q(7));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK(exact_root(Integer(27), 3) == Integer(3));
    CHECK_FALSE(exact_root(Integer(28), 3));
    CHECK(ceil_root(Integer(28), 3) == 4);
  }

  TEST_CASE("point on line") {
    CHECK(point_on_line(pt(1, 2), Line2::slope_intercept(q(1), q(1))));
    CHECK(point_on_line(pt(2, 5), Line2::slope_intercept(q(2), q(1))));
    const Line3 x_axis = Line3::through(pt(0, 0, 0), pt(1, 0, 0));
    CHECK_FALSE(point_on_line(pt(0, 0, 1), x_axis));
    CHECK(point_on_line(Point3{q(7, 3), q(0), q(0)}, x_axis));
    CHECK_THROWS_AS(point_on_line(AnyPoint(pt(1, 2)), AnyLine(x_axis)), DimensionMismatch);
  }

  TEST_CASE("coplanar4 and general position") {
    CHECK_FALSE(coplanar4(pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)));
    CHECK(coplanar4(pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(1, 1, 0)));
    CHECK(coplanar4(pt(0, 0, 0), pt(1, 1, 1), pt(2, 2, 2), pt(0, 0, 1)));
    CHECK(coplanar4(pt(0, 0, 0), pt(0, 0, 0), pt(0, 1, 0), pt(1, 1, 5)));

    const std::vector<Point3> tet{pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)};
    CHECK(general_position(tet));
    const std::vector<Point3> bad{pt(0, 0, 0), pt(1, 0, 0), pt(2, 0, 0), pt(0, 1, 0), pt(0, 0, 1)};
    CHECK_FALSE(general_position(bad));
    const std::vector<Point2> tri{pt(0, 0), pt(1, 0), pt(0, 1)};
    CHECK(general_position(tri));
    const std::vector<Point3> few{pt(0, 0, 0), pt(1, 0, 0), pt(2, 0, 0)};
    CHECK(general_position(few));
  }

  TEST_CASE("coplanar4 is invariant under unimodular affine maps") {
    SplitMix64 rng(11);
    Eigen::Matrix<Rational, 3, 3> s = Eigen::Matrix<Rational, 3, 3>::Identity();
    s(0, 1) = 2;
    s(0, 2) = -1;
    s(1, 2) = 3;
    Eigen::Matrix<Rational, 3, 3> lower = Eigen::Matrix<Rational, 3, 3>::Identity();
    lower(2, 0) = -2;
    lower(1, 0) = 1;
    const Eigen::Matrix<Rational, 3, 3> map = lower * s;
    const Vector3<Rational> shift = vec(5, -7, 1);
    for (int trial = 0; trial < 300; ++trial) {
      std::array<Point3, 4> p;
      for (auto& x : p) x = random_point<3>(rng, 2);
      if (trial % 3 == 0) p[3] = p[0] + q(2) * (p[1] - p[0]) - (p[2] - p[0]);  // force coplanar
      std::array<Point3, 4> image;
      for (int i = 0; i < 4; ++i) image[i] = map * p[i] + shift;
      CHECK(coplanar4(p[0], p[1], p[2], p[3]) == coplanar4(image[0], image[1], image[2], image[3]));
    }
  }

  TEST_CASE("line canonical forms") {
    const Line2 a = Line2::from_coefficients(q(-2), q(4), q(6));
    CHECK(a.a() == 1);
    CHECK(a.b() == -2);
    CHECK(a.c() == -3);
    CHECK(a == Line2::from_integers(Integer(3), Integer(-6), Integer(-9)));
    CHECK_THROWS(Line2::from_coefficients(q(0), q(0), q(1)));

    const Line3 l = Line3::through(pt(1, 2, 3), pt(3, 2, 1));
    CHECK(l.direction().dot(l.moment()) == 0);
    CHECK(Line3::from_plucker(l.direction() * 5, l.moment() * 5) == l);
    CHECK(Line3::from_plucker(-l.direction(), -l.moment()) == l);
    CHECK(Line3::from_point_direction(l.base_point(), to_rational(l.direction())) == l);
  }

  TEST_CASE("rebuilding a line from two of its points gives the same tuple") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
      const Point3 p = random_point<3>(rng, 20, 7);
      Vector3<Rational> d = random_point<3>(rng, 5, 3);
      if (exactly_zero(d)) d(0) = 1;
      const Line3 l = Line3::from_point_direction(p, d);
      const Rational s = small_rational(rng, 9, 5), t = s + q(1, 1 + static_cast<std::int64_t>(rng.below(9)));
      const Point3 a = p + s * d, b = p + t * d;
      CHECK(Line3::through(a, b) == l);
      CHECK(l.contains(a));
      CHECK(Line3::through(l.base_point(), l.base_point() + to_rational(l.direction())) == l);
    }
  }

  TEST_CASE("lines_coplanar and plane_span") {
    const Line3 x_axis = Line3::through(pt(0, 0, 0), pt(1, 0, 0));
    const Line3 vertical = Line3::from_point_direction(pt(0, 1, 0), vec(0, 0, 1));
    CHECK(abs(reciprocal_product(x_axis, vertical)) == 1);
    CHECK_FALSE(lines_coplanar(x_axis, vertical));
    CHECK_THROWS_AS(plane_span(x_axis, vertical), std::invalid_argument);

    const Line3 y_axis = Line3::through(pt(0, 0, 0), pt(0, 1, 0));
    CHECK(lines_coplanar(x_axis, y_axis));
    CHECK(plane_span(x_axis, y_axis) == Plane::from_coefficients(vec(0, 0, 1), q(0)));

    const Line3 shifted = Line3::through(pt(0, 1, 0), pt(1, 1, 0));
    CHECK(lines_coplanar(x_axis, shifted));
    CHECK(plane_span(x_axis, shifted) == Plane::from_coefficients(vec(0, 0, 1), q(0)));
    CHECK_THROWS_AS(plane_span(x_axis, x_axis), std::invalid_argument);
  }

  TEST_CASE("coplanar iff intersecting or parallel") {
    SplitMix64 rng(77);
    int coplanar_seen = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const Point3 a = random_point<3>(rng, 2), b = random_point<3>(rng, 2);
      const Point3 c = random_point<3>(rng, 2);
      Point3 d = random_point<3>(rng, 2);
      if (trial % 2) d = c + (b - a) * q(static_cast<std::int64_t>(rng.below(3)) + 1);  // parallel
      if (a == b || c == d) continue;
      const Line3 l1 = Line3::through(a, b), l2 = Line3::through(c, d);
      if (l1 == l2) continue;
      // intersection by solving a + s(b-a) = c + t(d-c) on all three coordinates
      bool meets = false;
      const Vector3<Rational> u = b - a, v = d - c, w = c - a;
      const Vector3<Rational> uv = u.cross(v);
      if (!exactly_zero(uv)) meets = w.dot(uv) == 0;
      const bool parallel = exactly_zero(uv);
      CHECK(lines_coplanar(l1, l2) == (meets || parallel));
      if (meets) {
        const auto x = intersect(l1, l2);
        REQUIRE(x);
        CHECK(l1.contains(*x));
        CHECK(l2.contains(*x));
      }
      coplanar_seen += lines_coplanar(l1, l2);
    }
    CHECK(coplanar_seen > 100);
  }

  TEST_CASE("planes and quadrics normalize") {
    const Plane p = Plane::from_coefficients(vec(-2, 4, 0), q(6));
    CHECK(p.tuple() == std::array<Integer, 4>{1, -2, 0, -3});
    CHECK(Plane::from_coefficients(to_rational(p.normal()), Rational(p.offset())) == p);
    CHECK(Plane::through(pt(0, 0, 1), pt(1, 0, 1), pt(0, 1, 1)) == Plane::from_coefficients(vec(0, 0, 1), q(1)));
    CHECK_THROWS(Plane::through(pt(0, 0, 0), pt(1, 1, 1), pt(2, 2, 2)));

    std::array<Rational, 10> c{};
    c[3] = q(-4);
    c[9] = q(2);
    const Quadric f = Quadric::from_coefficients(c);
    CHECK(f.coefficients()[3] == 1);
    CHECK(f.coefficients()[9] == q(-1, 2));
    CHECK(Quadric::from_coefficients(f.coefficients()) == f);
    CHECK(Quadric::from_polynomial(f.polynomial()) == f);
  }

  TEST_CASE("restrict_to_line") {
    using P3 = Polynomial3<Rational>;
    const P3 saddle(P3::Terms{{{0, 0, 1}, q(1)}, {{1, 1, 0}, q(-1)}});
    const Line3 ruling = Line3::from_point_direction(pt(0, 1, 0), vec(1, 0, 1));
    CHECK(restrict_to_line(saddle, ruling).is_zero());

    const P3 sphere(P3::Terms{{{2, 0, 0}, q(1)}, {{0, 2, 0}, q(1)}, {{0, 0, 2}, q(1)}, {{0, 0, 0}, q(-1)}});
    const Line3 x_axis = Line3::through(pt(0, 0, 0), pt(1, 0, 0));
    const auto r = restrict_to_line(sphere, x_axis);
    CHECK(r.coefficients() == std::vector<Rational>{q(-1), q(0), q(1)});

    const auto lin = restrict_to_line(P3::variable(0), x_axis);
    CHECK(lin.coefficients() == std::vector<Rational>{q(0), q(1)});
    CHECK(restrict_to_line(Quadric::from_polynomial(saddle), ruling).is_zero());
  }
}
