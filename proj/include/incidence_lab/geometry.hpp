#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "incidence_lab/polynomial.hpp"
#include "incidence_lab/rational.hpp"

namespace incidence_lab {

template <class Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <class Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <int Dim>
using Point = Eigen::Matrix<Rational, Dim, 1>;
using Point2 = Point<2>;
using Point3 = Point<3>;

/// Exact coefficient-wise zero test. Eigen's isZero() is tolerance-based and
/// must not be used on exact scalars.
template <class Derived>
bool exactly_zero(const Eigen::MatrixBase<Derived>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) return false;
  return true;
}

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The line a*x + b*y = c with integer, primitive, sign-normalized coefficients.
class Line2 {
 public:
  static Line2 from_coefficients(const Rational& a, const Rational& b, const Rational& c);
  static Line2 from_integers(Integer a, Integer b, Integer c);
  static Line2 through(const Point2& p, const Point2& q);
  /// y = slope * x + intercept
  static Line2 slope_intercept(const Rational& slope, const Rational& intercept);

  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }
  const Integer& c() const { return c_; }
  Vector2<Integer> normal() const { return {a_, b_}; }

  bool contains(const Point2& p) const;
  /// A rational point on the line and an integer direction vector.
  Point2 base_point() const;
  Vector2<Integer> direction() const { return {-b_, a_}; }

  friend bool operator==(const Line2&, const Line2&) = default;
  friend bool operator<(const Line2& l, const Line2& r) {
    return std::tie(l.a_, l.b_, l.c_) < std::tie(r.a_, r.b_, r.c_);
  }

 private:
  Line2(Integer a, Integer b, Integer c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}
  Integer a_, b_, c_;
};

/// A line in R^3 in canonical Plücker form: integer direction d and moment
/// m = p x d, jointly primitive, with the leading nonzero entry of d positive.
class Line3 {
 public:
  static Line3 from_point_direction(const Point3& p, const Vector3<Rational>& d);
  static Line3 through(const Point3& p, const Point3& q);
  /// Validates d != 0 and d.m = 0, then canonicalizes.
  static Line3 from_plucker(const Vector3<Integer>& d, const Vector3<Integer>& m);

  const Vector3<Integer>& direction() const { return d_; }
  const Vector3<Integer>& moment() const { return m_; }
  std::array<Integer, 6> tuple() const { return {d_(0), d_(1), d_(2), m_(0), m_(1), m_(2)}; }

  /// The point of the line closest to the origin.
  Point3 base_point() const;
  bool contains(const Point3& p) const;

  friend bool operator==(const Line3& l, const Line3& r) { return l.tuple() == r.tuple(); }
  friend bool operator<(const Line3& l, const Line3& r) { return l.tuple() < r.tuple(); }

 private:
  Line3(Vector3<Integer> d, Vector3<Integer> m) : d_(std::move(d)), m_(std::move(m)) {}
  Vector3<Integer> d_, m_;
};

template <int Dim>
struct LineOf;
template <>
struct LineOf<2> {
  using type = Line2;
};
template <>
struct LineOf<3> {
  using type = Line3;
};
template <int Dim>
using Line = typename LineOf<Dim>::type;

/// The plane n.x = c, integer and primitive, leading nonzero of n positive.
class Plane {
 public:
  static Plane from_coefficients(const Vector3<Rational>& n, const Rational& c);
  static Plane through(const Point3& p, const Point3& q, const Point3& r);

  const Vector3<Integer>& normal() const { return n_; }
  const Integer& offset() const { return c_; }
  std::array<Integer, 4> tuple() const { return {n_(0), n_(1), n_(2), c_}; }

  /// n.p - c, exact.
  Rational evaluate(const Point3& p) const;
  /// Sign of n.p - c.
  int side(const Point3& p) const { return sign(evaluate(p)); }
  bool contains(const Point3& p) const { return side(p) == 0; }
  bool contains(const Line3& l) const;

  friend bool operator==(const Plane& l, const Plane& r) { return l.tuple() == r.tuple(); }
  friend bool operator<(const Plane& l, const Plane& r) { return l.tuple() < r.tuple(); }

 private:
  Plane(Vector3<Integer> n, Integer c) : n_(std::move(n)), c_(std::move(c)) {}
  Vector3<Integer> n_;
  Integer c_;
};

/// A polynomial of degree <= 2 in (x, y, z): ten coefficients in the order
/// of monomials_up_to(2), scaled so the first nonzero coefficient is 1.
class Quadric {
 public:
  static Quadric from_coefficients(std::span<const Rational> coeffs);
  static Quadric from_polynomial(const Polynomial3<Rational>& f);

  const std::array<Rational, 10>& coefficients() const { return c_; }
  Polynomial3<Rational> polynomial() const;

  friend bool operator==(const Quadric&, const Quadric&) = default;

 private:
  std::array<Rational, 10> c_;
};

// ---- canonical-key hashing -------------------------------------------------

struct GeometryHash {
  std::uint64_t operator()(const Rational& q) const { return stable_hash(q); }
  template <int Dim>
  std::uint64_t operator()(const Point<Dim>& p) const {
    std::uint64_t h = 0x2545f4914f6cdd1dULL + Dim;
    for (int i = 0; i < Dim; ++i) h = hash_mix(h, stable_hash(p(i)));
    return h;
  }
  std::uint64_t operator()(const Line2& l) const;
  std::uint64_t operator()(const Line3& l) const;
  std::uint64_t operator()(const Plane& p) const;
};

struct PointLess {
  template <int Dim>
  bool operator()(const Point<Dim>& a, const Point<Dim>& b) const {
    for (int i = 0; i < Dim; ++i) {
      if (a(i) < b(i)) return true;
      if (b(i) < a(i)) return false;
    }
    return false;
  }
};

// ---- predicates ------------------------------------------------------------

bool point_on_line(const Point2& p, const Line2& l);
bool point_on_line(const Point3& p, const Line3& l);

using AnyPoint = std::variant<Point2, Point3>;
using AnyLine = std::variant<Line2, Line3>;
/// Throws DimensionMismatch when the point and line live in different spaces.
bool point_on_line(const AnyPoint& p, const AnyLine& l);

/// Sign of the orientation determinant of (p, q, r).
int orientation(const Point2& p, const Point2& q, const Point2& r);
bool collinear(const Point2& p, const Point2& q, const Point2& r);
bool collinear(const Point3& p, const Point3& q, const Point3& r);

/// Vanishing of the 4x4 homogeneous determinant.
bool coplanar4(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// R^2: no three collinear. R^3: no four coplanar. Vacuous below d+1 points.
bool general_position(std::span<const Point2> points);
bool general_position(std::span<const Point3> points);

/// Plücker reciprocal product d1.m2 + d2.m1.
Integer reciprocal_product(const Line3& l1, const Line3& l2);
bool lines_coplanar(const Line3& l1, const Line3& l2);
bool lines_parallel(const Line3& l1, const Line3& l2);
bool lines_parallel(const Line2& l1, const Line2& l2);

/// The unique common plane of two distinct coplanar lines. Throws
/// std::invalid_argument on skew or identical lines.
Plane plane_span(const Line3& l1, const Line3& l2);

/// Intersection point of two non-parallel coplanar lines.
std::optional<Point2> intersect(const Line2& l1, const Line2& l2);
std::optional<Point3> intersect(const Line3& l1, const Line3& l2);

/// Coefficients of t -> f(p + t d) with p = base_point(l), d = direction(l).
/// The line lies in Z(f) iff the result is the zero polynomial.
Polynomial<Rational> restrict_to_line(const Polynomial3<Rational>& f, const Line3& l);
Polynomial<Rational> restrict_to_line(const Quadric& f, const Line3& l);

template <class Derived>
Vector3<Rational> to_rational(const Eigen::MatrixBase<Derived>& v) {
  return v.template cast<Rational>();
}

std::string format_point(const Point2& p);
std::string format_point(const Point3& p);

}  // namespace incidence_lab
