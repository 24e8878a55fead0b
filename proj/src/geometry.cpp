#include "incidence_lab/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace incidence_lab {

namespace {

// Multiplies a rational vector by the lcm of its denominators, divides by the
// gcd of the resulting integers and flips the sign so that the first nonzero
// entry among the first `sign_prefix` entries is positive.
template <std::size_t N>
std::array<Integer, N> primitive_integers(const std::array<Rational, N>& values, std::size_t sign_prefix) {
  Integer scale = 1;
  for (const auto& v : values) scale = lcm(scale, den(v));
  std::array<Integer, N> out;
  Integer g = 0;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = num(values[i] * Rational(scale));
    g = gcd(g, out[i]);
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  for (std::size_t i = 0; i < sign_prefix; ++i) {
    if (out[i] == 0) continue;
    if (out[i] < 0)
      for (auto& x : out) x = -x;
    break;
  }
  return out;
}

template <class Derived>
Vector3<Rational> as_rational(const Eigen::MatrixBase<Derived>& v) {
  return {Rational(v(0)), Rational(v(1)), Rational(v(2))};
}

}  // namespace

// ---- Line2 -----------------------------------------------------------------

Line2 Line2::from_coefficients(const Rational& a, const Rational& b, const Rational& c) {
  if (a == 0 && b == 0) throw std::invalid_argument("Line2: (a, b) must not both be zero");
  auto t = primitive_integers<3>({a, b, c}, 2);
  return Line2(t[0], t[1], t[2]);
}

Line2 Line2::from_integers(Integer a, Integer b, Integer c) {
  if (a == 0 && b == 0) throw std::invalid_argument("Line2: (a, b) must not both be zero");
  const Integer g = gcd(gcd(a, b), c);
  if (g != 1) {
    a /= g;
    b /= g;
    c /= g;
  }
  if (a < 0 || (a == 0 && b < 0)) {
    a = -a;
    b = -b;
    c = -c;
  }
  return Line2(std::move(a), std::move(b), std::move(c));
}

Line2 Line2::through(const Point2& p, const Point2& q) {
  if (p == q) throw std::invalid_argument("Line2::through: points coincide");
  const Rational a = q(1) - p(1);
  const Rational b = p(0) - q(0);
  return from_coefficients(a, b, a * p(0) + b * p(1));
}

Line2 Line2::slope_intercept(const Rational& slope, const Rational& intercept) {
  return from_coefficients(-slope, Rational(1), intercept);
}

bool Line2::contains(const Point2& p) const {
  return Rational(a_) * p(0) + Rational(b_) * p(1) == Rational(c_);
}

Point2 Line2::base_point() const {
  if (b_ != 0) return {Rational(0), Rational(c_, b_)};
  return {Rational(c_, a_), Rational(0)};
}

// ---- Line3 -----------------------------------------------------------------

Line3 Line3::from_point_direction(const Point3& p, const Vector3<Rational>& d) {
  if (exactly_zero(d)) throw std::invalid_argument("Line3: zero direction");
  const Vector3<Rational> m = p.cross(d);
  auto t = primitive_integers<6>({d(0), d(1), d(2), m(0), m(1), m(2)}, 3);
  return Line3({t[0], t[1], t[2]}, {t[3], t[4], t[5]});
}

Line3 Line3::through(const Point3& p, const Point3& q) {
  if (p == q) throw std::invalid_argument("Line3::through: points coincide");
  return from_point_direction(p, q - p);
}

Line3 Line3::from_plucker(const Vector3<Integer>& d, const Vector3<Integer>& m) {
  if (exactly_zero(d)) throw std::invalid_argument("Line3: zero direction");
  if (d.dot(m) != 0) throw std::invalid_argument("Line3: Plücker relation d.m = 0 violated");
  auto t = primitive_integers<6>(
      {Rational(d(0)), Rational(d(1)), Rational(d(2)), Rational(m(0)), Rational(m(1)), Rational(m(2))}, 3);
  return Line3({t[0], t[1], t[2]}, {t[3], t[4], t[5]});
}

Point3 Line3::base_point() const {
  const Vector3<Rational> d = as_rational(d_);
  const Vector3<Rational> m = as_rational(m_);
  return d.cross(m) / d.squaredNorm();
}

bool Line3::contains(const Point3& p) const {
  const Vector3<Rational> pd = p.cross(as_rational(d_));
  return pd == as_rational(m_);
}

// ---- Plane -----------------------------------------------------------------

Plane Plane::from_coefficients(const Vector3<Rational>& n, const Rational& c) {
  if (exactly_zero(n)) throw std::invalid_argument("Plane: zero normal");
  auto t = primitive_integers<4>({n(0), n(1), n(2), c}, 3);
  return Plane({t[0], t[1], t[2]}, t[3]);
}

Plane Plane::through(const Point3& p, const Point3& q, const Point3& r) {
  const Vector3<Rational> n = (q - p).cross(r - p);
  if (exactly_zero(n)) throw std::invalid_argument("Plane::through: points are collinear");
  return from_coefficients(n, n.dot(p));
}

Rational Plane::evaluate(const Point3& p) const { return as_rational(n_).dot(p) - Rational(c_); }

bool Plane::contains(const Line3& l) const {
  return n_.dot(l.direction()) == 0 && contains(l.base_point());
}

// ---- Quadric ---------------------------------------------------------------

Quadric Quadric::from_coefficients(std::span<const Rational> coeffs) {
  if (coeffs.size() != 10) throw std::invalid_argument("Quadric: expected 10 coefficients");
  auto first = std::find_if(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c != 0; });
  if (first == coeffs.end()) throw std::invalid_argument("Quadric: all coefficients are zero");
  const Rational lead = *first;
  Quadric q;
  for (std::size_t i = 0; i < 10; ++i) q.c_[i] = coeffs[i] / lead;
  return q;
}

Quadric Quadric::from_polynomial(const Polynomial3<Rational>& f) {
  if (f.degree() > 2) throw std::invalid_argument("Quadric: degree exceeds 2");
  const auto basis = monomials_up_to(2);
  std::array<Rational, 10> c;
  for (std::size_t i = 0; i < basis.size(); ++i) c[i] = f.coefficient(basis[i]);
  return from_coefficients(c);
}

Polynomial3<Rational> Quadric::polynomial() const {
  const auto basis = monomials_up_to(2);
  return Polynomial3<Rational>::from_basis(c_, basis);
}

// ---- hashing ---------------------------------------------------------------

std::uint64_t GeometryHash::operator()(const Line2& l) const {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (const Integer* z : {&l.a(), &l.b(), &l.c()}) h = hash_mix(h, stable_hash(*z));
  return h;
}

std::uint64_t GeometryHash::operator()(const Line3& l) const {
  std::uint64_t h = 0xbb67ae8584caa73bULL;
  for (const auto& z : l.tuple()) h = hash_mix(h, stable_hash(z));
  return h;
}

std::uint64_t GeometryHash::operator()(const Plane& p) const {
  std::uint64_t h = 0x3c6ef372fe94f82bULL;
  for (const auto& z : p.tuple()) h = hash_mix(h, stable_hash(z));
  return h;
}

// ---- predicates ------------------------------------------------------------

bool point_on_line(const Point2& p, const Line2& l) { return l.contains(p); }
bool point_on_line(const Point3& p, const Line3& l) { return l.contains(p); }

bool point_on_line(const AnyPoint& p, const AnyLine& l) {
  if (p.index() != l.index()) throw DimensionMismatch("point_on_line: point and line dimensions differ");
  if (p.index() == 0) return std::get<Line2>(l).contains(std::get<Point2>(p));
  return std::get<Line3>(l).contains(std::get<Point3>(p));
}

int orientation(const Point2& p, const Point2& q, const Point2& r) {
  return sign((q(0) - p(0)) * (r(1) - p(1)) - (q(1) - p(1)) * (r(0) - p(0)));
}

bool collinear(const Point2& p, const Point2& q, const Point2& r) { return orientation(p, q, r) == 0; }

bool collinear(const Point3& p, const Point3& q, const Point3& r) { return exactly_zero((q - p).cross(r - p)); }

bool coplanar4(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  Eigen::Matrix<Rational, 4, 4> m;
  m << a.transpose(), Rational(1), b.transpose(), Rational(1), c.transpose(), Rational(1), d.transpose(),
      Rational(1);
  return m.determinant() == 0;
}

bool general_position(std::span<const Point2> pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (collinear(pts[i], pts[j], pts[k])) return false;
  return true;
}

bool general_position(std::span<const Point3> pts) {
  const std::size_t n = pts.size();
  if (n < 4) return true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const Vector3<Rational> normal = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        // A collinear triple plus any fourth point spans a common plane.
        if (exactly_zero(normal)) return false;
        for (std::size_t l = k + 1; l < n; ++l)
          if (normal.dot(pts[l] - pts[i]) == 0) return false;
      }
  return true;
}

Integer reciprocal_product(const Line3& l1, const Line3& l2) {
  return l1.direction().dot(l2.moment()) + l2.direction().dot(l1.moment());
}

bool lines_coplanar(const Line3& l1, const Line3& l2) { return reciprocal_product(l1, l2) == 0; }

bool lines_parallel(const Line3& l1, const Line3& l2) {
  return exactly_zero(l1.direction().cross(l2.direction()));
}

bool lines_parallel(const Line2& l1, const Line2& l2) { return l1.a() * l2.b() == l2.a() * l1.b(); }

Plane plane_span(const Line3& l1, const Line3& l2) {
  if (l1 == l2) throw std::invalid_argument("plane_span: identical lines");
  if (!lines_coplanar(l1, l2)) throw std::invalid_argument("plane_span: skew lines");
  const Point3 b1 = l1.base_point();
  const Vector3<Rational> d1 = as_rational(l1.direction());
  Vector3<Rational> n;
  if (lines_parallel(l1, l2))
    n = d1.cross(l2.base_point() - b1);
  else
    n = d1.cross(as_rational(l2.direction()));
  return Plane::from_coefficients(n, n.dot(b1));
}

std::optional<Point2> intersect(const Line2& l1, const Line2& l2) {
  const Integer det = l1.a() * l2.b() - l2.a() * l1.b();
  if (det == 0) return std::nullopt;
  return Point2{Rational(l1.c() * l2.b() - l2.c() * l1.b(), det), Rational(l1.a() * l2.c() - l2.a() * l1.c(), det)};
}

std::optional<Point3> intersect(const Line3& l1, const Line3& l2) {
  if (!lines_coplanar(l1, l2) || lines_parallel(l1, l2)) return std::nullopt;
  const Point3 b1 = l1.base_point();
  const Vector3<Rational> d1 = as_rational(l1.direction());
  const Vector3<Rational> d2 = as_rational(l2.direction());
  const Vector3<Rational> n = d1.cross(d2);
  const Rational t = (as_rational(l2.moment()) - b1.cross(d2)).dot(n) / n.squaredNorm();
  return Point3(b1 + t * d1);
}

Polynomial<Rational> restrict_to_line(const Polynomial3<Rational>& f, const Line3& l) {
  return f.restrict_to_line(l.base_point(), as_rational(l.direction()));
}

Polynomial<Rational> restrict_to_line(const Quadric& f, const Line3& l) {
  return restrict_to_line(f.polynomial(), l);
}

std::string format_point(const Point2& p) { return "(" + p(0).str() + ", " + p(1).str() + ")"; }

std::string format_point(const Point3& p) {
  return "(" + p(0).str() + ", " + p(1).str() + ", " + p(2).str() + ")";
}

}  // namespace incidence_lab
