#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace incidence_lab {

/// Dense univariate polynomial, coefficients stored low degree first.
/// Templated on the scalar so the same code serves exact (Rational) and
/// numeric (double) callers; only exact scalars give exact root counts.
template <class Scalar>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const Scalar& c) { return Polynomial(std::vector<Scalar>{c}); }
  static Polynomial linear(const Scalar& c0, const Scalar& c1) {
    return Polynomial(std::vector<Scalar>{c0, c1});
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Scalar>& coefficients() const { return c_; }
  Scalar coefficient(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Scalar(0);
  }
  const Scalar& leading() const { return c_.back(); }

  Scalar operator()(const Scalar& t) const {
    Scalar acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  Polynomial derivative() const {
    std::vector<Scalar> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Scalar(static_cast<long>(i)));
    return Polynomial(std::move(d));
  }

  Polynomial monic() const {
    if (is_zero()) return *this;
    Polynomial r = *this;
    const Scalar lead = leading();
    for (auto& x : r.c_) x /= lead;
    return r;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Scalar> r(std::max(a.c_.size(), b.c_.size()), Scalar(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Scalar> r(a.c_.size() + b.c_.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }

  friend Polynomial operator*(const Scalar& s, const Polynomial& p) {
    std::vector<Scalar> r = p.c_;
    for (auto& x : r) x *= s;
    return Polynomial(std::move(r));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Quotient and remainder; the divisor must be nonzero.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Scalar> rem = a.c_;
    const int db = b.degree();
    if (a.degree() < db) return {Polynomial(), a};
    std::vector<Scalar> quot(a.degree() - db + 1, Scalar(0));
    for (int i = a.degree(); i >= db; --i) {
      if (rem[i] == Scalar(0)) continue;
      const Scalar f = rem[i] / b.leading();
      quot[i - db] = f;
      for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.c_[j];
    }
    rem.resize(db);
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Scalar(0)) c_.pop_back();
  }
  std::vector<Scalar> c_;
};

/// Monic gcd (zero if both inputs are zero).
template <class Scalar>
Polynomial<Scalar> gcd(Polynomial<Scalar> a, Polynomial<Scalar> b) {
  while (!b.is_zero()) {
    auto r = Polynomial<Scalar>::divmod(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

/// p / gcd(p, p'), made monic.
template <class Scalar>
Polynomial<Scalar> squarefree_part(const Polynomial<Scalar>& p) {
  if (p.degree() <= 0) return p.monic();
  auto g = gcd(p, p.derivative());
  return Polynomial<Scalar>::divmod(p, g).first.monic();
}

template <class Scalar>
std::vector<Polynomial<Scalar>> sturm_sequence(const Polynomial<Scalar>& p) {
  std::vector<Polynomial<Scalar>> seq;
  if (p.is_zero()) return seq;
  seq.push_back(p);
  auto d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(d);
  while (true) {
    auto r = Polynomial<Scalar>::divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    // Positive rescaling keeps sign variations intact and bounds growth.
    const Scalar lead = r.leading();
    seq.push_back((lead > 0 ? Scalar(-1) : Scalar(1)) / lead * r);
  }
  return seq;
}

/// Closed parameter interval; a missing bound means unbounded on that side.
template <class Scalar>
struct ParameterRange {
  std::optional<Scalar> lo;
  std::optional<Scalar> hi;
};

namespace detail {

template <class Scalar>
int sign_variations(const std::vector<Polynomial<Scalar>>& seq, const std::optional<Scalar>& at,
                    int infinity_side) {
  int variations = 0;
  int last = 0;
  for (const auto& q : seq) {
    int s;
    if (at) {
      const Scalar v = q(*at);
      s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    } else {
      s = q.leading() > 0 ? 1 : -1;
      if (infinity_side < 0 && q.degree() % 2 == 1) s = -s;
    }
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

}  // namespace detail

/// Number of distinct real roots of a nonzero polynomial inside the range.
template <class Scalar>
int count_distinct_real_roots(const Polynomial<Scalar>& p, const ParameterRange<Scalar>& range = {}) {
  if (p.is_zero()) throw std::domain_error("root count of the zero polynomial");
  if (range.lo && range.hi && *range.hi < *range.lo) return 0;
  const auto sq = squarefree_part(p);
  if (sq.degree() <= 0) return 0;
  const auto seq = sturm_sequence(sq);
  int count = detail::sign_variations(seq, range.lo, -1) - detail::sign_variations(seq, range.hi, +1);
  if (range.lo && sq(*range.lo) == Scalar(0)) ++count;
  return count;
}

using Exponent3 = std::array<int, 3>;

/// Monomials x^a y^b z^c with a+b+c <= degree, ordered by descending total
/// degree and then lexicographically descending (x^2, xy, xz, y^2, ... , 1).
std::vector<Exponent3> monomials_up_to(int degree);

/// Sparse trivariate polynomial keyed by exponent triple (sorted
/// lexicographically, which is also the serialization order).
template <class Scalar>
class Polynomial3 {
 public:
  using Terms = std::map<Exponent3, Scalar>;

  Polynomial3() = default;
  explicit Polynomial3(Terms terms) : terms_(std::move(terms)) { prune(); }

  static Polynomial3 constant(const Scalar& c) { return Polynomial3(Terms{{{0, 0, 0}, c}}); }
  static Polynomial3 variable(int axis) {
    Exponent3 e{0, 0, 0};
    e.at(axis) = 1;
    return Polynomial3(Terms{{e, Scalar(1)}});
  }
  static Polynomial3 from_basis(std::span<const Scalar> coeffs, std::span<const Exponent3> basis) {
    if (coeffs.size() != basis.size()) throw std::invalid_argument("basis size mismatch");
    Terms t;
    for (std::size_t i = 0; i < basis.size(); ++i) t[basis[i]] += coeffs[i];
    return Polynomial3(std::move(t));
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
  }
  Scalar coefficient(const Exponent3& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  template <class Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& p) const {
    const int d = std::max(degree(), 0);
    std::array<std::vector<Scalar>, 3> powers;
    for (int axis = 0; axis < 3; ++axis) {
      powers[axis].assign(d + 1, Scalar(1));
      for (int i = 1; i <= d; ++i) powers[axis][i] = powers[axis][i - 1] * Scalar(p(axis));
    }
    Scalar acc(0);
    for (const auto& [e, c] : terms_) acc += c * powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]];
    return acc;
  }

  /// Coefficients of t -> f(base + t * dir).
  template <class DerivedA, class DerivedB>
  Polynomial<Scalar> restrict_to_line(const Eigen::MatrixBase<DerivedA>& base,
                                      const Eigen::MatrixBase<DerivedB>& dir) const {
    const int d = std::max(degree(), 0);
    std::array<std::vector<Polynomial<Scalar>>, 3> powers;
    for (int axis = 0; axis < 3; ++axis) {
      const auto lin = Polynomial<Scalar>::linear(Scalar(base(axis)), Scalar(dir(axis)));
      powers[axis].push_back(Polynomial<Scalar>::constant(Scalar(1)));
      for (int i = 1; i <= d; ++i) powers[axis].push_back(powers[axis].back() * lin);
    }
    Polynomial<Scalar> acc;
    for (const auto& [e, c] : terms_)
      acc = acc + c * (powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]]);
    return acc;
  }

  /// Replaces x, y, z by the given polynomials.
  Polynomial3 substitute(const std::array<Polynomial3, 3>& images) const {
    const int d = std::max(degree(), 0);
    std::array<std::vector<Polynomial3>, 3> powers;
    for (int axis = 0; axis < 3; ++axis) {
      powers[axis].push_back(constant(Scalar(1)));
      for (int i = 1; i <= d; ++i) powers[axis].push_back(powers[axis].back() * images[axis]);
    }
    Polynomial3 acc;
    for (const auto& [e, c] : terms_) acc = acc + c * (powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]]);
    return acc;
  }

  friend Polynomial3 operator+(const Polynomial3& a, const Polynomial3& b) {
    Terms t = a.terms_;
    for (const auto& [e, c] : b.terms_) t[e] += c;
    return Polynomial3(std::move(t));
  }
  friend Polynomial3 operator-(const Polynomial3& a, const Polynomial3& b) {
    return a + Scalar(-1) * b;
  }
  friend Polynomial3 operator*(const Polynomial3& a, const Polynomial3& b) {
    Terms t;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) t[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
    return Polynomial3(std::move(t));
  }
  friend Polynomial3 operator*(const Scalar& s, const Polynomial3& p) {
    Terms t = p.terms_;
    for (auto& [e, c] : t) c *= s;
    return Polynomial3(std::move(t));
  }
  friend bool operator==(const Polynomial3& a, const Polynomial3& b) { return a.terms_ == b.terms_; }

 private:
  void prune() {
    std::erase_if(terms_, [](const auto& kv) { return kv.second == Scalar(0); });
  }
  Terms terms_;
};

}  // namespace incidence_lab
