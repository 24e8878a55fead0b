#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace incidence_lab {

namespace mp = boost::multiprecision;

// Expression templates are disabled so that `auto` and Eigen's scalar
// plumbing always see concrete values.
using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

inline Integer num(const Rational& q) { return mp::numerator(q); }
inline Integer den(const Rational& q) { return mp::denominator(q); }

inline int sign(const Integer& x) { return x.sign(); }
inline int sign(const Rational& x) { return x.sign(); }

inline bool is_integral(const Rational& q) { return den(q) == 1; }

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// Formats as `num/den`; the denominator is always written, even when it is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Accepts `num/den` or a bare integer. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

/// Floor of the k-th root of a non-negative integer.
Integer iroot(const Integer& n, unsigned k);
/// Exact k-th root, if one exists.
std::optional<Integer> exact_root(const Integer& n, unsigned k);
/// Smallest r >= 0 with r^k >= n.
Integer ceil_root(const Integer& n, unsigned k);

Integer pow(const Integer& base, unsigned exponent);
Rational pow(const Rational& base, unsigned exponent);

/// Platform-stable 64-bit hashes over limb data (used for hashing and for
/// seeding per-element random decisions, so they must not depend on
/// std::hash).
std::uint64_t stable_hash(const Integer& z);
std::uint64_t stable_hash(const Rational& q);

inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over the running state
  std::uint64_t x = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Returns the value as int64 when it fits.
std::optional<std::int64_t> to_int64(const Integer& z);

double to_double(const Rational& q);

}  // namespace incidence_lab
