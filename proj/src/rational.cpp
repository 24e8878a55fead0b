#include "incidence_lab/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace incidence_lab {

namespace {

const __mpz_struct* raw(const Integer& z) { return z.backend().data(); }

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.backend().data(), raw(a), raw(b));
  return r;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.backend().data(), raw(a), raw(b));
  return r;
}

std::string to_string(const Integer& z) { return z.str(); }

std::string to_string(const Rational& q) { return num(q).str() + "/" + den(q).str(); }

Integer parse_integer(std::string_view text) {
  if (!all_digits(text)) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  std::string s(text);
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s);
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer n = parse_integer(text.substr(0, slash));
  auto dtext = text.substr(slash + 1);
  if (!dtext.empty() && dtext[0] == '-')
    throw std::invalid_argument("negative denominator: '" + std::string(text) + "'");
  Integer d = parse_integer(dtext);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  return Rational(n, d);
}

Integer iroot(const Integer& n, unsigned k) {
  if (n < 0) throw std::domain_error("iroot of a negative integer");
  if (k == 0) throw std::domain_error("iroot with k = 0");
  Integer r;
  mpz_root(r.backend().data(), raw(n), k);
  return r;
}

std::optional<Integer> exact_root(const Integer& n, unsigned k) {
  if (n < 0) return std::nullopt;
  Integer r;
  if (mpz_root(r.backend().data(), raw(n), k) != 0) return r;
  return std::nullopt;
}

Integer ceil_root(const Integer& n, unsigned k) {
  if (n <= 0) return Integer(0);
  Integer r = iroot(n, k);
  if (pow(r, k) < n) ++r;
  return r;
}

Integer pow(const Integer& base, unsigned exponent) {
  Integer r;
  mpz_pow_ui(r.backend().data(), raw(base), exponent);
  return r;
}

Rational pow(const Rational& base, unsigned exponent) {
  return Rational(pow(num(base), exponent), pow(den(base), exponent));
}

std::uint64_t stable_hash(const Integer& z) {
  const auto* p = raw(z);
  std::uint64_t h = hash_mix(0x51ed2701f3a5c9b7ULL, static_cast<std::uint64_t>(p->_mp_size));
  const int limbs = p->_mp_size < 0 ? -p->_mp_size : p->_mp_size;
  for (int i = 0; i < limbs; ++i) h = hash_mix(h, static_cast<std::uint64_t>(p->_mp_d[i]));
  return h;
}

std::uint64_t stable_hash(const Rational& q) {
  return hash_mix(stable_hash(num(q)), stable_hash(den(q)));
}

std::optional<std::int64_t> to_int64(const Integer& z) {
  if (!mpz_fits_slong_p(raw(z))) return std::nullopt;
  return static_cast<std::int64_t>(mpz_get_si(raw(z)));
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace incidence_lab
