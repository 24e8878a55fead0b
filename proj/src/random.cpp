#include "incidence_lab/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace incidence_lab {

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below(0)");
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit && limit != 0);
  return x % bound;
}

double SplitMix64::normal() {
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool SplitMix64::bernoulli(const Rational& q) {
  if (q < 0 || q > 1) throw std::invalid_argument("bernoulli: probability outside [0, 1]");
  if (q == 0) return false;
  if (q == 1) return true;
  const Integer d = den(q);
  if (auto small = to_int64(d)) {
    return below(static_cast<std::uint64_t>(*small)) < static_cast<std::uint64_t>(*to_int64(num(q)));
  }
  // Compare a uniform binary expansion against q, 64 bits at a time.
  const Rational scale = Rational(pow(Integer(2), 64));
  Rational rest = q;
  while (true) {
    rest *= scale;
    const Integer digit = num(rest) / den(rest);
    rest -= Rational(digit);
    const Integer draw = Integer((*this)());
    if (draw < digit) return true;
    if (draw > digit) return false;
  }
}

}  // namespace incidence_lab
