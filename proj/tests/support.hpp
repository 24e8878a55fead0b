#pragma once

#include <cstdint>
#include <vector>

#include "incidence_lab/arrangement.hpp"
#include "incidence_lab/random.hpp"

namespace testing {

using namespace incidence_lab;

inline Rational q(std::int64_t a, std::int64_t b = 1) { return Rational(Integer(a), Integer(b)); }

inline Point2 pt(std::int64_t x, std::int64_t y) { return Point2{q(x), q(y)}; }
inline Point3 pt(std::int64_t x, std::int64_t y, std::int64_t z) { return Point3{q(x), q(y), q(z)}; }

inline Vector3<Rational> vec(std::int64_t x, std::int64_t y, std::int64_t z) { return Vector3<Rational>{q(x), q(y), q(z)}; }

inline Rational small_rational(SplitMix64& rng, std::int64_t range, std::int64_t max_den) {
  return q(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * range + 1))) - range,
           static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_den))) + 1);
}

template <int Dim>
Point<Dim> random_point(SplitMix64& rng, std::int64_t range, std::int64_t max_den = 1) {
  Point<Dim> p;
  for (int i = 0; i < Dim; ++i) p(i) = small_rational(rng, range, max_den);
  return p;
}

/// Lines through pairs of sampled points, so that incidences are common.
template <int Dim>
Arrangement<Dim> random_arrangement(std::uint64_t seed, std::size_t m, std::size_t n, std::int64_t range = 3) {
  SplitMix64 rng(seed);
  std::vector<Point<Dim>> pts;
  for (std::size_t i = 0; i < m; ++i) pts.push_back(random_point<Dim>(rng, range));
  std::vector<Line<Dim>> lines;
  while (lines.size() < n) {
    auto a = random_point<Dim>(rng, range), b = random_point<Dim>(rng, range);
    if (a == b) continue;
    lines.push_back(Line<Dim>::through(a, b));
  }
  return make_arrangement(std::move(pts), std::move(lines));
}

}  // namespace testing
