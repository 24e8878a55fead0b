#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <unordered_set>
#include <variant>
#include <vector>

#include "incidence_lab/geometry.hpp"

namespace incidence_lab {

/// A finite point set and a finite line set in R^Dim. Members are canonical
/// and pairwise distinct.
template <int Dim>
struct Arrangement {
  static constexpr int dim = Dim;
  std::vector<Point<Dim>> points;
  std::vector<Line<Dim>> lines;

  std::size_t m() const { return points.size(); }
  std::size_t n() const { return lines.size(); }

  friend bool operator==(const Arrangement&, const Arrangement&) = default;
};

using Arrangement2 = Arrangement<2>;
using Arrangement3 = Arrangement<3>;
using AnyArrangement = std::variant<Arrangement2, Arrangement3>;

struct DedupStats {
  std::size_t points_removed = 0;
  std::size_t lines_removed = 0;
};

/// Drops repeated members, keeping first occurrences in input order.
template <int Dim>
Arrangement<Dim> make_arrangement(std::vector<Point<Dim>> points, std::vector<Line<Dim>> lines,
                                  DedupStats* stats = nullptr) {
  auto dedup = [](auto& items) {
    using T = typename std::decay_t<decltype(items)>::value_type;
    std::unordered_set<T, GeometryHash> seen;
    seen.reserve(items.size());
    std::size_t kept = 0;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (seen.insert(items[i]).second) {
        if (kept != i) items[kept] = std::move(items[i]);
        ++kept;
      }
    const std::size_t removed = items.size() - kept;
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(kept), items.end());
    return removed;
  };
  Arrangement<Dim> a;
  a.points = std::move(points);
  a.lines = std::move(lines);
  const std::size_t rp = dedup(a.points);
  const std::size_t rl = dedup(a.lines);
  if (stats) *stats = {rp, rl};
  return a;
}

/// Ranges of the spatial grid: points (a, b, c) with a <= x_range and
/// b, c <= offset_range; lines y = a x + b, z = c x + d with a, c <= slope_range
/// and b, d <= offset_range.
struct SpatialGridShape {
  std::int64_t x_range;       // m^{1/2} / n^{1/4}
  std::int64_t offset_range;  // m^{1/4} n^{1/8}
  std::int64_t slope_range;   // n^{3/8} / m^{1/4}
};

/// Validates (m, n) for the spatial grid. Throws std::invalid_argument naming
/// the exponent that is not a positive integer.
SpatialGridShape spatial_grid_shape(std::int64_t m, std::int64_t n);

/// Points {(a, b) : 1 <= a <= n^{1/3}, 1 <= b <= n^{2/3}} and lines
/// {y = a x + b} over the same ranges. n must be a perfect cube.
Arrangement2 gen_planar_grid(std::int64_t n);

Arrangement3 gen_spatial_grid(std::int64_t m, std::int64_t n);

/// Keeps each point and each line independently with probability q. The
/// decision for a member depends only on (seed, stream, canonical member), so
/// the result is reproducible and independent of input order. Points use
/// Stream::points, lines Stream::lines.
template <int Dim>
Arrangement<Dim> random_subsample(const Arrangement<Dim>& a, const Rational& q, std::uint64_t seed);

/// Distinct points with coordinates u/v, |u| <= range and 1 <= v <= max_den,
/// drawn from Stream::sample.
std::vector<Point3> random_rational_points(std::size_t count, std::uint64_t seed, std::int64_t range = 1000,
                                           std::int64_t max_den = 16);

// ---- text format -------------------------------------------------------
//
//   dim=2|3 points=m lines=n
//   P x/y u/v [s/t]
//   L2 a b c
//   L3 d1 d2 d3 m1 m2 m3
//
// Blank lines and lines starting with '#' are ignored on input.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ReadResult {
  AnyArrangement arrangement;
  DedupStats duplicates;
};

ReadResult read_arrangement(std::istream& in);
ReadResult read_arrangement(const std::filesystem::path& path);

template <int Dim>
void write_arrangement(const Arrangement<Dim>& a, std::ostream& out);
void write_arrangement(const AnyArrangement& a, std::ostream& out);
void write_arrangement(const AnyArrangement& a, const std::filesystem::path& path);

}  // namespace incidence_lab
