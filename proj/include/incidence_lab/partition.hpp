#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "incidence_lab/geometry.hpp"

namespace incidence_lab {

inline constexpr std::int64_t kBoundary = -1;

/// One bisection round: a polynomial and the classes it was asked to halve.
struct PartitionRound {
  Polynomial3<Rational> polynomial;
  int degree = 0;
  std::size_t classes_bisected = 0;
  std::size_t attempts = 0;
};

struct PartitionResult {
  int D = 1;
  Polynomial3<Rational> f;  // product of the round polynomials
  int degree = 0;
  std::vector<PartitionRound> rounds;
  /// Cell id (index into cell_signs) or kBoundary, per input point.
  std::vector<std::int64_t> point_labels;
  std::vector<std::vector<int>> cell_signs;  // sign of each round polynomial
  std::map<std::int64_t, std::int64_t> cell_counts;
  std::int64_t num_cells = 0;
  std::int64_t population_target = 0;  // ceil(|P| / D^3)
  /// False when the degree budget ran out before every class met the target.
  bool conforming = false;
};

struct PartitionOptions {
  std::size_t attempts_per_round = 400;  // random restarts at the last admissible degree
  int newton_steps = 60;                 // Gauss-Newton steps per smoothing level
  int coefficient_bits = 60;             // snapped coefficients: multiples of 2^-bits times the largest
  bool build_product = true;  // expand f explicitly
};

class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterated polynomial bisection. Each round halves every class above the
/// population target with a polynomial of the least degree whose monomial
/// count minus one reaches the number of such classes; the first round
/// always halves the whole set. Stops at the target or when the next round
/// would push deg(f) past 4D.
PartitionResult partition(std::span<const Point3> points, int D, std::uint64_t seed, const PartitionOptions& opts = {});

struct PartitionConformance {
  double cells_constant = 0;       // num_cells / D^3
  double population_constant = 0; // max population * D^3 / |P|
  std::int64_t max_population = 0;
  std::int64_t boundary_points = 0;
  bool conserved = false;          // sum of populations + boundary = |P|
  bool within_budget = false;      // deg(f) <= 4D
  bool conforming = false;
};

/// Recomputes every label from exact signs. Throws std::logic_error on any
/// inconsistency with the stored result.
PartitionConformance verify_partition(std::span<const Point3> points, const PartitionResult& result);

struct CrossingReport {
  Line3 line;
  int root_count = 0;
  int cells_crossed_upper = 0;  // root_count + 1
};

class LineInVariety : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distinct real roots of f restricted to the line (parameterized from its
/// base point along its integer direction) inside the closed range.
CrossingReport line_crossings(const Polynomial3<Rational>& f, const Line3& line,
                              const ParameterRange<Rational>& range = {});
/// Same, restricting each factor separately and multiplying.
CrossingReport line_crossings(std::span<const Polynomial3<Rational>> factors, const Line3& line,
                              const ParameterRange<Rational>& range = {});
CrossingReport line_crossings(const PartitionResult& result, const Line3& line,
                              const ParameterRange<Rational>& range = {});

}  // namespace incidence_lab
