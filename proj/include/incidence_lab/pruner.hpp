#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "incidence_lab/geometry.hpp"

namespace incidence_lab {

/// One split of a 4-subset of class indices (0-based) into two nonempty groups.
struct SplitPair {
  std::vector<int> a;
  std::vector<int> b;
  friend bool operator==(const SplitPair&, const SplitPair&) = default;
};

/// Every 4-subset in lexicographic order, each followed by its 7 splits; the
/// group `a` always holds the smallest index of the subset.
std::vector<SplitPair> pair_schedule(int k);

class NoBisectingPlane : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A plane leaving at most half of each set in either open half-space.
/// Tries planes through one point of each set in lexicographic order
/// (collinear triples skipped), then planes through a pair of points that
/// contain a coordinate direction.
Plane ham_sandwich_3sets(std::span<const Point3> s1, std::span<const Point3> s2, std::span<const Point3> s3);

/// Both open sides of `plane` hold at most half of `points`.
bool bisects(const Plane& plane, std::span<const Point3> points);

enum class StepCase {
  plain,   // the bisecting plane itself
  offset,  // a parallel copy shifted past the concentrated class
  tilt,    // a slightly rotated copy assigning on-plane points per group
};

std::string to_string(StepCase c);

struct SeparationCertificate {
  std::size_t step = 0;
  Plane plane = Plane::from_coefficients(Vector3<Rational>::UnitZ(), Rational(0));
  int a_side = 1;  // strict side (sign of plane.evaluate) holding the classes of `split.a`
  SplitPair split;
  StepCase kind = StepCase::plain;
  std::vector<int> concentrated;    // indices with at least a sixth of their points on the cut
  std::vector<std::size_t> before;  // class sizes, ordered as the sorted union of the split
  std::vector<std::size_t> after;

  /// Sign of the strict side the given class must occupy (0 if not in the split).
  int side_of(int cls) const;
};

class MultiConcentration : public std::runtime_error {
 public:
  MultiConcentration(std::size_t step, std::vector<int> indices);
  std::size_t step() const { return step_; }
  const std::vector<int>& indices() const { return indices_; }

 private:
  std::size_t step_;
  std::vector<int> indices_;
};

struct PrunerState {
  std::vector<std::vector<Point3>> classes;
  std::size_t step = 0;
  std::vector<SeparationCertificate> history;
};

/// Executes one split on the state, shrinking only the four classes involved,
/// and records the certificate. Each involved class keeps at least a third.
SeparationCertificate prune_step(PrunerState& state, const SplitPair& split);

struct PruneOptions {
  /// Apply an exact random unimodular shear before pruning; results and
  /// certificates are mapped back to the input coordinates.
  std::optional<std::uint64_t> perturb_seed;
};

struct PruneResult {
  std::vector<std::vector<Point3>> classes;
  std::vector<SeparationCertificate> certificates;
  std::vector<int> steps_per_class;  // s_i: schedule steps whose split involves class i
};

PruneResult prune_all(std::vector<std::vector<Point3>> classes, const PruneOptions& opts = {});

/// Exact strict-side check of every point of every class in the split.
bool verify_separation(const SeparationCertificate& cert, std::span<const std::vector<Point3>> classes);

}  // namespace incidence_lab
