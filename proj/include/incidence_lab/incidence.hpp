#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "incidence_lab/arrangement.hpp"

namespace incidence_lab {

struct IncidenceReport {
  std::int64_t total = 0;
  std::vector<std::int64_t> point_degrees;
  std::vector<std::int64_t> line_counts;
  /// Ascending point indices per line; filled only on request.
  std::vector<std::vector<std::uint32_t>> line_points;

  friend bool operator==(const IncidenceReport&, const IncidenceReport&) = default;
};

struct IncidenceOptions {
  bool collect_line_points = false;
  unsigned threads = 0;  // 0: default_thread_count()
};

/// Tests every point-line pair.
template <int Dim>
IncidenceReport count_incidences_oracle(const Arrangement<Dim>& a, const IncidenceOptions& opts = {});

/// Buckets lines by primitive direction and indexes each bucket by the
/// line's offset (2D) or moment (3D); every point probes one entry per
/// bucket. Falls back to the oracle when there are more than |L|/2
/// directions.
template <int Dim>
IncidenceReport count_incidences_fast(const Arrangement<Dim>& a, const IncidenceOptions& opts = {});

template <int Dim>
bool fast_path_applies(const Arrangement<Dim>& a);

template <int Dim>
struct RichPointSet {
  int r = 2;
  std::vector<Point<Dim>> points;          // sorted by PointLess
  std::vector<std::int64_t> multiplicity;  // lines through each point
};

/// Points lying on at least r of the lines, among all pairwise crossings.
template <int Dim>
RichPointSet<Dim> rich_points_of_lines(std::span<const Line<Dim>> lines, int r);

struct CoplanarReport {
  std::map<Plane, std::int64_t> families;  // planes holding >= 2 lines
  std::int64_t max_family = 0;             // 1 for a nonempty set without coplanar pairs
};

CoplanarReport max_coplanar_lines(std::span<const Line3> lines);

enum class BoundKind { szemeredi_trotter, guth_katz, rich };

std::string to_string(BoundKind kind);
BoundKind parse_bound_kind(const std::string& text);

struct BoundParams {
  std::optional<int> r;
};

struct BoundTerm {
  std::string name;
  double value = 0;
};

/// Left-hand side against each right-hand term with the constant dropped.
/// The ratio is lhs / (largest term), 0 when every term is 0.
struct BoundReport {
  BoundKind kind = BoundKind::szemeredi_trotter;
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::int64_t total = 0;
  std::optional<std::int64_t> max_coplanar;
  std::optional<int> r;
  std::optional<std::int64_t> rich_count;
  double lhs = 0;
  std::vector<BoundTerm> terms;
  std::size_t dominant = 0;
  double ratio = 0;
};

/// Throws std::invalid_argument for GK/RICH in the plane, or RICH without r >= 2.
template <int Dim>
BoundReport check_bound(const Arrangement<Dim>& a, BoundKind kind, const BoundParams& params = {});

}  // namespace incidence_lab
