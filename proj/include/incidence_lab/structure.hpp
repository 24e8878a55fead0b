#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "incidence_lab/arrangement.hpp"

namespace incidence_lab {

/// Collinearity graph: u ~ v iff some line of L carries both points.
template <int Dim>
struct CliqueGraph {
  std::vector<Point<Dim>> points;
  std::vector<std::vector<std::uint32_t>> adjacency;  // sorted neighbour lists

  std::size_t vertex_count() const { return points.size(); }
  std::size_t edge_count() const;
  bool adjacent(std::uint32_t u, std::uint32_t v) const;
  /// First line (lowest index) through both endpoints; u != v must be adjacent.
  std::uint32_t witness(std::uint32_t u, std::uint32_t v) const;

  std::unordered_map<std::uint64_t, std::uint32_t> witnesses;  // key u * |V| + v, u < v
};

template <int Dim>
CliqueGraph<Dim> build_clique_graph(const Arrangement<Dim>& a);

struct CliqueResult {
  std::vector<std::uint32_t> members;  // ascending
  bool general_position = false;
  /// Witness line of each pair (members[i], members[j]), i < j, in
  /// lexicographic pair order.
  std::vector<std::uint32_t> witnesses;

  friend bool operator==(const CliqueResult&, const CliqueResult&) = default;
};

struct CliqueOptions {
  bool require_gp = false;
  std::size_t limit = 0;  // 0: unlimited
  /// Skip branches whose partial clique already fails general position.
  /// Sound because every subset of a set in general position is in general
  /// position; off by default.
  bool prune_non_gp = false;
  unsigned threads = 1;
};

/// k-cliques in lexicographic order of their sorted member lists.
template <int Dim>
std::vector<CliqueResult> find_k_cliques(const CliqueGraph<Dim>& g, int k, const CliqueOptions& opts = {});

struct GridResult {
  std::vector<std::uint32_t> first;   // L1, ascending
  std::vector<std::uint32_t> second;  // L2, ascending
  /// Point index of first[i] ∩ second[j] at i * k + j.
  std::vector<std::uint32_t> intersection_points;

  friend bool operator==(const GridResult&, const GridResult&) = default;
};

/// k-grids, each reported once with min(L1) < min(L2), in lexicographic
/// order of (L1, L2).
template <int Dim>
std::vector<GridResult> find_k_grids(const Arrangement<Dim>& a, int k, std::size_t limit = 0);

/// Basis of the quadrics containing the three lines.
std::vector<Quadric> regulus_quadric(const Line3& l1, const Line3& l2, const Line3& l3);

/// Indices of the lines contained in Z(f).
std::vector<std::size_t> lines_on_quadric(std::span<const Line3> lines, const Quadric& f);

}  // namespace incidence_lab
