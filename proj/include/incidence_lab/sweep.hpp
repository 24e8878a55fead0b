#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "incidence_lab/report_io.hpp"

namespace incidence_lab {

enum class SweepFamily { planar_grid, spatial_grid, no_clique_2d, no_clique_3d };

std::string to_string(SweepFamily f);
SweepFamily parse_sweep_family(const std::string& text);

struct SweepSpec {
  SweepFamily family = SweepFamily::planar_grid;
  std::vector<std::int64_t> sizes;  // n for planar families, m = n for spatial ones
  int repetitions = 1;
  std::uint64_t seed = 0;
  int k = 4;                        // no-clique families
  bool coplanar = false;            // spatial: also report the largest coplanar family
  unsigned threads = 0;             // 0: default_thread_count()
};

/// Least squares fit of log y = slope * log x + intercept.
struct FitResult {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square of the log residuals
  std::size_t samples = 0;
};

FitResult fit_loglog(std::span<const double> x, std::span<const double> y);

struct SweepOutcome {
  std::vector<std::int64_t> sizes;  // per row
  std::vector<ReportRow> rows;      // in size order, then repetition
  FitResult fit;                    // log total against log size
};

/// Validates every size before running any. Throws std::invalid_argument
/// naming the first offending size.
SweepOutcome run_sweep(const SweepSpec& spec);

}  // namespace incidence_lab
