#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "incidence_lab/arrangement.hpp"

namespace incidence_lab {

/// Derived parameters of a randomized clique-free construction.
///
/// The formula sizes are real numbers; the generator is built at the
/// smallest valid size at or above them, and q is the formula value (exact
/// when rational, otherwise floored to a multiple of 2^-32).
struct RecipeParams {
  int k = 4;
  std::int64_t m = 0;  // target point count
  std::int64_t n = 0;  // target line count
  double point_size_formula = 0;  // N (2D) or M (3D) before rounding
  double line_size_formula = 0;   // N (2D and 3D)
  std::int64_t generator_points = 0;
  std::int64_t generator_lines = 0;
  Rational q;
  bool q_exact = true;
};

RecipeParams no_clique_params_2d(std::int64_t n, int k);
RecipeParams no_clique_params_3d(std::int64_t m, std::int64_t n, int k);

struct AttemptRecord {
  std::uint64_t seed = 0;
  std::size_t points = 0;
  std::size_t lines = 0;
  bool x1 = false;                // enough well-connected points
  bool x2 = false;                // sample sizes inside the window
  bool x3 = false;                // no k-clique in general position
  std::optional<bool> x4;         // 3D: coplanar families small
  std::optional<bool> trimmed;    // set once events hold
};

struct RecipeDiagnostics {
  RecipeParams params;
  std::vector<AttemptRecord> attempts;
  std::int64_t sample_incidences = 0;
  std::int64_t output_incidences = 0;
  std::string trim_method;  // "greedy" or "random"
  std::optional<std::int64_t> max_coplanar;  // 3D, of the accepted sample
};

template <int Dim>
struct RecipeResult {
  Arrangement<Dim> arrangement;
  Arrangement<Dim> sample;  // the accepted raw sample
  RecipeDiagnostics diagnostics;
};

struct RecipeOptions {
  std::size_t retry_cap = 1000;
  std::size_t trim_retries = 1000;
  std::optional<Rational> q_override;
};

class RetryExhausted : public std::runtime_error {
 public:
  RetryExhausted(std::string event, std::size_t attempts);
  const std::string& failing_event() const { return event_; }

 private:
  std::string event_;
};

/// Seed of the given attempt, derived from the experiment seed.
std::uint64_t attempt_seed(std::uint64_t seed, std::size_t attempt);

/// The raw sample of one attempt: the generator subsampled with q.
Arrangement2 sample_no_clique_2d(const RecipeParams& p, std::uint64_t seed);
Arrangement3 sample_no_clique_3d(const RecipeParams& p, std::uint64_t seed);

RecipeResult<2> build_no_clique_2d(std::int64_t n, int k, std::uint64_t seed, const RecipeOptions& opts = {});
RecipeResult<3> build_no_clique_3d(std::int64_t m, std::int64_t n, int k, std::uint64_t seed,
                                   const RecipeOptions& opts = {});

}  // namespace incidence_lab
