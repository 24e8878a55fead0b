#pragma once

#include <cstdint>
#include <limits>

#include "incidence_lab/rational.hpp"

namespace incidence_lab {

/// Stream identifiers. Every consumer of randomness draws from its own stream
/// derived from the experiment seed, so adding draws in one place never
/// shifts the values seen elsewhere.
enum class Stream : std::uint64_t {
  points = 0xA,    // point keep/drop decisions
  lines = 0xB,     // line keep/drop decisions
  trim = 0xC,      // randomized trimming fallback
  attempt = 0xD,   // per-retry seeds of the no-clique recipes
  search = 0xE,    // numeric polynomial search restarts
  sample = 0xF,    // test-data generation
  shear = 0x10,    // pruner input perturbation
};

/// SplitMix64. Small, seedable and splittable; split() derives an
/// independent generator by hashing the parent seed with a stream id.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed() const { return state_; }

  SplitMix64 split(std::uint64_t stream) const { return SplitMix64(hash_mix(state_, stream)); }
  SplitMix64 split(Stream stream) const { return split(static_cast<std::uint64_t>(stream)); }

  /// Uniform in [0, bound), unbiased (rejection on the top partial block).
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal();

  /// True with probability exactly q, for rational 0 <= q <= 1.
  bool bernoulli(const Rational& q);

 private:
  std::uint64_t state_;
};

}  // namespace incidence_lab
