#include "incidence_lab/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "incidence_lab/incidence.hpp"
#include "incidence_lab/random.hpp"
#include "incidence_lab/structure.hpp"

namespace incidence_lab {

namespace {

Integer ceil_div(const Integer& a, const Integer& b) { return (a + b - 1) / b; }

// base^{-2/e}: exact when base^2 is a perfect e-th power, else floored to a
// multiple of 2^-32.
std::pair<Rational, bool> inverse_root_power(const Integer& base, unsigned e) {
  const Integer sq = base * base;
  if (auto r = exact_root(sq, e)) return {Rational(Integer(1), *r), true};
  const Integer scale = pow(Integer(2), 32);
  const Integer floor_q = iroot(pow(scale, e) / sq, e);
  return {Rational(floor_q, scale), false};
}

std::int64_t checked(const Integer& z, const char* what) {
  auto v = to_int64(z);
  if (!v || *v > (std::int64_t(1) << 40)) throw std::invalid_argument(std::string(what) + " is too large");
  return *v;
}

}  // namespace

RetryExhausted::RetryExhausted(std::string event, std::size_t attempts)
    : std::runtime_error("retry cap of " + std::to_string(attempts) + " attempts exhausted; most frequent failing event: " +
                         event),
      event_(std::move(event)) {}

std::uint64_t attempt_seed(std::uint64_t seed, std::size_t attempt) {
  return hash_mix(hash_mix(seed, static_cast<std::uint64_t>(Stream::attempt)), attempt);
}

RecipeParams no_clique_params_2d(std::int64_t n, int k) {
  if (k < 4) throw std::invalid_argument("no-clique recipe: k must be at least 4");
  if (n < 1) throw std::invalid_argument("no-clique recipe: n must be positive");
  RecipeParams p;
  p.k = k;
  p.m = p.n = n;
  const Integer two_n(2 * n);
  const unsigned e = static_cast<unsigned>(k - 2);
  p.point_size_formula = p.line_size_formula = std::pow(2.0 * static_cast<double>(n), double(k) / (k - 2));
  // smallest cube t^3 with t^{3(k-2)} >= (2n)^k
  const Integer t = ceil_root(pow(two_n, static_cast<unsigned>(k)), 3 * e);
  p.generator_points = p.generator_lines = checked(t * t * t, "generator size");
  std::tie(p.q, p.q_exact) = inverse_root_power(two_n, e);
  return p;
}

RecipeParams no_clique_params_3d(std::int64_t m, std::int64_t n, int k) {
  if (k < 4) throw std::invalid_argument("no-clique recipe: k must be at least 4");
  if (m < 1 || n < 1) throw std::invalid_argument("no-clique recipe: m and n must be positive");
  if (m * m < n || m > n) throw std::invalid_argument("no-clique recipe: requires n^{1/2} <= m <= n");
  RecipeParams p;
  p.k = k;
  p.m = m;
  p.n = n;
  const Integer two_m(2 * m), two_n(2 * n);
  const unsigned e = static_cast<unsigned>(k - 2);
  const double dm = 2.0 * static_cast<double>(m), dn = 2.0 * static_cast<double>(n);
  p.point_size_formula = std::pow(dm, double(k) / (k - 2));
  p.line_size_formula = dn * std::pow(dm, 2.0 / (k - 2));
  // x range u with u^4 >= M^2/N, slope range v with v^8 >= N^3/M^2
  const Integer u = std::max(
      Integer(1), ceil_root(ceil_div(pow(two_m, 2 * k - 2), pow(two_n, e)), 4 * e));
  const Integer v = std::max(
      Integer(1), ceil_root(ceil_div(pow(two_n, 3 * e), pow(two_m, static_cast<unsigned>(2 * k - 6))), 8 * e));
  const Integer w = u * v;
  p.generator_points = checked(u * w * w, "generator point count");
  p.generator_lines = checked(v * v * w * w, "generator line count");
  std::tie(p.q, p.q_exact) = inverse_root_power(two_m, e);
  return p;
}

Arrangement2 sample_no_clique_2d(const RecipeParams& p, std::uint64_t seed) {
  return random_subsample(gen_planar_grid(p.generator_points), p.q, seed);
}

Arrangement3 sample_no_clique_3d(const RecipeParams& p, std::uint64_t seed) {
  return random_subsample(gen_spatial_grid(p.generator_points, p.generator_lines), p.q, seed);
}

namespace {

template <int Dim>
bool has_gp_clique(const Arrangement<Dim>& a, int k) {
  CliqueOptions opts;
  opts.require_gp = true;
  opts.limit = 1;
  return !find_k_cliques(build_clique_graph(a), k, opts).empty();
}

// X1: enough points of high degree, compared exactly.
bool event_x1(const RecipeParams& p, const IncidenceReport& rep, int dim) {
  const Rational q = p.q;
  std::int64_t count = 0;
  if (dim == 2) {
    const Integer t = *exact_root(Integer(p.generator_points), 3);
    for (auto deg : rep.point_degrees)
      if (Rational(4 * deg) >= q * Rational(t)) ++count;
    return Rational(4 * count) >= q * Rational(p.generator_points);
  }
  const Rational m2 = Rational(p.generator_points) * Rational(p.generator_points);
  const Rational n3 = pow(Rational(p.generator_lines), 3);
  for (auto deg : rep.point_degrees) {
    if (q == 0) {
      ++count;
      continue;
    }
    if (pow(Rational(4 * deg) / q, 4) * m2 >= n3) ++count;
  }
  return Rational(8 * count) >= q * Rational(p.generator_points);
}

bool in_window(std::size_t size, const Rational& q, std::int64_t total) {
  const Rational s(static_cast<std::int64_t>(size));
  const Rational mean = q * Rational(total);
  return 2 * s > mean && 2 * s < 3 * mean;
}

template <int Dim>
std::vector<std::uint32_t> top_by(const std::vector<std::int64_t>& score, std::size_t take) {
  std::vector<std::uint32_t> idx(score.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return score[a] > score[b]; });
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  return idx;
}

template <int Dim>
Arrangement<Dim> restrict_to(const Arrangement<Dim>& a, const std::vector<std::uint32_t>& pts,
                             const std::vector<std::uint32_t>& lns) {
  Arrangement<Dim> out;
  for (auto i : pts) out.points.push_back(a.points[i]);
  for (auto j : lns) out.lines.push_back(a.lines[j]);
  return out;
}

template <int Dim>
std::optional<std::pair<Arrangement<Dim>, std::string>> trim(const Arrangement<Dim>& a, const IncidenceReport& rep,
                                                             std::size_t m, std::size_t n, std::uint64_t seed,
                                                             std::size_t retries, std::int64_t& kept) {
  auto good = [&](const Arrangement<Dim>& t) {
    kept = count_incidences_fast(t).total;
    return 9 * kept >= rep.total;
  };
  auto greedy = restrict_to(a, top_by<Dim>(rep.point_degrees, m), top_by<Dim>(rep.line_counts, n));
  if (good(greedy)) return std::pair{std::move(greedy), std::string("greedy")};
  SplitMix64 rng(hash_mix(seed, static_cast<std::uint64_t>(Stream::trim)));
  std::vector<std::uint32_t> pi(a.m()), li(a.n());
  for (std::size_t r = 0; r < retries; ++r) {
    std::iota(pi.begin(), pi.end(), 0);
    std::iota(li.begin(), li.end(), 0);
    std::shuffle(pi.begin(), pi.end(), rng);
    std::shuffle(li.begin(), li.end(), rng);
    std::vector<std::uint32_t> ps(pi.begin(), pi.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<std::uint32_t> ls(li.begin(), li.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(ps.begin(), ps.end());
    std::sort(ls.begin(), ls.end());
    auto t = restrict_to(a, ps, ls);
    if (good(t)) return std::pair{std::move(t), std::string("random")};
  }
  return std::nullopt;
}

template <int Dim>
RecipeResult<Dim> run_recipe(RecipeParams params, std::uint64_t seed, const RecipeOptions& opts) {
  if (opts.q_override) {
    if (*opts.q_override < 0 || *opts.q_override > 1) throw std::invalid_argument("q override outside [0, 1]");
    params.q = *opts.q_override;
    params.q_exact = true;
  }
  RecipeResult<Dim> result;
  result.diagnostics.params = params;
  std::map<std::string, std::size_t> failures;
  for (std::size_t attempt = 0; attempt < opts.retry_cap; ++attempt) {
    AttemptRecord rec;
    rec.seed = attempt_seed(seed, attempt);
    Arrangement<Dim> sample;
    if constexpr (Dim == 2) sample = sample_no_clique_2d(params, rec.seed);
    else sample = sample_no_clique_3d(params, rec.seed);
    rec.points = sample.m();
    rec.lines = sample.n();
    const auto rep = count_incidences_fast(sample);
    rec.x1 = event_x1(params, rep, Dim);
    rec.x2 = in_window(sample.m(), params.q, params.generator_points) &&
             in_window(sample.n(), params.q, params.generator_lines) &&
             sample.m() >= static_cast<std::size_t>(params.m) && sample.n() >= static_cast<std::size_t>(params.n);
    rec.x3 = !has_gp_clique(sample, params.k);
    std::optional<std::int64_t> max_coplanar;
    if constexpr (Dim == 3) {
      max_coplanar = max_coplanar_lines(sample.lines).max_family;
      const Rational b(*max_coplanar);
      rec.x4 = b * b <= 4 * params.q * params.q * Rational(params.generator_lines);
    }
    const char* failed = !rec.x1 ? "X1" : !rec.x2 ? "X2" : !rec.x3 ? "X3" : (rec.x4 && !*rec.x4) ? "X4" : nullptr;
    if (failed) {
      ++failures[failed];
      result.diagnostics.attempts.push_back(rec);
      continue;
    }
    std::int64_t kept = 0;
    auto trimmed = trim<Dim>(sample, rep, static_cast<std::size_t>(params.m), static_cast<std::size_t>(params.n),
                             rec.seed, opts.trim_retries, kept);
    rec.trimmed = trimmed.has_value();
    result.diagnostics.attempts.push_back(rec);
    if (!trimmed) {
      ++failures["trim"];
      continue;
    }
    result.arrangement = std::move(trimmed->first);
    result.sample = std::move(sample);
    result.diagnostics.trim_method = trimmed->second;
    result.diagnostics.sample_incidences = rep.total;
    result.diagnostics.output_incidences = kept;
    result.diagnostics.max_coplanar = max_coplanar;
    return result;
  }
  std::string worst = "none";
  std::size_t most = 0;
  for (const auto& [event, count] : failures)
    if (count > most) {
      most = count;
      worst = event;
    }
  throw RetryExhausted(worst, opts.retry_cap);
}

}  // namespace

RecipeResult<2> build_no_clique_2d(std::int64_t n, int k, std::uint64_t seed, const RecipeOptions& opts) {
  return run_recipe<2>(no_clique_params_2d(n, k), seed, opts);
}

RecipeResult<3> build_no_clique_3d(std::int64_t m, std::int64_t n, int k, std::uint64_t seed,
                                   const RecipeOptions& opts) {
  return run_recipe<3>(no_clique_params_3d(m, n, k), seed, opts);
}

}  // namespace incidence_lab
