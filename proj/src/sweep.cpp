#include "incidence_lab/sweep.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "incidence_lab/parallel.hpp"
#include "incidence_lab/random.hpp"

namespace incidence_lab {

std::string to_string(SweepFamily f) {
  switch (f) {
    case SweepFamily::planar_grid: return "planar-grid";
    case SweepFamily::spatial_grid: return "spatial-grid";
    case SweepFamily::no_clique_2d: return "no-clique-2d";
    case SweepFamily::no_clique_3d: return "no-clique-3d";
  }
  return "unknown";
}

SweepFamily parse_sweep_family(const std::string& text) {
  for (auto f : {SweepFamily::planar_grid, SweepFamily::spatial_grid, SweepFamily::no_clique_2d,
                 SweepFamily::no_clique_3d})
    if (to_string(f) == text) return f;
  throw std::invalid_argument("unknown family '" + text + "'");
}

FitResult fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit: x and y differ in length");
  if (x.size() < 2) throw std::invalid_argument("fit: need at least two samples");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!(x[k] > 0) || !(y[k] > 0)) throw std::invalid_argument("fit: samples must be positive");
    a(i, 0) = std::log(x[k]);
    a(i, 1) = 1;
    b(i) = std::log(y[k]);
  }
  FitResult fit;
  fit.samples = x.size();
  if ((a.col(0).array() == a(0, 0)).all()) {
    fit.intercept = b.mean();
    fit.residual = std::sqrt((b.array() - fit.intercept).square().mean());
    return fit;
  }
  const Eigen::Vector2d sol = a.colPivHouseholderQr().solve(b);
  fit.slope = sol(0);
  fit.intercept = sol(1);
  fit.residual = std::sqrt((a * sol - b).array().square().mean());
  return fit;
}

namespace {

void validate(const SweepSpec& spec, std::int64_t size) {
  try {
    switch (spec.family) {
      case SweepFamily::planar_grid:
        if (size < 1 || !exact_root(Integer(size), 3)) throw std::invalid_argument("n must be a perfect cube");
        break;
      case SweepFamily::spatial_grid: spatial_grid_shape(size, size); break;
      case SweepFamily::no_clique_2d: no_clique_params_2d(size, spec.k); break;
      case SweepFamily::no_clique_3d: no_clique_params_3d(size, size, spec.k); break;
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("sweep: size " + std::to_string(size) + " is invalid for " + to_string(spec.family) +
                                ": " + e.what());
  }
}

BoundReport spatial_report(const Arrangement3& a, bool coplanar) {
  if (coplanar) return check_bound(a, BoundKind::guth_katz);
  BoundReport rep;
  rep.kind = BoundKind::guth_katz;
  rep.m = static_cast<std::int64_t>(a.m());
  rep.n = static_cast<std::int64_t>(a.n());
  rep.total = count_incidences_fast(a).total;
  rep.lhs = static_cast<double>(rep.total);
  const double m = static_cast<double>(rep.m), n = static_cast<double>(rep.n);
  rep.terms = {{"m^(1/2)n^(3/4)", std::sqrt(m) * std::pow(n, 0.75)}, {"m", m}, {"n", n}};
  for (std::size_t i = 1; i < rep.terms.size(); ++i)
    if (rep.terms[i].value > rep.terms[rep.dominant].value) rep.dominant = i;
  rep.ratio = rep.lhs / rep.terms[rep.dominant].value;
  return rep;
}

ReportRow run_unit(const SweepSpec& spec, std::int64_t size, int rep) {
  const std::uint64_t seed = hash_mix(hash_mix(spec.seed, static_cast<std::uint64_t>(size)), static_cast<std::uint64_t>(rep));
  switch (spec.family) {
    case SweepFamily::planar_grid: return report_row(check_bound(gen_planar_grid(size), BoundKind::szemeredi_trotter));
    case SweepFamily::spatial_grid: return report_row(spatial_report(gen_spatial_grid(size, size), spec.coplanar));
    case SweepFamily::no_clique_2d:
      return report_row(check_bound(build_no_clique_2d(size, spec.k, seed).arrangement, BoundKind::szemeredi_trotter));
    case SweepFamily::no_clique_3d:
      return report_row(spatial_report(build_no_clique_3d(size, size, spec.k, seed).arrangement, spec.coplanar));
  }
  throw std::logic_error("sweep: unknown family");
}

}  // namespace

SweepOutcome run_sweep(const SweepSpec& spec) {
  if (spec.sizes.size() < 3) throw std::invalid_argument("sweep: needs at least 3 sizes");
  if (spec.repetitions < 1) throw std::invalid_argument("sweep: repetitions must be at least 1");
  for (auto s : spec.sizes) validate(spec, s);

  const std::size_t reps = static_cast<std::size_t>(spec.repetitions);
  const std::size_t units = spec.sizes.size() * reps;
  SweepOutcome out;
  out.rows.resize(units);
  out.sizes.resize(units);
  const unsigned threads = spec.threads ? spec.threads : default_thread_count();
  for_each_chunk(units, units, threads, [&](std::size_t u, std::size_t, std::size_t) {
    const std::int64_t size = spec.sizes[u / reps];
    out.sizes[u] = size;
    out.rows[u] = run_unit(spec, size, static_cast<int>(u % reps));
  });

  std::vector<double> x, y;
  for (std::size_t u = 0; u < units; ++u) {
    x.push_back(static_cast<double>(out.sizes[u]));
    y.push_back(static_cast<double>(out.rows[u].total));
  }
  out.fit = fit_loglog(x, y);
  return out;
}

}  // namespace incidence_lab
