#include "incidence_lab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "incidence_lab/random.hpp"

namespace incidence_lab {

namespace {

std::int64_t binomial3(int d) { return static_cast<std::int64_t>(d + 3) * (d + 2) * (d + 1) / 6; }

int least_degree(std::size_t classes) {
  int d = 1;
  while (binomial3(d) - 1 < static_cast<std::int64_t>(classes)) ++d;
  return d;
}

// Normalized coordinates y = (x - center) / scale with scale a power of two
// covering the bounding box, so |y_i| <= 1.
struct Frame {
  Vector3<Rational> center;
  Rational scale;
  std::vector<Vector3<Rational>> exact;
  std::vector<Eigen::Vector3d> approx;
};

Frame make_frame(std::span<const Point3> pts) {
  Frame f;
  f.center = Vector3<Rational>::Zero();
  f.scale = 1;
  if (pts.empty()) return f;
  Vector3<Rational> lo = pts[0], hi = pts[0];
  for (const auto& p : pts)
    for (int i = 0; i < 3; ++i) {
      if (p(i) < lo(i)) lo(i) = p(i);
      if (p(i) > hi(i)) hi(i) = p(i);
    }
  f.center = (lo + hi) / Rational(2);
  Rational half = 0;
  for (int i = 0; i < 3; ++i) half = std::max(half, (hi(i) - lo(i)) / 2);
  if (half > 0) {
    while (f.scale < half) f.scale *= 2;
    while (f.scale / 2 >= half) f.scale /= 2;
  }
  for (const auto& p : pts) {
    Vector3<Rational> y = (p - f.center) / f.scale;
    f.approx.emplace_back(to_double(y(0)), to_double(y(1)), to_double(y(2)));
    f.exact.push_back(std::move(y));
  }
  return f;
}

Eigen::VectorXd features_approx(const Eigen::Vector3d& y, const std::vector<Exponent3>& basis) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    out(static_cast<Eigen::Index>(i)) =
        std::pow(y(0), basis[i][0]) * std::pow(y(1), basis[i][1]) * std::pow(y(2), basis[i][2]);
  return out;
}

using Class = std::vector<std::uint32_t>;

struct RoundSearch {
  const Frame& frame;
  const std::vector<Class>& required;
  const std::vector<Class>& all;
  int d;
  const PartitionOptions& opts;
  SplitMix64& rng;

  RoundSearch(const Frame& f, const std::vector<Class>& req, const std::vector<Class>& cls, int degree,
              const PartitionOptions& o, SplitMix64& r)
      : frame(f), required(req), all(cls), d(degree), opts(o), rng(r) {}

  std::vector<Exponent3> basis;
  Eigen::MatrixXd raw;                                     // monomial features, row per involved point
  Eigen::MatrixXd phi;                                     // orthonormal features spanning the same space
  Eigen::MatrixXd r_factor;                                // raw = phi * r_factor
  std::vector<Eigen::Index> row_of;                        // point -> row
  std::vector<std::vector<Integer>> scaled_cache;          // point -> features times a positive integer
  std::vector<bool> have_scaled;

  struct Found {
    std::vector<Rational> coeffs;  // over basis, normalized coordinates
    std::vector<int> signs;        // per point (0 for points outside all classes)
    std::size_t attempts = 0;
  };

  const std::vector<Integer>& scaled(std::uint32_t p) {
    if (!have_scaled[p]) {
      const auto& y = frame.exact[p];
      const Integer l = lcm(lcm(den(y(0)), den(y(1))), den(y(2)));
      std::array<std::vector<Integer>, 4> pw;
      const std::array<Integer, 4> base{num(y(0)) * (l / den(y(0))), num(y(1)) * (l / den(y(1))),
                                        num(y(2)) * (l / den(y(2))), l};
      for (int a = 0; a < 4; ++a) {
        pw[a].assign(d + 1, Integer(1));
        for (int i = 1; i <= d; ++i) pw[a][i] = pw[a][i - 1] * base[a];
      }
      auto& out = scaled_cache[p];
      out.reserve(basis.size());
      for (const auto& e : basis)
        out.push_back(pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][d - e[0] - e[1] - e[2]]);
      have_scaled[p] = true;
    }
    return scaled_cache[p];
  }

  std::optional<Found> run(std::size_t attempts) {
    basis = monomials_up_to(d);
    const std::size_t npts = frame.exact.size();
    row_of.assign(npts, -1);
    scaled_cache.assign(npts, {});
    have_scaled.assign(npts, false);
    Eigen::Index rows = 0;
    for (const auto& cls : all)
      for (auto p : cls) row_of[p] = rows++;
    raw.resize(rows, static_cast<Eigen::Index>(basis.size()));
    for (const auto& cls : all)
      for (auto p : cls) raw.row(row_of[p]) = features_approx(frame.approx[p], basis).transpose();
    // Search in coordinates where the point values are orthonormal.
    {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
      const Eigen::Index k = std::min(raw.rows(), raw.cols());
      phi = qr.householderQ() * Eigen::MatrixXd::Identity(raw.rows(), k);
      r_factor = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
      if (k < raw.cols() || !(r_factor.diagonal().cwiseAbs().minCoeff() > 1e-12 * r_factor.diagonal().cwiseAbs().maxCoeff())) {
        phi = raw;
        r_factor = Eigen::MatrixXd::Identity(raw.cols(), raw.cols());
      }
    }

    const Eigen::Index M = phi.cols();
    for (std::size_t attempt = 1; attempt <= attempts; ++attempt) {
      Eigen::VectorXd a(M);
      for (Eigen::Index i = 0; i < M; ++i) a(i) = rng.normal();
      a.normalize();
      std::optional<Found> found;
      for (double tau : {0.3, 0.2, 0.1, 0.05, 0.03, 0.02, 0.01, 0.005, 0.002, 0.001}) {
        smooth_phase(a, tau);
        if (tau <= 0.05 && balanced(a) && (found = exact_stage(a))) break;
      }
      if (found) {
        found->attempts = attempt;
        return found;
      }
    }
    return std::nullopt;
  }

  // Smoothed signed-count imbalance of each required class, mean tanh(v / t),
  // with t proportional to the median absolute value over the class. Fills
  // the residuals and their gradient rows tangent to the unit sphere.
  double soft_residual(const Eigen::VectorXd& a, double tau, Eigen::VectorXd* res, Eigen::MatrixXd* jac) const {
    const Eigen::VectorXd values = phi * a;
    const Eigen::Index J = static_cast<Eigen::Index>(required.size());
    if (res) res->resize(J);
    if (jac) jac->setZero(J, phi.cols());
    double total = 0;
    std::vector<double> mags;
    for (Eigen::Index j = 0; j < J; ++j) {
      const auto& cls = required[static_cast<std::size_t>(j)];
      mags.clear();
      for (auto p : cls) mags.push_back(std::abs(values(row_of[p])));
      std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2), mags.end());
      double t = tau * mags[mags.size() / 2];
      if (!(t > 0)) t = tau * (values.cwiseAbs().maxCoeff() + 1e-300);
      const double n = static_cast<double>(cls.size());
      double r = 0;
      for (auto p : cls) {
        const double th = std::tanh(values(row_of[p]) / t);
        r += th;
        if (jac) jac->row(j) += ((1 - th * th) / (t * n)) * phi.row(row_of[p]);
      }
      r /= n;
      total += r * r;
      if (res) (*res)(j) = r;
    }
    if (jac) *jac -= (*jac * a) * a.transpose();
    return total;
  }

  void smooth_phase(Eigen::VectorXd& a, double tau) const {
    Eigen::VectorXd res;
    Eigen::MatrixXd jac;
    double g = soft_residual(a, tau, &res, &jac);
    for (int step = 0; step < opts.newton_steps && g > 1e-4 * tau * tau; ++step) {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
      const Eigen::VectorXd delta = cod.solve(res);
      bool moved = false;
      for (double t = 1.0; t > 1e-3; t *= 0.5) {
        Eigen::VectorXd next = a - t * delta;
        next.normalize();
        Eigen::VectorXd nres;
        Eigen::MatrixXd njac;
        const double gn = soft_residual(next, tau, &nres, &njac);
        if (gn < g) {
          a = std::move(next);
          res = std::move(nres);
          jac = std::move(njac);
          g = gn;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
  }

  bool balanced(const Eigen::VectorXd& a) const {
    const Eigen::VectorXd values = phi * a;
    for (const auto& cls : required) {
      std::size_t pos = 0, neg = 0;
      for (auto p : cls) (values(row_of[p]) > 0 ? pos : neg)++;
      const std::size_t cap = (cls.size() + 1) / 2;
      if (pos > cap || neg > cap) return false;
    }
    return true;
  }

  // Snaps the coefficients (converted back to the monomial basis) to dyadic
  // rationals and validates them exactly.
  std::optional<Found> exact_stage(const Eigen::VectorXd& b) {
    const Eigen::VectorXd a = r_factor.template triangularView<Eigen::Upper>().solve(b);
    const double amax = a.cwiseAbs().maxCoeff();
    if (!(amax > 0)) return std::nullopt;
    const int bits = std::clamp(opts.coefficient_bits, 1, 62);
    const double unit = std::ldexp(1.0, bits);
    const Integer denom = pow(Integer(2), static_cast<unsigned>(bits));
    std::vector<Rational> h(static_cast<std::size_t>(a.size()));
    for (Eigen::Index i = 0; i < a.size(); ++i)
      h[i] = Rational(Integer(static_cast<long long>(std::llround(a(i) / amax * unit))), denom);
    return validate(std::move(h));
  }

  // Exact signs of h on every point and the bisection check.
  std::optional<Found> validate(std::vector<Rational> h) {
    const Eigen::Index M = static_cast<Eigen::Index>(h.size());
    if (std::all_of(h.begin(), h.end(), [](const Rational& c) { return c == 0; })) return std::nullopt;
    Integer common(1);
    for (const auto& c : h) common = lcm(common, den(c));
    std::vector<Integer> hz(static_cast<std::size_t>(M));
    Eigen::VectorXd hd(M);
    for (Eigen::Index i = 0; i < M; ++i) {
      hz[i] = num(h[i]) * (common / den(h[i]));
      hd(i) = to_double(h[i]);
    }
    const Eigen::VectorXd approx = raw * hd;
    const double margin = 1e-9 * hd.cwiseAbs().sum();

    Found found;
    found.signs.assign(frame.exact.size(), 0);
    Integer v;
    for (const auto& cls : all)
      for (auto p : cls) {
        const double va = approx(row_of[p]);
        if (std::abs(va) > margin) {
          found.signs[p] = va > 0 ? 1 : -1;
          continue;
        }
        const auto& ph = scaled(p);
        v = 0;
        for (Eigen::Index i = 0; i < M; ++i) v += ph[i] * hz[i];
        found.signs[p] = v > 0 ? 1 : v < 0 ? -1 : 0;
      }
    for (const auto& cls : required) {
      std::size_t pos = 0, neg = 0;
      for (auto p : cls) {
        if (found.signs[p] > 0) ++pos;
        if (found.signs[p] < 0) ++neg;
      }
      const std::size_t cap = (cls.size() + 1) / 2;
      if (pos > cap || neg > cap) {
        return std::nullopt;
      }
    }
    found.coeffs = std::move(h);
    return found;
  }
};

Polynomial3<Rational> to_original(const std::vector<Rational>& coeffs, const std::vector<Exponent3>& basis,
                                  const Frame& frame) {
  const auto h = Polynomial3<Rational>::from_basis(coeffs, basis);
  std::array<Polynomial3<Rational>, 3> images;
  for (int a = 0; a < 3; ++a)
    images[a] = (Rational(1) / frame.scale) * (Polynomial3<Rational>::variable(a) -
                                               Polynomial3<Rational>::constant(frame.center(a)));
  return h.substitute(images);
}

}  // namespace

PartitionResult partition(std::span<const Point3> points, int D, std::uint64_t seed, const PartitionOptions& opts) {
  if (points.empty()) throw std::invalid_argument("partition: empty point set");
  if (D < 1) throw std::invalid_argument("partition: D must be at least 1");
  const std::int64_t np = static_cast<std::int64_t>(points.size());
  const std::int64_t cube = static_cast<std::int64_t>(D) * D * D;
  const std::int64_t budget = 4 * static_cast<std::int64_t>(D);

  PartitionResult res;
  res.D = D;
  res.population_target = (np + cube - 1) / cube;
  const Frame frame = make_frame(points);
  SplitMix64 rng(hash_mix(seed, static_cast<std::uint64_t>(Stream::search)));

  std::vector<Class> classes(1);
  classes[0].resize(points.size());
  std::iota(classes[0].begin(), classes[0].end(), 0);
  std::vector<std::vector<int>> signs(points.size());
  std::vector<bool> on_boundary(points.size(), false);

  res.conforming = true;
  while (true) {
    std::vector<Class> required;
    for (const auto& c : classes)
      if (static_cast<std::int64_t>(c.size()) > res.population_target || res.rounds.empty()) required.push_back(c);
    if (required.empty()) break;
    const int d0 = least_degree(required.size());
    if (res.degree + d0 > budget) {
      res.conforming = false;
      break;
    }
    std::optional<RoundSearch::Found> found;
    int d = d0;
    for (; res.degree + d <= budget && !found; ++d) {
      RoundSearch search(frame, required, classes, d, opts, rng);
      // Lower degrees get a short trial before escalating; the last one gets the full budget.
      const bool last = res.degree + d + 1 > budget;
      found = search.run(last ? opts.attempts_per_round : std::max<std::size_t>(1, opts.attempts_per_round / 4));
      if (found) {
        PartitionRound round;
        round.degree = d;
        round.polynomial = to_original(found->coeffs, search.basis, frame);
        round.classes_bisected = required.size();
        round.attempts = found->attempts;
        res.rounds.push_back(std::move(round));
      }
    }
    if (!found)
      throw SearchFailure("partition: no bisecting polynomial of degree " + std::to_string(d0) + ".." +
                          std::to_string(d - 1) + " for " + std::to_string(required.size()) + " classes");
    res.degree += res.rounds.back().polynomial.degree();

    std::vector<Class> next;
    for (const auto& cls : classes) {
      Class pos, neg;
      for (auto p : cls) {
        const int s = found->signs[p];
        signs[p].push_back(s);
        if (s > 0) pos.push_back(p);
        else if (s < 0) neg.push_back(p);
        else on_boundary[p] = true;
      }
      if (!pos.empty()) next.push_back(std::move(pos));
      if (!neg.empty()) next.push_back(std::move(neg));
    }
    // Boundary points keep receiving signs so every label has full length.
    for (std::size_t p = 0; p < points.size(); ++p)
      if (on_boundary[p] && signs[p].size() < res.rounds.size()) signs[p].push_back(0);
    classes = std::move(next);
  }

  // Cells in order of first appearance over the input.
  std::map<std::vector<int>, std::int64_t> cell_of;
  res.point_labels.assign(points.size(), kBoundary);
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (on_boundary[p]) continue;
    auto [it, fresh] = cell_of.try_emplace(signs[p], static_cast<std::int64_t>(res.cell_signs.size()));
    if (fresh) res.cell_signs.push_back(signs[p]);
    res.point_labels[p] = it->second;
    ++res.cell_counts[it->second];
  }
  res.num_cells = static_cast<std::int64_t>(res.cell_signs.size());
  for (const auto& [cell, count] : res.cell_counts)
    if (count > res.population_target) res.conforming = false;
  if (opts.build_product) {
    res.f = Polynomial3<Rational>::constant(Rational(1));
    for (const auto& r : res.rounds) res.f = res.f * r.polynomial;
  }
  return res;
}

PartitionConformance verify_partition(std::span<const Point3> points, const PartitionResult& result) {
  if (result.point_labels.size() != points.size())
    throw std::logic_error("verify_partition: label count differs from point count");
  std::map<std::int64_t, std::int64_t> counts;
  PartitionConformance rep;
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<int> s;
    bool boundary = false;
    for (const auto& r : result.rounds) {
      const int v = sign(r.polynomial(points[p]));
      if (v == 0) boundary = true;
      s.push_back(v);
    }
    const std::int64_t label = result.point_labels[p];
    if (boundary) {
      if (label != kBoundary) throw std::logic_error("verify_partition: zero of f labelled as a cell");
      ++rep.boundary_points;
      continue;
    }
    if (label < 0 || label >= result.num_cells || result.cell_signs[static_cast<std::size_t>(label)] != s)
      throw std::logic_error("verify_partition: label disagrees with the exact sign vector");
    ++counts[label];
  }
  if (counts != result.cell_counts) throw std::logic_error("verify_partition: stored populations are wrong");
  std::int64_t total = rep.boundary_points;
  for (const auto& [cell, c] : counts) {
    total += c;
    rep.max_population = std::max(rep.max_population, c);
  }
  const double cube = std::pow(static_cast<double>(result.D), 3);
  rep.conserved = total == static_cast<std::int64_t>(points.size());
  rep.cells_constant = static_cast<double>(result.num_cells) / cube;
  rep.population_constant =
      points.empty() ? 0 : static_cast<double>(rep.max_population) * cube / static_cast<double>(points.size());
  int degree = 0;
  for (const auto& r : result.rounds) degree += r.polynomial.degree();
  rep.within_budget = degree <= 4 * result.D;
  rep.conforming = rep.conserved && rep.within_budget && rep.max_population <= result.population_target;
  return rep;
}

namespace {

CrossingReport crossings_of(const Polynomial<Rational>& restricted, const Line3& line,
                            const ParameterRange<Rational>& range) {
  if (restricted.is_zero()) throw LineInVariety("line_crossings: line lies in Z(f)");
  CrossingReport rep{line, 0, 0};
  rep.root_count = count_distinct_real_roots(restricted, range);
  rep.cells_crossed_upper = rep.root_count + 1;
  return rep;
}

}  // namespace

CrossingReport line_crossings(const Polynomial3<Rational>& f, const Line3& line, const ParameterRange<Rational>& range) {
  return crossings_of(restrict_to_line(f, line), line, range);
}

CrossingReport line_crossings(std::span<const Polynomial3<Rational>> factors, const Line3& line,
                              const ParameterRange<Rational>& range) {
  auto acc = Polynomial<Rational>::constant(Rational(1));
  for (const auto& g : factors) acc = acc * restrict_to_line(g, line);
  return crossings_of(acc, line, range);
}

CrossingReport line_crossings(const PartitionResult& result, const Line3& line, const ParameterRange<Rational>& range) {
  std::vector<Polynomial3<Rational>> factors;
  for (const auto& r : result.rounds) factors.push_back(r.polynomial);
  return line_crossings(std::span<const Polynomial3<Rational>>(factors), line, range);
}

}  // namespace incidence_lab
