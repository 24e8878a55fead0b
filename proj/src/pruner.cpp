#include "incidence_lab/pruner.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "incidence_lab/linalg.hpp"
#include "incidence_lab/random.hpp"

namespace incidence_lab {

std::vector<SplitPair> pair_schedule(int k) {
  if (k < 4) throw std::invalid_argument("pruning needs at least 4 classes");
  std::vector<SplitPair> out;
  for (int s1 = 0; s1 < k; ++s1)
    for (int s2 = s1 + 1; s2 < k; ++s2)
      for (int s3 = s2 + 1; s3 < k; ++s3)
        for (int s4 = s3 + 1; s4 < k; ++s4) {
          const std::array<int, 3> rest{s2, s3, s4};
          for (int mask = 0; mask < 7; ++mask) {
            SplitPair sp;
            sp.a.push_back(s1);
            for (int j = 0; j < 3; ++j) (mask >> j & 1 ? sp.a : sp.b).push_back(rest[j]);
            out.push_back(std::move(sp));
          }
        }
  return out;
}

bool bisects(const Plane& plane, std::span<const Point3> points) {
  std::size_t pos = 0, neg = 0;
  for (const auto& p : points) {
    const int s = plane.side(p);
    pos += s > 0;
    neg += s < 0;
  }
  return 2 * pos <= points.size() && 2 * neg <= points.size();
}

namespace {

using Approx = std::array<double, 3>;

std::vector<Approx> approximate(std::span<const Point3> pts) {
  std::vector<Approx> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back({to_double(p(0)), to_double(p(1)), to_double(p(2))});
  return out;
}

// Rejects a candidate only when rounding cannot explain the imbalance.
bool maybe_bisects(const Approx& n, double c, const std::vector<Approx>& pts) {
  const double nn = std::abs(n[0]) + std::abs(n[1]) + std::abs(n[2]);
  std::size_t pos = 0, neg = 0;
  for (const auto& p : pts) {
    const double v = n[0] * p[0] + n[1] * p[1] + n[2] * p[2] - c;
    const double tol = 1e-9 * (nn * (std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2])) + std::abs(c));
    pos += v > tol;
    neg += v < -tol;
  }
  return 2 * pos <= pts.size() && 2 * neg <= pts.size();
}

Approx cross(const Approx& u, const Approx& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

Approx minus(const Approx& u, const Approx& v) { return {u[0] - v[0], u[1] - v[1], u[2] - v[2]}; }

double dot(const Approx& u, const Approx& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

}  // namespace

Plane ham_sandwich_3sets(std::span<const Point3> s1, std::span<const Point3> s2, std::span<const Point3> s3) {
  if (s1.empty() || s2.empty() || s3.empty()) throw std::invalid_argument("ham sandwich: empty set");
  const std::array<std::span<const Point3>, 3> sets{s1, s2, s3};
  std::array<std::vector<Approx>, 3> approx;
  for (int i = 0; i < 3; ++i) approx[i] = approximate(sets[i]);

  auto accept = [&](const Approx& n, double c, const auto& exact) -> std::optional<Plane> {
    for (int i = 0; i < 3; ++i)
      if (!maybe_bisects(n, c, approx[i])) return std::nullopt;
    const Plane plane = exact();
    for (int i = 0; i < 3; ++i)
      if (!bisects(plane, sets[i])) return std::nullopt;
    return plane;
  };

  for (std::size_t i = 0; i < s1.size(); ++i)
    for (std::size_t j = 0; j < s2.size(); ++j)
      for (std::size_t l = 0; l < s3.size(); ++l) {
        const Approx& a = approx[0][i];
        const Approx u = minus(approx[1][j], a), v = minus(approx[2][l], a);
        const Approx n = cross(u, v);
        const double scale = std::sqrt(dot(u, u) * dot(v, v));
        if (std::sqrt(dot(n, n)) <= 1e-9 * scale && collinear(s1[i], s2[j], s3[l])) continue;
        if (auto plane = accept(n, dot(n, a), [&] { return Plane::through(s1[i], s2[j], s3[l]); })) return *plane;
      }

  std::vector<std::pair<const Point3*, const Approx*>> all;
  for (int i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < sets[i].size(); ++j) all.emplace_back(&sets[i][j], &approx[i][j]);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      for (int k = 0; k < 3; ++k) {
        Vector3<Rational> axis = Vector3<Rational>::Zero();
        axis(k) = 1;
        const Vector3<Rational> n = (*all[j].first - *all[i].first).cross(axis);
        if (exactly_zero(n)) continue;
        Approx e{0, 0, 0};
        e[k] = 1;
        const Approx nd = cross(minus(*all[j].second, *all[i].second), e);
        if (auto plane = accept(nd, dot(nd, *all[i].second),
                                [&] { return Plane::from_coefficients(n, n.dot(*all[i].first)); }))
          return *plane;
      }
  throw NoBisectingPlane("ham sandwich: no candidate plane bisects all three sets");
}

std::string to_string(StepCase c) {
  switch (c) {
    case StepCase::plain: return "plain";
    case StepCase::offset: return "offset";
    case StepCase::tilt: return "tilt";
  }
  return "unknown";
}

int SeparationCertificate::side_of(int cls) const {
  if (std::find(split.a.begin(), split.a.end(), cls) != split.a.end()) return a_side;
  if (std::find(split.b.begin(), split.b.end(), cls) != split.b.end()) return -a_side;
  return 0;
}

MultiConcentration::MultiConcentration(std::size_t step, std::vector<int> indices)
    : std::runtime_error([&] {
        std::string s = "step " + std::to_string(step) + ": on-plane points of classes";
        for (int i : indices) s += " " + std::to_string(i);
        return s + " cannot be assigned to their sides by a tilt";
      }()),
      step_(step),
      indices_(std::move(indices)) {}

namespace {

// n.p - c with a fixed orientation, unlike the canonical Plane.
struct OrientedPlane {
  Vector3<Rational> n;
  Rational c;
  Rational operator()(const Point3& p) const { return n.dot(p) - c; }
};

// Canonical plane and the sign relating its evaluation to `o`.
std::pair<Plane, int> canonical(const OrientedPlane& o) {
  Plane plane = Plane::from_coefficients(o.n, o.c);
  const Rational agree = plane.normal().cast<Rational>().dot(o.n);
  return {plane, sign(agree)};
}


using Labeled = std::vector<std::pair<const Point3*, int>>;

// Affine l(p) = w.p - e with w orthogonal to n and sign(l) = label on every
// labeled point: exact interpolation of the labels first, then thresholds
// along in-plane directions through pairs of points and coordinate axes.
std::optional<std::pair<Vector3<Rational>, Rational>> in_plane_separator(const Vector3<Rational>& n,
                                                                         const Labeled& pts) {
  MatrixX<Rational> a(static_cast<Eigen::Index>(pts.size()) + 1, 4);
  VectorX<Rational> b(a.rows());
  for (std::size_t r = 0; r < pts.size(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    a.row(ri) << (*pts[r].first)(0), (*pts[r].first)(1), (*pts[r].first)(2), Rational(-1);
    b(ri) = pts[r].second;
  }
  a.row(a.rows() - 1) << n(0), n(1), n(2), Rational(0);
  b(a.rows() - 1) = 0;
  if (auto sol = solve_any(a, b)) return std::pair{Vector3<Rational>(sol->head<3>()), (*sol)(3)};

  std::vector<Vector3<Rational>> dirs;
  for (int k = 0; k < 3; ++k) dirs.push_back(n.cross(Vector3<Rational>::Unit(k)));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) dirs.push_back(n.cross(*pts[j].first - *pts[i].first));
  for (const auto& m : dirs) {
    if (exactly_zero(m)) continue;
    std::optional<Rational> lo_pos, hi_pos, lo_neg, hi_neg;
    for (const auto& [p, label] : pts) {
      const Rational v = m.dot(*p);
      auto& lo = label > 0 ? lo_pos : lo_neg;
      auto& hi = label > 0 ? hi_pos : hi_neg;
      if (!lo || v < *lo) lo = v;
      if (!hi || v > *hi) hi = v;
    }
    if (!lo_pos || !lo_neg) {
      const int label = lo_pos ? 1 : -1;
      return std::pair{Vector3<Rational>(Vector3<Rational>::Zero()), Rational(-label)};
    }
    if (*lo_pos > *hi_neg) return std::pair{m, (*lo_pos + *hi_neg) / 2};
    if (*hi_pos < *lo_neg) return std::pair{Vector3<Rational>(-m), -(*hi_pos + *lo_neg) / 2};
  }
  return std::nullopt;
}

}  // namespace

SeparationCertificate prune_step(PrunerState& state, const SplitPair& split) {
  std::vector<int> idx(split.a);
  idx.insert(idx.end(), split.b.begin(), split.b.end());
  std::sort(idx.begin(), idx.end());
  const int k = static_cast<int>(state.classes.size());
  if (idx.size() != 4 || std::adjacent_find(idx.begin(), idx.end()) != idx.end() || idx.front() < 0 ||
      idx.back() >= k || split.a.empty() || split.b.empty())
    throw std::invalid_argument("prune_step: split must partition four distinct class indices");
  for (int i : idx)
    if (state.classes[i].empty()) throw std::invalid_argument("prune_step: class " + std::to_string(i) + " is empty");

  auto& U = state.classes;
  const int fourth = idx[3];
  const Plane cut = ham_sandwich_3sets(U[idx[0]], U[idx[1]], U[idx[2]]);

  const bool fourth_in_a = std::find(split.a.begin(), split.a.end(), fourth) != split.a.end();
  auto in_g4 = [&](int i) {
    const bool in_a = std::find(split.a.begin(), split.a.end(), i) != split.a.end();
    return in_a == fourth_in_a;
  };

  // orient so the closed positive side holds at least half of the fourth class
  OrientedPlane f{cut.normal().cast<Rational>(), Rational(cut.offset())};
  {
    std::size_t closed = 0;
    for (const auto& p : U[fourth]) closed += sign(f(p)) >= 0;
    if (2 * closed < U[fourth].size()) {
      f.n = -f.n;
      f.c = -f.c;
    }
  }

  std::vector<std::vector<Rational>> value(4);
  std::vector<int> violators;
  for (int t = 0; t < 4; ++t) {
    std::size_t on = 0;
    for (const auto& p : U[idx[t]]) {
      value[t].push_back(f(p));
      on += value[t].back() == 0;
    }
    if (6 * on >= U[idx[t]].size()) violators.push_back(idx[t]);
  }

  SeparationCertificate cert;
  cert.step = state.step;
  cert.split = split;
  cert.concentrated = violators;
  OrientedPlane g = f;

  if (violators.size() == 1) {
    cert.kind = StepCase::offset;
    std::optional<Rational> least;
    for (const auto& vals : value)
      for (const auto& v : vals)
        if (v != 0 && (!least || abs(v) < *least)) least = abs(v);
    const Rational eps = least ? *least / 2 : Rational(1);
    g.c += in_g4(violators[0]) ? -eps : eps;
  } else if (violators.size() >= 2) {
    cert.kind = StepCase::tilt;
    // affine l(p) = w.p - e with w orthogonal to n, +1 on G4's on-plane points and -1 on the others'
    std::vector<std::pair<const Point3*, int>> rows;
    for (int t = 0; t < 4; ++t)
      for (std::size_t j = 0; j < U[idx[t]].size(); ++j)
        if (value[t][j] == 0) rows.emplace_back(&U[idx[t]][j], in_g4(idx[t]) ? 1 : -1);
    const auto sep = in_plane_separator(f.n, rows);
    if (!sep) throw MultiConcentration(state.step, violators);
    const auto& [w, e] = *sep;
    std::optional<Rational> delta;
    for (int t = 0; t < 4; ++t)
      for (std::size_t j = 0; j < U[idx[t]].size(); ++j) {
        if (value[t][j] == 0) continue;
        const Rational l = w.dot(U[idx[t]][j]) - e;
        if (l == 0) continue;
        const Rational ratio = abs(value[t][j] / l);
        if (!delta || ratio < *delta) delta = ratio;
      }
    const Rational d = delta ? *delta / 2 : Rational(1);
    g.n = f.n + d * w;
    g.c = f.c + d * e;
  }

  auto [plane, agree] = canonical(g);
  cert.plane = plane;
  cert.a_side = (fourth_in_a ? 1 : -1) * agree;

  for (int t = 0; t < 4; ++t) {
    const int want = in_g4(idx[t]) ? 1 : -1;
    std::vector<Point3> kept;
    for (const auto& p : U[idx[t]])
      if (sign(g(p)) == want) kept.push_back(p);
    cert.before.push_back(U[idx[t]].size());
    cert.after.push_back(kept.size());
    if (3 * kept.size() < U[idx[t]].size())
      throw std::logic_error("prune_step: class " + std::to_string(idx[t]) + " lost more than two thirds");
    U[idx[t]] = std::move(kept);
  }
  state.history.push_back(cert);
  ++state.step;
  return cert;
}

namespace {

using Shear = Eigen::Matrix<Rational, 3, 3>;

// Upper unitriangular with small integer entries, and its exact inverse.
std::pair<Shear, Shear> random_shear(std::uint64_t seed) {
  SplitMix64 rng(hash_mix(seed, static_cast<std::uint64_t>(Stream::shear)));
  Shear s = Shear::Identity();
  for (int r = 0; r < 3; ++r)
    for (int c = r + 1; c < 3; ++c) s(r, c) = static_cast<std::int64_t>(rng.below(7)) - 3;
  Shear inv = Shear::Identity();
  inv(1, 2) = -s(1, 2);
  inv(0, 1) = -s(0, 1);
  inv(0, 2) = s(0, 1) * s(1, 2) - s(0, 2);
  return {s, inv};
}

}  // namespace

PruneResult prune_all(std::vector<std::vector<Point3>> classes, const PruneOptions& opts) {
  const int k = static_cast<int>(classes.size());
  if (k < 4) throw std::invalid_argument("pruning needs at least 4 classes");
  for (const auto& cls : classes)
    if (cls.empty()) throw std::invalid_argument("pruning needs nonempty classes");
  std::optional<std::pair<Shear, Shear>> shear;
  if (opts.perturb_seed) {
    shear = random_shear(*opts.perturb_seed);
    for (auto& cls : classes)
      for (auto& p : cls) p = (shear->first * p).eval();
  }
  PrunerState state{std::move(classes), 0, {}};
  PruneResult out;
  out.steps_per_class.assign(static_cast<std::size_t>(k), 0);
  for (const auto& split : pair_schedule(k)) {
    prune_step(state, split);
    for (int i : split.a) ++out.steps_per_class[static_cast<std::size_t>(i)];
    for (int i : split.b) ++out.steps_per_class[static_cast<std::size_t>(i)];
  }
  out.classes = std::move(state.classes);
  out.certificates = std::move(state.history);
  if (shear) {
    // p' = S p, so n'.p' - c = (S^T n').p - c
    const auto& [s, inv] = *shear;
    for (auto& cls : out.classes)
      for (auto& p : cls) p = (inv * p).eval();
    for (auto& cert : out.certificates) {
      const OrientedPlane o{s.transpose() * cert.plane.normal().cast<Rational>(), Rational(cert.plane.offset())};
      auto [plane, agree] = canonical(o);
      cert.plane = plane;
      cert.a_side *= agree;
    }
  }
  return out;
}

bool verify_separation(const SeparationCertificate& cert, std::span<const std::vector<Point3>> classes) {
  auto check = [&](const std::vector<int>& group, int want) {
    for (int i : group) {
      if (i < 0 || static_cast<std::size_t>(i) >= classes.size()) return false;
      for (const auto& p : classes[static_cast<std::size_t>(i)])
        if (cert.plane.side(p) != want) return false;
    }
    return true;
  };
  return check(cert.split.a, cert.a_side) && check(cert.split.b, -cert.a_side);
}

}  // namespace incidence_lab
