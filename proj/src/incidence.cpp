#include "incidence_lab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "incidence_lab/parallel.hpp"

namespace incidence_lab {

namespace {

struct Partial {
  std::int64_t total = 0;
  std::vector<std::int64_t> line_counts;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // (line, point)
};

// Runs probe(i, emit) for every point i; emit(j) records the incidence
// (i, j). Per-chunk partials are merged in chunk order.
template <class Probe>
IncidenceReport drive(std::size_t m, std::size_t n, const IncidenceOptions& opts, Probe&& probe) {
  const unsigned threads = opts.threads ? opts.threads : default_thread_count();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, m));
  IncidenceReport rep;
  rep.point_degrees.assign(m, 0);
  std::vector<Partial> parts(chunks);
  for_each_chunk(m, chunks, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    Partial& part = parts[c];
    part.line_counts.assign(n, 0);
    for (std::size_t i = begin; i < end; ++i)
      probe(i, [&](std::size_t j) {
        ++rep.point_degrees[i];
        ++part.line_counts[j];
        ++part.total;
        if (opts.collect_line_points)
          part.pairs.emplace_back(static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(i));
      });
  });
  rep.line_counts.assign(n, 0);
  for (const auto& part : parts) {
    rep.total += part.total;
    for (std::size_t j = 0; j < n; ++j) rep.line_counts[j] += part.line_counts[j];
  }
  if (opts.collect_line_points) {
    rep.line_points.assign(n, {});
    for (std::size_t j = 0; j < n; ++j) rep.line_points[j].reserve(static_cast<std::size_t>(rep.line_counts[j]));
    for (const auto& part : parts)
      for (const auto& [j, i] : part.pairs) rep.line_points[j].push_back(i);
  }
  return rep;
}

// ---- direction buckets --------------------------------------------------

// Primitive direction of a line and its offset within the direction class:
// 2D uses the normal (a, b)/g and c/g, 3D uses d/g and m/g, so a point p is
// on the line iff key(p) == offset with key(p) = (a, b)/g . p or p x d/g.
template <int Dim>
struct Canon;

template <>
struct Canon<2> {
  static constexpr int kOffset = 1;
  using Direction = std::array<Integer, 2>;
  static std::pair<Direction, std::array<Rational, 1>> of(const Line2& l) {
    const Integer g = gcd(l.a(), l.b());
    return {{l.a() / g, l.b() / g}, {Rational(l.c(), g)}};
  }
  static std::array<Rational, 1> key(const Point2& p, const Direction& d) {
    return {Rational(d[0]) * p(0) + Rational(d[1]) * p(1)};
  }
};

template <>
struct Canon<3> {
  static constexpr int kOffset = 3;
  using Direction = std::array<Integer, 3>;
  static std::pair<Direction, std::array<Rational, 3>> of(const Line3& l) {
    const auto& d = l.direction();
    const auto& m = l.moment();
    const Integer g = gcd(gcd(d(0), d(1)), d(2));
    return {{d(0) / g, d(1) / g, d(2) / g}, {Rational(m(0), g), Rational(m(1), g), Rational(m(2), g)}};
  }
  static std::array<Rational, 3> key(const Point3& p, const Direction& d) {
    const Vector3<Rational> dr{Rational(d[0]), Rational(d[1]), Rational(d[2])};
    const Vector3<Rational> c = p.cross(dr);
    return {c(0), c(1), c(2)};
  }
};

struct ArrayHash {
  template <std::size_t K>
  std::size_t operator()(const std::array<Integer, K>& a) const {
    std::uint64_t h = K;
    for (const auto& z : a) h = hash_mix(h, stable_hash(z));
    return h;
  }
  template <std::size_t K>
  std::size_t operator()(const std::array<Rational, K>& a) const {
    std::uint64_t h = K;
    for (const auto& z : a) h = hash_mix(h, stable_hash(z));
    return h;
  }
};

template <int Dim>
struct Buckets {
  using C = Canon<Dim>;
  std::vector<typename C::Direction> directions;
  std::vector<std::vector<std::pair<std::array<Rational, C::kOffset>, std::uint32_t>>> members;
};

template <int Dim>
Buckets<Dim> bucket_lines(const std::vector<Line<Dim>>& lines) {
  using C = Canon<Dim>;
  Buckets<Dim> b;
  std::unordered_map<typename C::Direction, std::size_t, ArrayHash> index;
  for (std::size_t j = 0; j < lines.size(); ++j) {
    auto [dir, off] = C::of(lines[j]);
    auto [it, fresh] = index.try_emplace(dir, b.directions.size());
    if (fresh) {
      b.directions.push_back(dir);
      b.members.emplace_back();
    }
    b.members[it->second].emplace_back(std::move(off), static_cast<std::uint32_t>(j));
  }
  return b;
}

// ---- small-integer index ------------------------------------------------

constexpr std::int64_t kCoordLimit = std::int64_t(1) << 40;
constexpr std::int64_t kDirLimit = std::int64_t(1) << 20;

template <int Dim>
struct IntIndex {
  static constexpr int K = Dim - 1;
  using Key = std::array<std::int64_t, K>;

  std::array<std::int64_t, 3> dir{};
  int drop = 0;  // 3D: coordinate of p x d implied by the other two
  bool dense = false;
  Key lo{}, span{};
  std::vector<std::int32_t> table;
  std::vector<std::pair<Key, std::uint32_t>> sorted;

  Key key_of(const std::array<std::int64_t, Dim>& p) const {
    if constexpr (Dim == 2) {
      return {dir[0] * p[0] + dir[1] * p[1]};
    } else {
      const std::int64_t c[3] = {p[1] * dir[2] - p[2] * dir[1], p[2] * dir[0] - p[0] * dir[2],
                                 p[0] * dir[1] - p[1] * dir[0]};
      Key k{};
      for (int i = 0, o = 0; i < 3; ++i)
        if (i != drop) k[o++] = c[i];
      return k;
    }
  }

  std::int64_t find(const Key& k) const {
    if (dense) {
      std::int64_t idx = 0;
      for (int i = 0; i < K; ++i) {
        const std::int64_t off = k[i] - lo[i];
        if (off < 0 || off >= span[i]) return -1;
        idx = idx * span[i] + off;
      }
      return table[static_cast<std::size_t>(idx)];
    }
    auto it = std::lower_bound(sorted.begin(), sorted.end(), k,
                               [](const auto& e, const Key& key) { return e.first < key; });
    if (it == sorted.end() || it->first != k) return -1;
    return it->second;
  }

  void build(std::vector<std::pair<Key, std::uint32_t>> entries) {
    if (entries.empty()) {
      dense = true;
      span.fill(0);
      return;
    }
    Key hi = entries[0].first;
    lo = hi;
    for (const auto& [k, j] : entries)
      for (int i = 0; i < K; ++i) {
        lo[i] = std::min(lo[i], k[i]);
        hi[i] = std::max(hi[i], k[i]);
      }
    double cells = 1;
    for (int i = 0; i < K; ++i) cells *= static_cast<double>(hi[i]) - static_cast<double>(lo[i]) + 1;
    if (cells <= 4.0 * static_cast<double>(entries.size()) + 64) {
      dense = true;
      for (int i = 0; i < K; ++i) span[i] = hi[i] - lo[i] + 1;
      table.assign(static_cast<std::size_t>(cells), -1);
      for (const auto& [k, j] : entries) {
        std::int64_t idx = 0;
        for (int i = 0; i < K; ++i) idx = idx * span[i] + (k[i] - lo[i]);
        table[static_cast<std::size_t>(idx)] = static_cast<std::int32_t>(j);
      }
    } else {
      sorted = std::move(entries);
      std::sort(sorted.begin(), sorted.end());
    }
  }
};

template <int Dim>
std::optional<std::vector<std::array<std::int64_t, Dim>>> small_integer_points(const std::vector<Point<Dim>>& pts) {
  std::vector<std::array<std::int64_t, Dim>> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int c = 0; c < Dim; ++c) {
      if (!is_integral(pts[i](c))) return std::nullopt;
      auto v = to_int64(num(pts[i](c)));
      if (!v || *v > kCoordLimit || *v < -kCoordLimit) return std::nullopt;
      out[i][c] = *v;
    }
  return out;
}

template <int Dim>
std::optional<std::vector<IntIndex<Dim>>> small_integer_index(const Buckets<Dim>& b) {
  using Index = IntIndex<Dim>;
  std::vector<Index> out(b.directions.size());
  for (std::size_t s = 0; s < b.directions.size(); ++s) {
    Index& idx = out[s];
    for (int c = 0; c < Dim; ++c) {
      auto v = to_int64(b.directions[s][c]);
      if (!v || *v > kDirLimit || *v < -kDirLimit) return std::nullopt;
      idx.dir[c] = *v;
    }
    if constexpr (Dim == 3) idx.drop = idx.dir[0] != 0 ? 0 : (idx.dir[1] != 0 ? 1 : 2);
    std::vector<std::pair<typename Index::Key, std::uint32_t>> entries;
    for (const auto& [off, j] : b.members[s]) {
      typename Index::Key k{};
      bool ok = true;
      for (int i = 0, o = 0; i < Canon<Dim>::kOffset && ok; ++i) {
        if (Dim == 3 && i == idx.drop) continue;
        auto v = is_integral(off[i]) ? to_int64(num(off[i])) : std::nullopt;
        // Keys of admissible points stay below 2^62 in magnitude.
        if (!v || *v > (std::int64_t(1) << 62) || *v < -(std::int64_t(1) << 62)) ok = false;
        else k[o++] = *v;
      }
      if (ok) entries.emplace_back(k, j);
    }
    idx.build(std::move(entries));
  }
  return out;
}

}  // namespace

template <int Dim>
IncidenceReport count_incidences_oracle(const Arrangement<Dim>& a, const IncidenceOptions& opts) {
  return drive(a.m(), a.n(), opts, [&](std::size_t i, auto&& emit) {
    for (std::size_t j = 0; j < a.lines.size(); ++j)
      if (point_on_line(a.points[i], a.lines[j])) emit(j);
  });
}

template <int Dim>
bool fast_path_applies(const Arrangement<Dim>& a) {
  std::unordered_map<typename Canon<Dim>::Direction, char, ArrayHash> dirs;
  for (const auto& l : a.lines) dirs.emplace(Canon<Dim>::of(l).first, 0);
  return 2 * dirs.size() <= a.n();
}

template <int Dim>
IncidenceReport count_incidences_fast(const Arrangement<Dim>& a, const IncidenceOptions& opts) {
  const auto buckets = bucket_lines<Dim>(a.lines);
  if (2 * buckets.directions.size() > a.n()) return count_incidences_oracle(a, opts);

  if (auto pts = small_integer_points<Dim>(a.points)) {
    if (auto index = small_integer_index<Dim>(buckets)) {
      return drive(a.m(), a.n(), opts, [&](std::size_t i, auto&& emit) {
        for (const auto& idx : *index) {
          const std::int64_t j = idx.find(idx.key_of((*pts)[i]));
          if (j >= 0) emit(static_cast<std::size_t>(j));
        }
      });
    }
  }

  using C = Canon<Dim>;
  using Key = std::array<Rational, C::kOffset>;
  std::vector<std::unordered_map<Key, std::uint32_t, ArrayHash>> maps(buckets.directions.size());
  for (std::size_t s = 0; s < maps.size(); ++s)
    for (const auto& [off, j] : buckets.members[s]) maps[s].emplace(off, j);
  return drive(a.m(), a.n(), opts, [&](std::size_t i, auto&& emit) {
    for (std::size_t s = 0; s < maps.size(); ++s) {
      auto it = maps[s].find(C::key(a.points[i], buckets.directions[s]));
      if (it != maps[s].end()) emit(it->second);
    }
  });
}

template IncidenceReport count_incidences_oracle(const Arrangement2&, const IncidenceOptions&);
template IncidenceReport count_incidences_oracle(const Arrangement3&, const IncidenceOptions&);
template IncidenceReport count_incidences_fast(const Arrangement2&, const IncidenceOptions&);
template IncidenceReport count_incidences_fast(const Arrangement3&, const IncidenceOptions&);
template bool fast_path_applies(const Arrangement2&);
template bool fast_path_applies(const Arrangement3&);

// ---- rich points ----------------------------------------------------------

template <int Dim>
RichPointSet<Dim> rich_points_of_lines(std::span<const Line<Dim>> lines, int r) {
  if (r < 2) throw std::invalid_argument("rich_points_of_lines: r must be at least 2");
  std::unordered_map<Point<Dim>, std::vector<std::uint32_t>, GeometryHash> hits;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      if (auto p = intersect(lines[i], lines[j])) {
        auto& v = hits[*p];
        v.push_back(static_cast<std::uint32_t>(i));
        v.push_back(static_cast<std::uint32_t>(j));
      }
  std::vector<std::pair<Point<Dim>, std::int64_t>> rich;
  for (auto& [p, v] : hits) {
    std::sort(v.begin(), v.end());
    const auto count = std::unique(v.begin(), v.end()) - v.begin();
    if (count >= r) rich.emplace_back(p, count);
  }
  std::sort(rich.begin(), rich.end(), [](const auto& x, const auto& y) { return PointLess{}(x.first, y.first); });
  RichPointSet<Dim> out;
  out.r = r;
  for (auto& [p, c] : rich) {
    out.points.push_back(std::move(p));
    out.multiplicity.push_back(c);
  }
  return out;
}

template RichPointSet<2> rich_points_of_lines<2>(std::span<const Line2>, int);
template RichPointSet<3> rich_points_of_lines<3>(std::span<const Line3>, int);

// ---- coplanar families ----------------------------------------------------

CoplanarReport max_coplanar_lines(std::span<const Line3> lines) {
  std::map<Plane, std::vector<std::uint32_t>> members;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (!lines_coplanar(lines[i], lines[j])) continue;
      auto& v = members[plane_span(lines[i], lines[j])];
      v.push_back(static_cast<std::uint32_t>(i));
      v.push_back(static_cast<std::uint32_t>(j));
    }
  CoplanarReport rep;
  rep.max_family = lines.empty() ? 0 : 1;
  for (auto& [plane, v] : members) {
    std::sort(v.begin(), v.end());
    const std::int64_t count = std::unique(v.begin(), v.end()) - v.begin();
    rep.families.emplace(plane, count);
    rep.max_family = std::max(rep.max_family, count);
  }
  return rep;
}

// ---- bound checkers -------------------------------------------------------

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::szemeredi_trotter: return "ST";
    case BoundKind::guth_katz: return "GK";
    case BoundKind::rich: return "RICH";
  }
  return "?";
}

BoundKind parse_bound_kind(const std::string& text) {
  if (text == "ST" || text == "st") return BoundKind::szemeredi_trotter;
  if (text == "GK" || text == "gk") return BoundKind::guth_katz;
  if (text == "RICH" || text == "rich") return BoundKind::rich;
  throw std::invalid_argument("unknown bound '" + text + "' (expected ST, GK or RICH)");
}

template <int Dim>
BoundReport check_bound(const Arrangement<Dim>& a, BoundKind kind, const BoundParams& params) {
  if (kind != BoundKind::szemeredi_trotter && Dim != 3)
    throw std::invalid_argument("check_bound: " + to_string(kind) + " requires dim 3");
  if (kind == BoundKind::rich && (!params.r || *params.r < 2))
    throw std::invalid_argument("check_bound: RICH requires r >= 2");

  BoundReport rep;
  rep.kind = kind;
  rep.m = static_cast<std::int64_t>(a.m());
  rep.n = static_cast<std::int64_t>(a.n());
  const double m = static_cast<double>(rep.m);
  const double n = static_cast<double>(rep.n);
  rep.total = count_incidences_fast(a).total;
  rep.lhs = static_cast<double>(rep.total);
  switch (kind) {
    case BoundKind::szemeredi_trotter:
      rep.terms = {{"m^(2/3)n^(2/3)", std::cbrt(m * m * n * n)}, {"m", m}, {"n", n}};
      break;
    case BoundKind::guth_katz:
      if constexpr (Dim == 3) {
        rep.max_coplanar = max_coplanar_lines(a.lines).max_family;
        const double b = static_cast<double>(*rep.max_coplanar);
        rep.terms = {{"m^(1/2)n^(3/4)", std::sqrt(m) * std::pow(n, 0.75)},
                     {"B^(1/3)m^(2/3)n^(1/3)", std::cbrt(b * m * m * n)},
                     {"m", m},
                     {"n", n}};
      }
      break;
    case BoundKind::rich:
      if constexpr (Dim == 3) {
        rep.r = params.r;
        rep.rich_count = static_cast<std::int64_t>(rich_points_of_lines<3>(a.lines, *params.r).points.size());
        rep.lhs = static_cast<double>(*rep.rich_count);
        const double r = *params.r;
        rep.terms = {{"n^(3/2)/r^2", std::pow(n, 1.5) / (r * r)}};
      }
      break;
  }
  for (std::size_t i = 1; i < rep.terms.size(); ++i)
    if (rep.terms[i].value > rep.terms[rep.dominant].value) rep.dominant = i;
  const double dom = rep.terms.empty() ? 0 : rep.terms[rep.dominant].value;
  rep.ratio = dom > 0 ? rep.lhs / dom : 0;
  return rep;
}

template BoundReport check_bound(const Arrangement2&, BoundKind, const BoundParams&);
template BoundReport check_bound(const Arrangement3&, BoundKind, const BoundParams&);

}  // namespace incidence_lab
