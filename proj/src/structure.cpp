#include "incidence_lab/structure.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "incidence_lab/incidence.hpp"
#include "incidence_lab/linalg.hpp"
#include "incidence_lab/parallel.hpp"

namespace incidence_lab {

template <int Dim>
std::size_t CliqueGraph<Dim>::edge_count() const {
  return witnesses.size();
}

template <int Dim>
bool CliqueGraph<Dim>::adjacent(std::uint32_t u, std::uint32_t v) const {
  const auto& adj = adjacency.at(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

template <int Dim>
std::uint32_t CliqueGraph<Dim>::witness(std::uint32_t u, std::uint32_t v) const {
  if (u > v) std::swap(u, v);
  auto it = witnesses.find(std::uint64_t(u) * points.size() + v);
  if (it == witnesses.end()) throw std::out_of_range("witness: vertices are not adjacent");
  return it->second;
}

template <int Dim>
CliqueGraph<Dim> build_clique_graph(const Arrangement<Dim>& a) {
  IncidenceOptions opts;
  opts.collect_line_points = true;
  const auto rep = count_incidences_fast(a, opts);
  CliqueGraph<Dim> g;
  g.points = a.points;
  g.adjacency.assign(a.m(), {});
  const std::uint64_t nv = a.m();
  for (std::size_t j = 0; j < rep.line_points.size(); ++j) {
    const auto& on = rep.line_points[j];
    for (std::size_t x = 0; x < on.size(); ++x)
      for (std::size_t y = x + 1; y < on.size(); ++y) {
        auto [it, fresh] = g.witnesses.try_emplace(on[x] * nv + on[y], static_cast<std::uint32_t>(j));
        if (fresh) {
          g.adjacency[on[x]].push_back(on[y]);
          g.adjacency[on[y]].push_back(on[x]);
        }
      }
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

template struct CliqueGraph<2>;
template struct CliqueGraph<3>;
template CliqueGraph<2> build_clique_graph(const Arrangement2&);
template CliqueGraph<3> build_clique_graph(const Arrangement3&);

// ---- clique enumeration ---------------------------------------------------

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  Bitset operator&(const Bitset& o) const {
    Bitset r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  /// Clears every index <= i.
  void clear_through(std::size_t i) {
    const std::size_t w = i >> 6;
    for (std::size_t x = 0; x < w; ++x) words_[x] = 0;
    const unsigned b = static_cast<unsigned>(i & 63);
    words_[w] &= b == 63 ? 0 : ~((std::uint64_t(2) << b) - 1);
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t x = words_[w];
      while (x) {
        const int b = std::countr_zero(x);
        fn(w * 64 + static_cast<std::size_t>(b));
        x &= x - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

template <int Dim>
class CliqueSearch {
 public:
  CliqueSearch(const CliqueGraph<Dim>& g, int k, const CliqueOptions& opts) : g_(g), k_(k), opts_(opts) {
    const std::size_t n = g.vertex_count();
    nbr_.assign(n, Bitset(n));
    for (std::size_t u = 0; u < n; ++u)
      for (auto v : g.adjacency[u]) nbr_[u].set(v);
  }

  /// Cliques whose smallest member is `root`, in lexicographic order.
  std::vector<CliqueResult> run_root(std::uint32_t root, std::size_t limit) {
    out_.clear();
    limit_ = limit;
    Bitset cand = nbr_[root];
    cand.clear_through(root);
    current_ = {root};
    extend(cand);
    return std::move(out_);
  }

 private:
  bool full() const { return limit_ != 0 && out_.size() >= limit_; }

  // Greedy colouring of the candidate set, highest degree first with
  // index tie-break; a clique inside `cand` uses distinct colours.
  std::size_t colour_bound(const Bitset& cand) const {
    std::vector<std::pair<std::size_t, std::uint32_t>> order;
    cand.for_each([&](std::size_t v) { order.emplace_back((nbr_[v] & cand).count(), static_cast<std::uint32_t>(v)); });
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<Bitset> classes;
    for (const auto& [deg, v] : order) {
      bool placed = false;
      for (auto& cls : classes)
        if ((cls & nbr_[v]).none()) {
          cls.set(v);
          placed = true;
          break;
        }
      if (!placed) {
        classes.emplace_back(g_.vertex_count());
        classes.back().set(v);
      }
    }
    return classes.size();
  }

  bool partial_gp() const {
    std::vector<Point<Dim>> pts;
    for (auto v : current_) pts.push_back(g_.points[v]);
    return general_position(std::span<const Point<Dim>>(pts));
  }

  void emit() {
    std::vector<Point<Dim>> pts;
    for (auto v : current_) pts.push_back(g_.points[v]);
    const bool gp = general_position(std::span<const Point<Dim>>(pts));
    if (opts_.require_gp && !gp) return;
    CliqueResult r;
    r.members = current_;
    r.general_position = gp;
    for (std::size_t i = 0; i < current_.size(); ++i)
      for (std::size_t j = i + 1; j < current_.size(); ++j) r.witnesses.push_back(g_.witness(current_[i], current_[j]));
    out_.push_back(std::move(r));
  }

  void extend(const Bitset& cand) {
    if (full()) return;
    if (opts_.prune_non_gp && opts_.require_gp && !partial_gp()) return;
    const std::size_t have = current_.size();
    if (static_cast<int>(have) == k_) {
      emit();
      return;
    }
    const std::size_t need = static_cast<std::size_t>(k_) - have;
    if (cand.count() < need) return;
    if (need > 1 && colour_bound(cand) < need) return;
    std::vector<std::size_t> verts;
    cand.for_each([&](std::size_t v) { verts.push_back(v); });
    for (std::size_t v : verts) {
      Bitset next = cand & nbr_[v];
      next.clear_through(v);
      current_.push_back(static_cast<std::uint32_t>(v));
      extend(next);
      current_.pop_back();
      if (full()) return;
    }
  }

  const CliqueGraph<Dim>& g_;
  int k_;
  CliqueOptions opts_;
  std::vector<Bitset> nbr_;
  std::vector<std::uint32_t> current_;
  std::vector<CliqueResult> out_;
  std::size_t limit_ = 0;
};

}  // namespace

template <int Dim>
std::vector<CliqueResult> find_k_cliques(const CliqueGraph<Dim>& g, int k, const CliqueOptions& opts) {
  if (k < 1) throw std::invalid_argument("find_k_cliques: k must be positive");
  const std::size_t n = g.vertex_count();
  std::vector<CliqueResult> out;
  if (n == 0) return out;
  if (opts.threads <= 1) {
    CliqueSearch<Dim> search(g, k, opts);
    for (std::uint32_t root = 0; root < n; ++root) {
      const std::size_t remaining = opts.limit ? opts.limit - out.size() : 0;
      auto part = search.run_root(root, remaining);
      std::move(part.begin(), part.end(), std::back_inserter(out));
      if (opts.limit && out.size() >= opts.limit) break;
    }
    return out;
  }
  // Roots are independent; each worker keeps its own search state and the
  // per-root lists are concatenated in root order.
  std::vector<std::vector<CliqueResult>> per_root(n);
  const std::size_t chunks = std::min<std::size_t>(n, opts.threads * 4);
  for_each_chunk(n, chunks, opts.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    CliqueSearch<Dim> search(g, k, opts);
    for (std::size_t root = begin; root < end; ++root)
      per_root[root] = search.run_root(static_cast<std::uint32_t>(root), opts.limit);
  });
  for (auto& part : per_root) {
    for (auto& c : part) {
      if (opts.limit && out.size() >= opts.limit) return out;
      out.push_back(std::move(c));
    }
  }
  return out;
}

template std::vector<CliqueResult> find_k_cliques(const CliqueGraph<2>&, int, const CliqueOptions&);
template std::vector<CliqueResult> find_k_cliques(const CliqueGraph<3>&, int, const CliqueOptions&);

// ---- grids ----------------------------------------------------------------

namespace {

class GridSearch {
 public:
  GridSearch(std::vector<std::vector<std::int64_t>> meet, int k, std::size_t limit)
      : meet_(std::move(meet)), n_(meet_.size()), k_(static_cast<std::size_t>(k)), limit_(limit) {}

  std::vector<GridResult> run() {
    for (std::size_t first = 0; first < n_ && !full(); ++first) {
      first_ = {first};
      std::vector<std::size_t> cand;
      for (std::size_t j = first + 1; j < n_; ++j)
        if (meet_[first][j] >= 0) cand.push_back(j);
      grow_first(first, cand);
    }
    return std::move(out_);
  }

 private:
  bool full() const { return limit_ != 0 && out_.size() >= limit_; }

  // cand: lines j > min(L1), outside L1, meeting every line of L1 in a point
  // of P, with those points pairwise distinct.
  void grow_first(std::size_t last, const std::vector<std::size_t>& cand) {
    if (cand.size() < k_) return;
    if (first_.size() == k_) {
      second_.clear();
      grow_second(0, cand);
      return;
    }
    for (std::size_t i = last + 1; i < n_ && !full(); ++i) {
      std::vector<std::size_t> next;
      for (std::size_t j : cand) {
        if (j == i || meet_[i][j] < 0) continue;
        bool distinct = true;
        for (std::size_t f : first_)
          if (meet_[f][j] == meet_[i][j]) {
            distinct = false;
            break;
          }
        if (distinct) next.push_back(j);
      }
      first_.push_back(i);
      grow_first(i, next);
      first_.pop_back();
    }
  }

  void grow_second(std::size_t from, const std::vector<std::size_t>& cand) {
    if (second_.size() == k_) {
      GridResult g;
      for (auto f : first_) g.first.push_back(static_cast<std::uint32_t>(f));
      for (auto s : second_) g.second.push_back(static_cast<std::uint32_t>(s));
      for (auto f : first_)
        for (auto s : second_) g.intersection_points.push_back(static_cast<std::uint32_t>(meet_[f][s]));
      out_.push_back(std::move(g));
      return;
    }
    for (std::size_t c = from; c + (k_ - second_.size()) <= cand.size() && !full(); ++c) {
      const std::size_t j = cand[c];
      bool ok = true;
      for (std::size_t s : second_)
        for (std::size_t f : first_)
          if (meet_[f][s] == meet_[f][j]) ok = false;
      if (!ok) continue;
      second_.push_back(j);
      grow_second(c + 1, cand);
      second_.pop_back();
    }
  }

  std::vector<std::vector<std::int64_t>> meet_;
  std::size_t n_, k_, limit_;
  std::vector<std::size_t> first_, second_;
  std::vector<GridResult> out_;
};

}  // namespace

template <int Dim>
std::vector<GridResult> find_k_grids(const Arrangement<Dim>& a, int k, std::size_t limit) {
  if (k < 2) throw std::invalid_argument("find_k_grids: k must be at least 2");
  std::unordered_map<Point<Dim>, std::int64_t, GeometryHash> index;
  for (std::size_t i = 0; i < a.m(); ++i) index.emplace(a.points[i], static_cast<std::int64_t>(i));
  const std::size_t n = a.n();
  std::vector<std::vector<std::int64_t>> meet(n, std::vector<std::int64_t>(n, -1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (auto p = intersect(a.lines[i], a.lines[j])) {
        auto it = index.find(*p);
        if (it != index.end()) meet[i][j] = meet[j][i] = it->second;
      }
  return GridSearch(std::move(meet), k, limit).run();
}

template std::vector<GridResult> find_k_grids(const Arrangement2&, int, std::size_t);
template std::vector<GridResult> find_k_grids(const Arrangement3&, int, std::size_t);

// ---- regulus ----------------------------------------------------------------

std::vector<Quadric> regulus_quadric(const Line3& l1, const Line3& l2, const Line3& l3) {
  const auto basis = monomials_up_to(2);
  MatrixX<Rational> a = MatrixX<Rational>::Zero(9, 10);
  const Line3* lines[3] = {&l1, &l2, &l3};
  for (int li = 0; li < 3; ++li)
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const auto mono = Polynomial3<Rational>(Polynomial3<Rational>::Terms{{basis[c], Rational(1)}});
      const auto r = restrict_to_line(mono, *lines[li]);
      for (int t = 0; t < 3; ++t) a(3 * li + t, static_cast<Eigen::Index>(c)) = r.coefficient(t);
    }
  const auto ns = nullspace(a);
  std::vector<Quadric> out;
  for (Eigen::Index c = 0; c < ns.cols(); ++c) {
    std::array<Rational, 10> coeffs;
    for (int i = 0; i < 10; ++i) coeffs[i] = ns(i, c);
    out.push_back(Quadric::from_coefficients(coeffs));
  }
  return out;
}

std::vector<std::size_t> lines_on_quadric(std::span<const Line3> lines, const Quadric& f) {
  const auto poly = f.polynomial();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (restrict_to_line(poly, lines[i]).is_zero()) out.push_back(i);
  return out;
}

}  // namespace incidence_lab
