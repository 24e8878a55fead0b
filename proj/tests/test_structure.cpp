#include <doctest.h>

#include <set>

#include "incidence_lab/structure.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace testing;

namespace {

template <int Dim>
std::size_t check_cliques_against_oracle(const Arrangement<Dim>& a, int k, bool gp) {
  const auto g = build_clique_graph(a);
  CliqueOptions opts;
  opts.require_gp = gp;
  const auto found = find_k_cliques(g, k, opts);
  const auto expected = exhaustive_cliques(a, k, gp);
  REQUIRE(found.size() == expected.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    CHECK(found[i].members == expected[i].members);
    CHECK(found[i].general_position == expected[i].general_position);
    // witness soundness: each witness is the lowest line through the pair
    std::size_t w = 0;
    for (std::size_t x = 0; x < found[i].members.size(); ++x)
      for (std::size_t y = x + 1; y < found[i].members.size(); ++y, ++w) {
        const auto& p = a.points[found[i].members[x]];
        const auto& r = a.points[found[i].members[y]];
        const auto line = found[i].witnesses.at(w);
        CHECK(point_on_line(p, a.lines[line]));
        CHECK(point_on_line(r, a.lines[line]));
        for (std::uint32_t lower = 0; lower < line; ++lower)
          CHECK_FALSE((point_on_line(p, a.lines[lower]) && point_on_line(r, a.lines[lower])));
      }
  }
  return found.size();
}

template <int Dim>
std::size_t check_grids_against_oracle(const Arrangement<Dim>& a, int k) {
  const auto found = find_k_grids(a, k);
  const auto expected = exhaustive_grids(a, k);
  REQUIRE(found.size() == expected.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    CHECK(found[i].first == expected[i].first);
    CHECK(found[i].second == expected[i].second);
    const auto kk = static_cast<std::size_t>(k);
    REQUIRE(found[i].intersection_points.size() == kk * kk);
    for (std::size_t x = 0; x < kk; ++x)
      for (std::size_t y = 0; y < kk; ++y) {
        const auto& p = a.points[found[i].intersection_points[x * kk + y]];
        CHECK(point_on_line(p, a.lines[found[i].first[x]]));
        CHECK(point_on_line(p, a.lines[found[i].second[y]]));
      }
  }
  return found.size();
}

Line3 saddle_ruling(std::int64_t c, bool first_family) {
  // z = x y contains (t, c, c t) and (c, t, c t)
  return first_family ? Line3::from_point_direction(pt(0, c, 0), vec(1, 0, c))
                      : Line3::from_point_direction(pt(c, 0, 0), vec(0, 1, c));
}

}  // namespace

TEST_SUITE("structure-finder") {
  TEST_CASE("tetrahedron edges form one clique in general position") {
    const std::vector<Point3> tet{pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)};
    std::vector<Line3> edges;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) edges.push_back(Line3::through(tet[i], tet[j]));
    const auto g = build_clique_graph(make_arrangement<3>(tet, edges));
    CHECK(g.edge_count() == 6);
    const auto c = find_k_cliques(g, 4);
    REQUIRE(c.size() == 1);
    CHECK(c[0].members == std::vector<std::uint32_t>{0, 1, 2, 3});
    CHECK(c[0].general_position);
    CHECK(c[0].witnesses.size() == 6);
  }

  TEST_CASE("coplanar quadruple is a clique but not in general position") {
    const std::vector<Point3> sq{pt(0, 0, 0), pt(1, 0, 0), pt(0, 1, 0), pt(1, 1, 0)};
    std::vector<Line3> edges;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) edges.push_back(Line3::through(sq[i], sq[j]));
    const auto g = build_clique_graph(make_arrangement<3>(sq, edges));
    CliqueOptions gp;
    gp.require_gp = true;
    CHECK(find_k_cliques(g, 4, gp).empty());
    const auto all = find_k_cliques(g, 4);
    REQUIRE(all.size() == 1);
    CHECK_FALSE(all[0].general_position);
  }

  TEST_CASE("a line through several points gives a complete graph") {
    std::vector<Point2> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(pt(i, 2 * i));
    const auto a = make_arrangement<2>(pts, {Line2::slope_intercept(q(2), q(0))});
    const auto g = build_clique_graph(a);
    CHECK(g.edge_count() == 10);
    CHECK(g.witness(1, 3) == 0);
    CHECK(find_k_cliques(g, 3).size() == 10);
    CliqueOptions gp;
    gp.require_gp = true;
    CHECK(find_k_cliques(g, 3, gp).empty());
  }

  TEST_CASE("cliques match the exhaustive oracle") {
    std::size_t seen = 0, seen_gp = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      CAPTURE(seed);
      const int k = seed % 2 ? 3 : 4;
      if (seed % 3 == 0) {
        const auto a = dense_instance<2>(seed, 30, 30, 4);
        seen += check_cliques_against_oracle(a, k, false);
        seen_gp += check_cliques_against_oracle(a, k, true);
      } else {
        const auto a = dense_instance<3>(seed, 30, 30, 3);
        seen += check_cliques_against_oracle(a, k, false);
        seen_gp += check_cliques_against_oracle(a, k, true);
      }
    }
    MESSAGE("cliques: " << seen << ", in general position: " << seen_gp);
    CHECK(seen_gp > 0);
  }

  TEST_CASE("clique options do not change the answer") {
    // the first seed with a general-position 4-clique
    std::uint64_t seed = 0;
    while (exhaustive_cliques(dense_instance<3>(seed, 30, 30, 3), 4, true).empty()) ++seed;
    const auto g = build_clique_graph(dense_instance<3>(seed, 30, 30, 3));
    CliqueOptions plain, pruned, threaded;
    plain.require_gp = pruned.require_gp = threaded.require_gp = true;
    pruned.prune_non_gp = true;
    threaded.threads = 4;
    const auto base = find_k_cliques(g, 4, plain);
    CHECK_FALSE(base.empty());
    CHECK(find_k_cliques(g, 4, pruned) == base);
    CHECK(find_k_cliques(g, 4, threaded) == base);
    CliqueOptions limited;
    limited.limit = 2;
    const auto all = find_k_cliques(g, 3);
    const auto first = find_k_cliques(g, 3, limited);
    REQUIRE(all.size() >= 2);
    CHECK(first == std::vector<CliqueResult>(all.begin(), all.begin() + 2));
  }

  TEST_CASE("grids on a lattice") {
    // horizontal and vertical lines through a 3 x 3 lattice
    std::vector<Point2> pts;
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) pts.push_back(pt(x, y));
    std::vector<Line2> lines;
    for (int c = 0; c < 3; ++c) lines.push_back(Line2::from_coefficients(q(0), q(1), q(c)));
    for (int c = 0; c < 3; ++c) lines.push_back(Line2::from_coefficients(q(1), q(0), q(c)));
    const auto a = make_arrangement<2>(pts, lines);
    CHECK(find_k_grids(a, 3).size() == 1);
    CHECK(find_k_grids(a, 2).size() == 9);
    check_grids_against_oracle(a, 2);
    check_grids_against_oracle(a, 3);
    CHECK(find_k_grids(a, 2, 4).size() == 4);
  }

  TEST_CASE("grids match the exhaustive oracle") {
    std::size_t seen = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      CAPTURE(seed);
      if (seed % 2) {
        seen += check_grids_against_oracle(dense_instance<2>(seed, 30, 30, 4), 3 + static_cast<int>(seed % 4 == 1));
      } else {
        seen += check_grids_against_oracle(dense_instance<3>(seed, 30, 30, 3), 3 + static_cast<int>(seed % 4 == 0));
      }
    }
    MESSAGE("grids: " << seen);
    CHECK(seen > 0);
  }

  TEST_CASE("three rulings of a saddle determine it") {
    const auto basis = regulus_quadric(saddle_ruling(0, true), saddle_ruling(1, true), saddle_ruling(2, true));
    REQUIRE(basis.size() == 1);
    std::array<Rational, 10> c{};
    const auto mons = monomials_up_to(2);
    for (std::size_t i = 0; i < mons.size(); ++i) {
      if (mons[i] == Exponent3{0, 0, 1}) c[i] = 1;
      if (mons[i] == Exponent3{1, 1, 0}) c[i] = -1;
    }
    CHECK(basis[0] == Quadric::from_coefficients(c));

    std::vector<Line3> lines;
    for (int i = -2; i <= 2; ++i) {
      lines.push_back(saddle_ruling(i, true));
      lines.push_back(saddle_ruling(i, false));
    }
    lines.push_back(Line3::through(pt(0, 0, 1), pt(1, 0, 1)));
    const auto on = lines_on_quadric(lines, basis[0]);
    CHECK(on.size() == 10);
    CHECK(std::find(on.begin(), on.end(), std::size_t{10}) == on.end());
  }

  TEST_CASE("degenerate triples have larger quadric spaces") {
    const Line3 a = Line3::through(pt(0, 0, 0), pt(1, 0, 0));
    const Line3 b = Line3::through(pt(0, 0, 0), pt(0, 1, 0));
    const Line3 c = Line3::through(pt(0, 1, 0), pt(1, 0, 0));
    CHECK(regulus_quadric(a, b, c).size() >= 4);
    CHECK(regulus_quadric(a, a, a).size() == 7);
    for (const auto& f : regulus_quadric(a, b, c)) {
      const std::vector<Line3> three{a, b, c};
      CHECK(lines_on_quadric(three, f).size() == 3);
    }
  }

  TEST_CASE("second family of a saddle grid lies on the quadric of the first") {
    std::vector<Line3> lines;
    std::vector<Point3> pts;
    for (int i = 0; i < 3; ++i) lines.push_back(saddle_ruling(i, true));
    for (int j = 0; j < 3; ++j) lines.push_back(saddle_ruling(j + 5, false));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) pts.push_back(pt(j + 5, i, (j + 5) * i));
    const auto a = make_arrangement<3>(pts, lines);
    const auto grids = find_k_grids(a, 3);
    REQUIRE(grids.size() == 1);
    const auto& g = grids[0];
    const auto basis = regulus_quadric(a.lines[g.first[0]], a.lines[g.first[1]], a.lines[g.first[2]]);
    REQUIRE(basis.size() == 1);
    const auto on = lines_on_quadric(a.lines, basis[0]);
    for (auto l : g.second) CHECK(std::find(on.begin(), on.end(), l) != on.end());
  }
}
