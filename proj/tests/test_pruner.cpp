#include <doctest.h>

#include <set>

#include "incidence_lab/pruner.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace testing;

namespace {

std::size_t count_open(const Plane& p, std::span<const Point3> pts, int side) {
  std::size_t n = 0;
  for (const auto& x : pts) n += p.side(x) == side;
  return n;
}

bool subset_of(const std::vector<Point3>& part, const std::vector<Point3>& whole) {
  std::set<Point3, PointLess> w(whole.begin(), whole.end());
  for (const auto& p : part)
    if (!w.count(p)) return false;
  return true;
}

// Every transversal of every 4 classes, exhaustively.
bool all_transversals_non_coplanar(const std::vector<std::vector<Point3>>& classes) {
  bool ok = true;
  for_each_subset(classes.size(), 4, [&](const std::vector<std::uint32_t>& s) {
    for (const auto& a : classes[s[0]])
      for (const auto& b : classes[s[1]])
        for (const auto& c : classes[s[2]])
          for (const auto& d : classes[s[3]]) ok = ok && !coplanar4(a, b, c, d);
  });
  return ok;
}

Point3 point_on(const Plane& p) {
  const Vector3<Rational> n = to_rational(p.normal());
  return Point3(n * (Rational(p.offset()) / n.squaredNorm()));
}

}  // namespace

TEST_SUITE("same-type-pruner") {
  TEST_CASE("schedule length and completeness") {
    CHECK(pair_schedule(4).size() == 7);
    for (int k : {4, 5, 6, 7}) {
      const auto sched = pair_schedule(k);
      std::int64_t subsets = 0;
      for_each_subset(static_cast<std::size_t>(k), 4, [&](const std::vector<std::uint32_t>&) { ++subsets; });
      REQUIRE(sched.size() == static_cast<std::size_t>(7 * subsets));
      std::set<std::pair<std::set<int>, std::set<int>>> seen;
      for (std::size_t i = 0; i < sched.size(); i += 7) {
        std::set<int> quad;
        for (int x : sched[i].a) quad.insert(x);
        for (int x : sched[i].b) quad.insert(x);
        REQUIRE(quad.size() == 4);
        std::set<std::set<int>> groups;
        for (std::size_t j = i; j < i + 7; ++j) {
          std::set<int> a(sched[j].a.begin(), sched[j].a.end()), b(sched[j].b.begin(), sched[j].b.end());
          std::set<int> u = a;
          u.insert(b.begin(), b.end());
          CHECK(u == quad);
          CHECK(a.count(*quad.begin()));
          groups.insert(a);
          seen.insert({a, b});
        }
        CHECK(groups.size() == 7);
      }
      CHECK(seen.size() == sched.size());
    }
    CHECK_THROWS(pair_schedule(3));
  }

  TEST_CASE("ham sandwich on small sets") {
    const std::vector<Point3> s1{pt(0, 0, 0)}, s2{pt(1, 0, 0)}, s3{pt(0, 1, 0)};
    const Plane p = ham_sandwich_3sets(s1, s2, s3);
    CHECK(p == Plane::from_coefficients(vec(0, 0, 1), q(0)));
    CHECK(bisects(p, s1));

    const std::vector<Point3> row{pt(0, 0, -1), pt(0, 0, 0), pt(0, 0, 1)};
    const Plane z0 = Plane::from_coefficients(vec(0, 0, 1), q(0));
    CHECK(bisects(z0, row));
    CHECK_FALSE(bisects(Plane::from_coefficients(vec(0, 0, 1), q(2)), row));
  }

  TEST_CASE("ham sandwich bisects random triples of sets") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto c = random_classes(seed, 3, 50, 50);
      const Plane p = ham_sandwich_3sets(c[0], c[1], c[2]);
      for (const auto& s : c) {
        CHECK(bisects(p, s));
        CHECK(2 * count_open(p, s, 1) <= s.size());
        CHECK(2 * count_open(p, s, -1) <= s.size());
      }
    }
  }

  TEST_CASE("classes separated by coordinate planes") {
    PrunerState st;
    const int sx[] = {1, 1, -1, -1}, sy[] = {1, -1, 1, -1};
    for (int i = 0; i < 4; ++i) {
      std::vector<Point3> c;
      for (int j = 1; j <= 5; ++j) c.push_back(pt(sx[i] * (10 + j), sy[i] * (10 + 2 * j), j));
      st.classes.push_back(c);
    }
    const auto before = st.classes;
    for (const auto& split : pair_schedule(4)) {
      const auto cert = prune_step(st, split);
      CHECK(verify_separation(cert, st.classes));
      for (int i = 0; i < 4; ++i) CHECK(3 * cert.after[i] >= cert.before[i]);
    }
    for (int i = 0; i < 4; ++i) CHECK(subset_of(st.classes[i], before[i]));
  }

  TEST_CASE("one step retains a third on random instances") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      CAPTURE(seed);
      PrunerState st;
      st.classes = random_classes(seed, 4, 4, 30);
      const auto sched = pair_schedule(4);
      const auto& split = sched[seed % 7];
      const auto before = st.classes;
      const auto cert = prune_step(st, split);
      for (int i = 0; i < 4; ++i) {
        CHECK(st.classes[i].size() >= before[i].size() / 3);
        CHECK(3 * st.classes[i].size() >= before[i].size());
        CHECK(subset_of(st.classes[i], before[i]));
        CHECK(cert.after[i] == st.classes[i].size());
      }
      CHECK(verify_separation(cert, st.classes));
      CHECK(st.history.size() == 1);
    }
  }

  TEST_CASE("concentration on the fourth class shifts the plane") {
    auto c = random_classes(12, 3, 20, 20);
    const Plane pi = ham_sandwich_3sets(c[0], c[1], c[2]);
    // half of the fourth class lies on the cut, the rest off it
    const Vector3<Rational> n = to_rational(pi.normal());
    Vector3<Rational> u = n.cross(Vector3<Rational>::UnitX());
    if (exactly_zero(u)) u = n.cross(Vector3<Rational>::UnitY());
    const Vector3<Rational> v = n.cross(u);
    std::vector<Point3> fourth;
    for (int i = 1; i <= 6; ++i) fourth.push_back(point_on(pi) + q(i) * u + q(i * i) * v);
    for (int i = 1; i <= 6; ++i) fourth.push_back(point_on(pi) + q(i) * u + q(i) * n);
    c.push_back(fourth);

    PrunerState st;
    st.classes = c;
    const auto cert = prune_step(st, pair_schedule(4)[0]);
    CHECK(cert.kind == StepCase::offset);
    CHECK(cert.concentrated == std::vector<int>{3});
    CHECK(exactly_zero(to_rational(cert.plane.normal()).cross(n)));
    CHECK(cert.plane != pi);
    CHECK(verify_separation(cert, st.classes));
    for (int i = 0; i < 4; ++i) CHECK(3 * cert.after[i] >= cert.before[i]);
  }

  TEST_CASE("moving a point onto the plane breaks the certificate") {
    PrunerState st;
    st.classes = random_classes(4, 4, 10, 10);
    const auto cert = prune_step(st, pair_schedule(4)[2]);
    REQUIRE(verify_separation(cert, st.classes));
    auto broken = st.classes;
    broken[cert.split.a[0]][0] = point_on(cert.plane);
    CHECK_FALSE(verify_separation(cert, broken));
  }

  TEST_CASE("full schedule: retention, certificates, transversals") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      CAPTURE(seed);
      const int k = seed < 4 ? 4 : 5;
      const auto input = random_classes(100 + seed, k, 1, 6);
      const auto r = prune_all(input);
      CHECK(r.certificates.size() == pair_schedule(k).size());
      for (int i = 0; i < k; ++i) {
        std::size_t bound = 1;
        for (int s = 0; s < r.steps_per_class[i]; ++s) bound *= 3;
        CHECK(r.classes[i].size() * bound >= input[i].size());
        CHECK_FALSE(r.classes[i].empty());
        CHECK(r.steps_per_class[i] == 7 * (k == 4 ? 1 : 4));
        CHECK(subset_of(r.classes[i], input[i]));
      }
      for (const auto& cert : r.certificates) CHECK(verify_separation(cert, r.classes));
      CHECK(all_transversals_non_coplanar(r.classes));
    }
  }

  TEST_CASE("perturbed runs map back to the input") {
    const auto input = random_classes(7, 4, 8, 12);
    PruneOptions opts;
    opts.perturb_seed = 99;
    const auto r = prune_all(input, opts);
    for (int i = 0; i < 4; ++i) CHECK(subset_of(r.classes[i], input[i]));
    for (const auto& cert : r.certificates) CHECK(verify_separation(cert, r.classes));
    CHECK(all_transversals_non_coplanar(r.classes));
  }

  TEST_CASE("interleaved coplanar classes cannot be separated") {
    std::vector<std::vector<Point3>> classes(4);
    for (int x = 0; x < 6; ++x)
      for (int y = 0; y < 6; ++y) classes[static_cast<std::size_t>((x + 2 * y) % 4)].push_back(pt(x, y, 0));
    try {
      prune_all(classes);
      FAIL("expected MULTI_CONCENTRATION");
    } catch (const MultiConcentration& e) {
      CHECK(e.indices().size() >= 2);
    }
    CHECK_THROWS_AS(prune_all({{pt(0, 0, 0)}, {pt(1, 0, 0)}, {pt(0, 1, 0)}}), std::invalid_argument);
    CHECK_THROWS_AS(prune_all({{pt(0, 0, 0)}, {pt(1, 0, 0)}, {pt(0, 1, 0)}, {}}), std::invalid_argument);
  }
}
