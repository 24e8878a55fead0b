#include <doctest.h>

#include <cmath>
#include <sstream>

#include "incidence_lab/arrangement.hpp"
#include "incidence_lab/incidence.hpp"
#include "incidence_lab/recipes.hpp"
#include "support.hpp"

using namespace testing;

namespace {

// Σ over lines y = a x + b and abscissae x of [a x + b within the point range]
std::int64_t planar_grid_closed_form(std::int64_t side) {
  const std::int64_t tall = side * side;
  std::int64_t total = 0;
  for (std::int64_t a = 1; a <= side; ++a)
    for (std::int64_t b = 1; b <= tall; ++b)
      for (std::int64_t x = 1; x <= side; ++x) total += a * x + b <= tall;
  return total;
}

// Σ_x S(x)^2 with S(x) = #{(slope, offset) : slope * x + offset <= offset_range}
std::int64_t spatial_grid_closed_form(std::int64_t x_range, std::int64_t offset_range, std::int64_t slope_range) {
  std::int64_t total = 0;
  for (std::int64_t x = 1; x <= x_range; ++x) {
    std::int64_t s = 0;
    for (std::int64_t a = 1; a <= slope_range; ++a)
      for (std::int64_t b = 1; b <= offset_range; ++b) s += a * x + b <= offset_range;
    total += s * s;
  }
  return total;
}

}  // namespace

TEST_SUITE("arrangements") {
  TEST_CASE("planar grid sizes and incidences") {
    const auto a = gen_planar_grid(27);
    CHECK(a.m() == 27);
    CHECK(a.n() == 27);
    CHECK(count_incidences_oracle(a).total == 45);
    CHECK(planar_grid_closed_form(3) == 45);
    CHECK(count_incidences_oracle(gen_planar_grid(1000)).total == planar_grid_closed_form(10));

    const auto one = gen_planar_grid(1);
    REQUIRE(one.m() == 1);
    CHECK(one.points[0] == pt(1, 1));
    CHECK(one.lines[0] == Line2::slope_intercept(q(1), q(1)));
    CHECK(count_incidences_oracle(one).total == 0);
    CHECK_THROWS_AS(gen_planar_grid(26), std::invalid_argument);
  }

  TEST_CASE("planar grid degree claims") {
    for (std::int64_t side : {3, 5, 10, 20}) {
      const std::int64_t n = side * side * side;
      const auto rep = count_incidences_fast(gen_planar_grid(n));
      std::int64_t heavy = 0;
      for (auto d : rep.point_degrees) heavy += 2 * d >= side;
      CHECK(2 * heavy >= n);
      CHECK(4 * static_cast<double>(rep.total) >= std::pow(static_cast<double>(n), 4.0 / 3.0));
    }
  }

  TEST_CASE("spatial grid ranges and incidences") {
    const auto shape = spatial_grid_shape(256, 256);
    CHECK(shape.x_range == 4);
    CHECK(shape.offset_range == 8);
    CHECK(shape.slope_range == 2);
    const auto a = gen_spatial_grid(256, 256);
    CHECK(a.m() == 256);
    CHECK(a.n() == 256);
    CHECK(count_incidences_oracle(a).total == 334);
    CHECK(spatial_grid_closed_form(4, 8, 2) == 334);
    for (const auto& p : a.points) {
      CHECK(p(0) >= 1);
      CHECK(p(0) <= 4);
      CHECK(p(1) <= 8);
      CHECK(p(2) <= 8);
    }
    const auto b = gen_spatial_grid(6561, 6561);
    const auto sb = spatial_grid_shape(6561, 6561);
    CHECK(count_incidences_fast(b).total == spatial_grid_closed_form(sb.x_range, sb.offset_range, sb.slope_range));
    CHECK_THROWS_AS(spatial_grid_shape(256, 100), std::invalid_argument);
  }

  TEST_CASE("spatial grid: no line in a plane perpendicular to the x-axis") {
    for (const auto& l : gen_spatial_grid(256, 256).lines) CHECK(l.direction()(0) != 0);
  }

  TEST_CASE("random_subsample") {
    const auto a = gen_planar_grid(1000);
    CHECK(random_subsample(a, q(1), 5) == a);
    const auto none = random_subsample(a, q(0), 5);
    CHECK(none.m() == 0);
    CHECK(none.n() == 0);
    CHECK(random_subsample(a, q(1, 3), 9) == random_subsample(a, q(1, 3), 9));

    auto shuffled = a;
    std::reverse(shuffled.points.begin(), shuffled.points.end());
    std::reverse(shuffled.lines.begin(), shuffled.lines.end());
    auto s1 = random_subsample(a, q(1, 3), 9), s2 = random_subsample(shuffled, q(1, 3), 9);
    std::sort(s1.points.begin(), s1.points.end(), PointLess{});
    std::sort(s2.points.begin(), s2.points.end(), PointLess{});
    std::sort(s1.lines.begin(), s1.lines.end());
    std::sort(s2.lines.begin(), s2.lines.end());
    CHECK(s1 == s2);
  }

  TEST_CASE("random_subsample sample mean at q = 1/16") {
    const auto a = gen_planar_grid(216);
    const double p = 1.0 / 16, n = static_cast<double>(a.m());
    double sum = 0;
    const int seeds = 1000;
    for (int s = 0; s < seeds; ++s) sum += static_cast<double>(random_subsample(a, q(1, 16), static_cast<std::uint64_t>(s)).m());
    const double mean = sum / seeds;
    const double sigma = std::sqrt(n * p * (1 - p) / seeds);
    CHECK(std::abs(mean - n * p) <= 3 * sigma);
  }

  TEST_CASE("file round trip and duplicates") {
    for (const AnyArrangement& a : {AnyArrangement(gen_planar_grid(27)), AnyArrangement(gen_spatial_grid(256, 256)),
                                    AnyArrangement(Arrangement2{}), AnyArrangement(Arrangement3{})}) {
      std::stringstream ss;
      write_arrangement(a, ss);
      const auto back = read_arrangement(ss);
      CHECK(back.arrangement == a);
      CHECK(back.duplicates.lines_removed == 0);
    }
    std::stringstream dup("dim=2 points=1 lines=2\nP 1/2 3\nL2 1 -1 0\nL2 2 -2 0\n");
    const auto r = read_arrangement(dup);
    CHECK(r.duplicates.lines_removed == 1);
    CHECK(std::get<Arrangement2>(r.arrangement).n() == 1);

    std::stringstream bad("dim=2 points=1 lines=0\nP 1 2 3\n");
    try {
      read_arrangement(bad);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    std::stringstream mixed("dim=3 points=1 lines=1\nP 1 2 3\nL2 1 1 1\n");
    CHECK_THROWS_AS(read_arrangement(mixed), ParseError);
  }
}

TEST_SUITE("recipes") {
  TEST_CASE("planar recipe parameters") {
    const auto p = no_clique_params_2d(8, 4);
    CHECK(p.point_size_formula == doctest::Approx(256));
    CHECK(p.q == q(1, 16));
    CHECK(p.q_exact);
    // smallest cube with t^6 >= 16^4
    std::int64_t t = 1;
    while (t * t * t * t * t * t < 65536) ++t;
    CHECK(p.generator_points == t * t * t);
    CHECK_THROWS_AS(no_clique_params_2d(8, 3), std::invalid_argument);
  }

  TEST_CASE("spatial recipe parameters") {
    const auto p = no_clique_params_3d(8, 8, 4);
    CHECK(p.point_size_formula == doctest::Approx(256));
    CHECK(p.q == q(1, 16));
    CHECK_NOTHROW(spatial_grid_shape(p.generator_points, p.generator_lines));
    CHECK_THROWS_AS(no_clique_params_3d(2, 8, 4), std::invalid_argument);
  }

  TEST_CASE("planar recipe output") {
    const auto r = build_no_clique_2d(8, 4, 123);
    CHECK(r.arrangement.m() == 8);
    CHECK(r.arrangement.n() == 8);
    CHECK(9 * r.diagnostics.output_incidences >= r.diagnostics.sample_incidences);
    CHECK(r.diagnostics.attempts.back().x3);
    CHECK(build_no_clique_2d(8, 4, 123).arrangement == r.arrangement);
  }

  TEST_CASE("zero probability always fails the events") {
    RecipeOptions opts;
    opts.retry_cap = 3;
    opts.q_override = q(0);
    try {
      build_no_clique_2d(8, 4, 1, opts);
      FAIL("expected retry exhaustion");
    } catch (const RetryExhausted& e) {
      CHECK(e.failing_event() == "X2");
    }
  }
}
