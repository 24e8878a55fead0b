#include <doctest.h>

#include <cmath>
#include <sstream>

#include "incidence_lab/incidence.hpp"
#include "incidence_lab/pruner.hpp"
#include "incidence_lab/report_io.hpp"
#include "incidence_lab/sweep.hpp"
#include "support.hpp"

using namespace testing;

TEST_SUITE("experiments-cli") {
  TEST_CASE("csv rows round trip") {
    BoundParams r3;
    r3.r = 3;
    std::vector<ReportRow> rows{report_row(check_bound(gen_planar_grid(27), BoundKind::szemeredi_trotter)),
                                report_row(check_bound(gen_spatial_grid(256, 256), BoundKind::guth_katz)),
                                report_row(check_bound(gen_spatial_grid(256, 256), BoundKind::rich, r3))};
    CHECK(rows[0].kind == "ST");
    CHECK(rows[0].total == 45);
    CHECK_FALSE(rows[0].max_coplanar);
    CHECK(rows[1].max_coplanar);
    CHECK(rows[2].r == 3);
    for (const auto& row : rows) CHECK(parse_csv_row(to_csv(row)) == row);

    std::stringstream ss;
    write_csv(rows, ss);
    std::string first;
    std::getline(std::stringstream(ss.str()), first);
    CHECK(first == "kind,m,n,total,max_coplanar,r,rich_count,ratio_dominant");
    CHECK(first == csv_header());
    CHECK(read_csv(ss) == rows);

    CHECK_THROWS_AS(parse_csv_row("ST,1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv_row("XX,1,1,0,,,,0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv_row("ST,a,1,0,,,,0"), std::invalid_argument);
  }

  TEST_CASE("json shapes") {
    using P3 = Polynomial3<Rational>;
    const P3 f(P3::Terms{{{0, 0, 1}, q(1)}, {{1, 1, 0}, q(-1, 2)}, {{0, 0, 0}, q(3)}});
    const Json j = to_json(f);
    REQUIRE(j.size() == 3);
    CHECK(j[0]["exponent"] == Json::array({0, 0, 0}));
    CHECK(j[0]["coeff"] == "3/1");
    CHECK(j[1]["exponent"] == Json::array({0, 0, 1}));
    CHECK(j[2]["coeff"] == "-1/2");
    CHECK(j.dump() == to_json(P3(f.terms())).dump());

    CHECK(to_json(Plane::from_coefficients(vec(0, 2, 0), q(4))) == Json::array({"0", "1", "0", "2"}));

    PrunerState st;
    for (int i = 0; i < 4; ++i) st.classes.push_back({pt(i, i * i, 1), pt(-i, 2, i * 3 + 1), pt(5, i, -i)});
    const auto cert = prune_step(st, pair_schedule(4)[0]);
    const Json c = to_json(cert);
    CHECK(c["step"] == 0);
    CHECK(c["plane"].size() == 4);
    CHECK(c["sides"].size() == 4);
    CHECK(c["retained"]["3"]["before"] == 3);
    for (int i = 0; i < 4; ++i) CHECK(c["sides"][std::to_string(i)] == cert.side_of(i));
  }

  TEST_CASE("gnuplot data") {
    std::stringstream ss;
    const std::vector<std::string> cols{"n", "total"};
    const std::vector<std::vector<double>> rows{{27, 45}, {1000, 4000.5}};
    write_gnuplot(cols, rows, ss);
    CHECK(ss.str() == "# n total\n27 45\n1000 4000.5\n");
  }

  TEST_CASE("log-log fit") {
    std::vector<double> x{2, 4, 8, 16, 32}, y;
    for (double v : x) y.push_back(3 * std::pow(v, 1.5));
    const auto fit = fit_loglog(x, y);
    CHECK(fit.slope == doctest::Approx(1.5));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)));
    CHECK(fit.residual == doctest::Approx(0).epsilon(1e-9));
    CHECK(fit.samples == 5);

    const std::vector<double> noisy_y{1, 3, 2, 5, 4};
    CHECK(fit_loglog(x, noisy_y).residual > 0);
    const std::vector<double> bad{1, -1, 2, 3, 4};
    CHECK_THROWS_AS(fit_loglog(x, bad), std::invalid_argument);
  }

  TEST_CASE("sweep rows, fit and validation") {
    SweepSpec spec;
    spec.family = SweepFamily::planar_grid;
    spec.sizes = {27, 1000, 27000};
    const auto out = run_sweep(spec);
    REQUIRE(out.rows.size() == 3);
    CHECK(out.rows[0].total == 45);
    CHECK(out.sizes == std::vector<std::int64_t>{27, 1000, 27000});
    CHECK(out.fit.samples == 3);
    CHECK(out.fit.residual >= 0);

    spec.threads = 1;
    CHECK(run_sweep(spec).rows == out.rows);

    SweepSpec same = spec;
    same.sizes = {1000, 1000, 1000};
    CHECK(run_sweep(same).fit.residual == doctest::Approx(0));

    spec.sizes = {27, 28, 1000};
    try {
      run_sweep(spec);
      FAIL("expected an invalid size");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("28") != std::string::npos);
    }
    spec.sizes = {27, 1000};
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);

    SweepSpec spatial;
    spatial.family = SweepFamily::spatial_grid;
    spatial.sizes = {256, 4096, 6561};
    try {
      run_sweep(spatial);
      FAIL("expected an invalid size");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("4096") != std::string::npos);
    }
    CHECK(parse_sweep_family("no-clique-3d") == SweepFamily::no_clique_3d);
    CHECK_THROWS_AS(parse_sweep_family("cubes"), std::invalid_argument);
  }
}
