#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "degenlab/studies.hpp"

using namespace dgl;

namespace {

Config text_config(const std::string& body) {
  std::istringstream is(body);
  return Config::parse(is, "test.cfg");
}

const char* kSmall =
    "n = 2\nh = 1/8\nT = 0.01\np = 2\ndelta = 1\nepsilon = 0.1\n"
    "boundary_g = sine 2\neps_ladder = 0.2, 0.1\neps_ref = 0.05\n";

std::size_t lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

GridField constant_levels(const Grid& g, double value, int levels, double dt) {
  GridField f(g, 1);
  for (int l = 0; l < levels; ++l) f.push(l * dt, Field(g, 1, value));
  return f;
}

}  // namespace

TEST_CASE("study specs from configs") {
  const StudySpec s = study_spec(text_config(kSmall), "eps-convergence");
  CHECK(s.eps_ladder == std::vector<double>{0.2, 0.1});
  CHECK(s.base.grid.cells() == 8);
  CHECK(s.base.snapshot_every == doctest::Approx(0.01 / 20));
  CHECK_THROWS_AS(study_spec(text_config(std::string(kSmall) + "bogus = 1\n"), "moser"), ConfigError);
  CHECK_THROWS_AS(study_spec(text_config(kSmall), "uniqueness"), ConfigError);
}

TEST_CASE("spec invariants") {
  StudySpec s = study_spec(text_config(kSmall), "eps-convergence");
  CHECK_NOTHROW(check_spec(s));
  auto bad = s;
  bad.eps_ladder = {0.1, 0.2};
  CHECK_THROWS_AS(check_spec(bad), std::invalid_argument);
  bad = s;
  bad.eps_ladder = {0.3, 0.1};  // above min{1/2, delta/4} for p = 2
  CHECK_THROWS_AS(check_spec(bad), std::invalid_argument);
  bad = s;
  bad.eps_ref = 0.1;
  CHECK_THROWS_AS(check_spec(bad), std::invalid_argument);
  bad = s;
  bad.kind = "nope";
  CHECK_THROWS_AS(check_spec(bad), std::invalid_argument);
  bad = s;
  bad.kind = "gradbound";
  bad.s_values = {1.0};
  CHECK_THROWS_AS(check_spec(bad), std::invalid_argument);
  bad.s_values = {0.5};
  bad.z1 = {0.1, 0.5, 0.01};
  CHECK_THROWS_AS(check_spec(bad), std::invalid_argument);
  bad.z1 = {0.5, 0.5, 0.01};
  bad.r = 0.05;
  CHECK_NOTHROW(check_spec(bad));
  bad.z1 = {0.5, 0.5};
  CHECK_THROWS_AS(check_spec(bad), std::invalid_argument);
  bad = s;
  bad.workers = 0;
  CHECK_THROWS_AS(check_spec(bad), std::invalid_argument);
}

TEST_CASE("loglog slope") {
  std::vector<double> x{0.2, 0.1, 0.05, 0.025}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.7));
  CHECK(loglog_slope(x, y) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(std::isnan(loglog_slope({1.0}, {1.0})));
}

TEST_CASE("H_delta and G_delta fields") {
  const Grid g(2, 8);
  const GridField z = constant_levels(g, 4.0, 3, 0.1);
  const GridField H = h_delta_field(z, 0.5);
  for (std::size_t l = 0; l < H.levels(); ++l)
    for (double v : H.level(l).data()) CHECK(v == 1.5);
  const GridField d = g_delta_difference(z, z, 0.5);
  for (double v : d.level(2).data()) CHECK(v == 0.0);
  CHECK(sup_l2_distance_sq(z, z) == 0.0);
  CHECK_THROWS(g_delta_difference(z, constant_levels(g, 1.0, 2, 0.1), 0.5));
}

TEST_CASE("eps-convergence table") {
  const StudySpec s = study_spec(text_config(kSmall), "eps-convergence");
  const StudyResult r = run_study(s);
  CHECK(r.csv.rfind("eps,D,S\n", 0) == 0);
  CHECK(lines(r.csv) == 3);
  const auto D = r.summary["D"].get<std::vector<double>>();
  CHECK(D[1] < D[0]);
  CHECK(r.summary["rate_exponent_nu"].get<double>() == doctest::Approx(0.3));
}

TEST_CASE("identical ladders have no uniqueness gap") {
  StudySpec s = study_spec(text_config(std::string(kSmall) + "eps_ladder_b = 0.2, 0.1\n"), "uniqueness");
  const StudyResult r = run_study(s);
  CHECK(r.summary["limit_gap_l2"].get<double>() == 0.0);
  CHECK(r.ok);
  CHECK(lines(r.csv) == 1 + 21);
}

TEST_CASE("Moser trace of a constant field") {
  const Grid g(2, 16);
  const GridField H = constant_levels(g, 2.5, 11, 0.01);
  const ParabolicCylinder Q{{0.5, 0.5}, 0.1, 0.25};
  const auto m = moser_trace(H, exponent_table(2, 3.0, 1.0), Q, 0.5, 6);
  CHECK(m.sup == 2.5);
  CHECK(m.k_used == 6);
  CHECK(!m.truncated);
  for (double v : m.normalized) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(m.radii.front() == 0.25);
  CHECK(m.radii.back() < m.radii.front());
  const auto big = moser_trace(H, exponent_table(2, 3.0, 1.0), Q, 0.5, 60);
  CHECK(big.truncated);
  CHECK(big.exponents.back() <= 80.0);
}

TEST_CASE("gradient bound table") {
  const std::string cfg = std::string(kSmall) +
                          "p = 3\nr = 0.25\nz1 = 0.5, 0.5, 0.07\ns = 0.5, 0.75\nrefinement_ladder = 1/8, 1/16\n";
  // the parser refuses duplicate keys, so drop the base values being overridden
  std::string body = cfg;
  body.erase(body.find("p = 2\n"), 6);
  body.replace(body.find("delta = 1"), 9, "delta = 2");
  body.replace(body.find("T = 0.01"), 8, "T = 0.07");
  const StudySpec s = study_spec(text_config(body), "gradbound");
  const StudyResult a = run_study(s);
  CHECK(a.csv.rfind("h,eps,s,lhs,rhs_core,c_impl\n", 0) == 0);
  CHECK(lines(a.csv) == 1 + 2 * 2 * 2);
  CHECK(a.summary["regime"] == "superquadratic");

  // H only sees Du, so shifting the boundary data by a constant leaves the table unchanged
  std::string shifted = body;
  shifted.replace(shifted.find("sine 2"), 6, "sine 2 1 0");
  StudySpec s2 = study_spec(text_config(shifted), "gradbound");
  const auto base_g = s2.base.boundary[0];
  s2.base.boundary[0] = [base_g](Point x, double t) { return base_g(x, t) + 3.0; };
  CHECK(run_study(s2).csv == a.csv);

  StudySpec s3 = s;
  s3.workers = 2;
  CHECK(run_study(s3).csv == a.csv);
}

TEST_CASE("subcritical gradient bound refuses a source term") {
  const std::string body =
      "n = 3\nh = 1/8\nT = 0.07\np = 1.2\ndelta = 2\nboundary_g = sine 1\ndatum_f = const 1\n"
      "eps_ladder = 0.1\nz1 = 0.5, 0.5, 0.5, 0.07\nr = 0.25\n";
  const StudySpec s = study_spec(text_config(body), "gradbound");
  REQUIRE(exponent_table(3, 1.2, s.base.params.beta).regime == ExponentRegime::subcritical);
  CHECK_THROWS_AS(run_study(s), std::invalid_argument);
}

TEST_CASE("maximum principle table") {
  const StudySpec s = study_spec(text_config(std::string(kSmall) + "N = 2\n"), "maxprinciple");
  const StudyResult r = run_study(s);
  CHECK(r.ok);
  const auto steps = r.summary["steps"].get<std::size_t>();
  CHECK(lines(r.csv) == 1 + 2 * (steps + 1));
  CHECK(r.summary["violations"] == 0);
}
