#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "degenlab/aux_calculus.hpp"
#include "degenlab/grid.hpp"

using namespace dgl;

namespace {

template <class Fn>
Field sample(const Grid& g, Fn&& f) {
  Field u(g, 1);
  double x[3];
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    g.coords(v, x);
    u(v, 0) = f(x);
  }
  return u;
}

double max_gradient_error(int cells) {
  const Grid g(2, cells);
  const Field u = sample(g, [](const double* x) { return std::sin(M_PI * x[0]); });
  const GradientField Du = gradient(u);
  double worst = 0.0, x[3];
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    g.coords(v, x);
    worst = std::max(worst, std::abs(Du(v, 0, 0) - M_PI * std::cos(M_PI * x[0])));
    worst = std::max(worst, std::abs(Du(v, 0, 1)));
  }
  return worst;
}

GridField steady(const Grid& g, const Field& f, const std::vector<double>& times) {
  GridField out(g, f.components());
  for (double t : times) out.push(t, f);
  return out;
}

}  // namespace

TEST_CASE("grid layout") {
  const Grid g(3, 4);
  CHECK(g.node_count() == 125);
  CHECK(g.h() == 0.25);
  const auto idx = std::array<int, 3>{1, 2, 3};
  CHECK(g.index(g.node(idx)) == idx);
  CHECK(g.on_boundary(g.node({0, 2, 2})));
  CHECK(!g.on_boundary(g.node({1, 2, 3})));
  CHECK(Grid::from_spacing(2, 1.0 / 32.0).cells() == 32);
  CHECK_THROWS(Grid::from_spacing(2, 0.3));
  CHECK_THROWS(Grid(4, 8));
}

TEST_CASE("gradient") {
  const Grid g(2, 16);
  const Field lin = sample(g, [](const double* x) { return x[0]; });
  const GradientField D = gradient(lin);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    CHECK(D(v, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(D(v, 0, 1)) < 1e-12);
  }
  const GradientField Z = gradient(Field(g, 1, 3.0));
  for (std::size_t v = 0; v < g.node_count(); ++v) CHECK(Z.at(v).norm() == 0.0);
  const double e1 = max_gradient_error(32), e2 = max_gradient_error(64);
  CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("divergence of face fluxes") {
  const Grid g(2, 16);
  FaceFlux c(g, 1);
  for (int k = 0; k < 2; ++k)
    for (std::size_t v = 0; v < g.node_count(); ++v) c.at(k, v, 0) = 0.7;
  for (double d : divergence_of_flux(c).data()) CHECK(std::abs(d) < 1e-13);

  // normal flux of D(x1^2/2) at the face midpoints
  FaceFlux q(g, 1);
  double x[3];
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    g.coords(v, x);
    q.at(0, v, 0) = x[0] + 0.5 * g.h();
  }
  const Field div = divergence_of_flux(q);
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (!g.on_boundary(v)) CHECK(div(v, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("summation by parts") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  for (int dim : {1, 2, 3}) {
    const Grid g(dim, 8);
    FaceFlux F(g, 2);
    for (int k = 0; k < dim; ++k)
      for (double& v : F.normal[k]) v = nd(rng);
    Field phi(g, 2);
    for (std::size_t v = 0; v < g.node_count(); ++v)
      if (!g.on_boundary(v))
        for (int i = 0; i < 2; ++i) phi(v, i) = nd(rng);
    const Field div = divergence_of_flux(F);
    double lhs = 0.0, rhs = 0.0, scale = 0.0;
    for (std::size_t v = 0; v < g.node_count(); ++v)
      for (int i = 0; i < 2; ++i) lhs += div(v, i) * phi(v, i);
    for (int k = 0; k < dim; ++k)
      for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (g.coord_index(v, k) == g.cells()) continue;
        for (int i = 0; i < 2; ++i) {
          const double term = F.at(k, v, i) * (phi(v + g.stride(k), i) - phi(v, i)) / g.h();
          rhs -= term;
          scale += std::abs(term);
        }
      }
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("face gradient") {
  const Grid g(2, 8);
  const Field u = sample(g, [](const double* x) { return 2.0 * x[0] - x[1]; });
  GradientMatrix m(1, 2);
  face_gradient(u, 0, g.node({3, 4, 0}), m);
  CHECK(m(0, 0) == doctest::Approx(2.0));
  CHECK(m(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("Steklov average") {
  const Grid g(1, 4);
  std::vector<double> times;
  for (int l = 0; l <= 20; ++l) times.push_back(0.05 * l);
  GridField c = steady(g, Field(g, 1, 2.5), times);
  const GridField sc = steklov_average(c, 0.2);
  for (std::size_t l = 0; l < sc.levels(); ++l) {
    const double expect = sc.time(l) + 0.2 <= 1.0 + 1e-12 ? 2.5 : 0.0;
    CHECK(sc.level(l)(2, 0) == doctest::Approx(expect));
  }
  GridField lin(g, 1);
  for (double t : times) lin.push(t, Field(g, 1, t));
  const GridField sl = steklov_average(lin, 0.15);
  for (std::size_t l = 0; l < sl.levels(); ++l)
    if (sl.time(l) + 0.15 <= 1.0) CHECK(sl.level(l)(1, 0) == doctest::Approx(sl.time(l) + 0.075).epsilon(1e-12));
  CHECK_THROWS_AS(steklov_average(lin, 0.0), std::domain_error);
  CHECK_THROWS_AS(steklov_average(lin, 1.0), std::domain_error);

  // Discrete time-derivative identity with a lag that is a multiple of the level spacing.
  GridField sn(g, 1);
  for (double t : times) sn.push(t, Field(g, 1, std::sin(3.0 * t)));
  const double lag = 0.1;
  const GridField ss = steklov_average(sn, lag);
  for (std::size_t l = 0; l + 3 < ss.levels(); ++l) {
    if (ss.time(l + 1) + lag > 1.0 - 1e-12) break;
    const double dq = (ss.level(l + 1)(0, 0) - ss.level(l)(0, 0)) / (ss.time(l + 1) - ss.time(l));
    const double a = (sn.level(l + 2)(0, 0) - sn.level(l)(0, 0)) / lag;
    const double b = (sn.level(l + 3)(0, 0) - sn.level(l + 1)(0, 0)) / lag;
    CHECK(dq == doctest::Approx(0.5 * (a + b)).epsilon(1e-10));
  }
  // Convergence to v as the lag shrinks.
  std::vector<double> fine;
  for (int l = 0; l <= 400; ++l) fine.push_back(l / 400.0);
  GridField sm(g, 1);
  for (double t : fine) sm.push(t, Field(g, 1, std::sin(3.0 * t)));
  double prev = INFINITY;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    const GridField a = steklov_average(sm, h);
    double err = 0.0;
    for (std::size_t l = 0; l < a.levels(); ++l)
      if (a.time(l) <= 0.7) err = std::max(err, l2_distance(a.level(l), sm.level(l)));
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("cylinder statistics") {
  const Grid g(2, 32);
  std::vector<double> times;
  for (int l = 0; l <= 10; ++l) times.push_back(0.01 * l);
  ParabolicCylinder Q{{0.5, 0.5}, 0.1, 0.25};
  CHECK(Q.inside_domain(0.0, 0.1));
  CHECK(!ParabolicCylinder({{0.1, 0.5}, 0.1, 0.25}).inside_domain(0.0, 0.1));

  const GridField c = steady(g, Field(g, 1, 1.7), times);
  for (double q : {1.0, 2.5, 6.0}) CHECK(cylinder_mean(c, Q, q) == doctest::Approx(std::pow(1.7, q)));
  CHECK(cylinder_sup(c, Q) == 1.7);

  const GridField half = steady(g, sample(g, [](const double* x) { return x[0] < 0.5 ? 1.0 : 0.0; }), times);
  CHECK(std::abs(cylinder_mean(half, Q, 1.0) - 0.5) <= g.h() / Q.r);

  const GridField dist =
      steady(g, sample(g, [](const double* x) { return std::hypot(x[0] - 0.5, x[1] - 0.5); }), times);
  CHECK(std::abs(cylinder_sup(dist, Q) - Q.r) <= g.h());
  ParabolicCylinder Qs = Q;
  Qs.r = 0.5 * Q.r;
  CHECK(cylinder_sup(dist, Qs) <= cylinder_sup(dist, Q));

  // H_delta of a zero gradient is 1 + delta everywhere.
  GridField H(g, 1);
  for (double t : times) {
    const GradientField D = gradient(Field(g, 1));
    Field f(g, 1);
    for (std::size_t v = 0; v < g.node_count(); ++v) f(v, 0) = H_lambda(0.5, D.at(v));
    H.push(t, f);
  }
  CHECK(cylinder_mean(H, Q, 3.0) == doctest::Approx(std::pow(1.5, 3.0)));

  // exponent-1 means are linear; power means grow with the exponent on fields >= 1
  const GridField bump = steady(g, sample(g, [](const double* x) { return 1.0 + std::sin(7 * x[0]) * std::sin(7 * x[0]); }), times);
  GridField mix(g, 1);
  for (std::size_t l = 0; l < bump.levels(); ++l) {
    Field f = bump.level(l);
    for (std::size_t v = 0; v < g.node_count(); ++v) f(v, 0) = 3.0 * f(v, 0) - 2.0 * dist.level(l)(v, 0);
    mix.push(bump.time(l), f);
  }
  CHECK(cylinder_mean(mix, Q, 1.0) ==
        doctest::Approx(3.0 * cylinder_mean(bump, Q, 1.0) - 2.0 * cylinder_mean(dist, Q, 1.0)).epsilon(1e-12));
  double prev = 0.0;
  for (double q : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double m = cylinder_power_mean(bump, Q, q);
    CHECK(m >= prev);
    CHECK(m == doctest::Approx(std::pow(cylinder_mean(bump, Q, q), 1.0 / q)).epsilon(1e-12));
    prev = m;
  }
  ParabolicCylinder far{{0.5, 0.5}, 5.0, 0.1};
  CHECK_THROWS(cylinder_mean(c, far, 1.0));
}

TEST_CASE("norms") {
  const Grid g(2, 16);
  CHECK(l2_norm(Field(g, 2, 1.0)) == doctest::Approx(std::sqrt(2.0 * g.node_count() * g.cell_volume())));
  GridField f(g, 1);
  f.push(0.0, Field(g, 1, 2.0));
  f.push(0.5, Field(g, 1, 2.0));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(4.0 * g.node_count() * g.cell_volume() * 0.5)));
}

TEST_CASE("CSV and binary snapshots") {
  const Grid g(2, 4);
  GridField f(g, 2);
  Field a(g, 2);
  for (std::size_t v = 0; v < g.node_count(); ++v) a(v, 0) = 0.1 * v, a(v, 1) = -1.0 / (v + 1.0);
  f.push(0.0, a);
  f.push(0.25, a);
  std::ostringstream os;
  write_csv(f, os);
  const std::string csv = os.str();
  CHECK(csv.rfind("t,x1,x2,u1,u2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 25);

  const std::string path = "degenlab_snapshot_test.bin";
  write_binary(f, path, 0.01, 0.25);
  SnapshotHeader hd;
  const GridField back = read_binary(path, &hd);
  std::remove(path.c_str());
  CHECK(hd.n == 2);
  CHECK(hd.N == 2);
  CHECK(hd.dims == std::vector<int>{5, 5});
  CHECK(hd.dt == 0.01);
  CHECK(hd.T == 0.25);
  REQUIRE(back.levels() == 2);
  CHECK(back.level(1).data() == a.data());
  CHECK_THROWS(read_binary("definitely_missing_snapshot.bin"));
}
