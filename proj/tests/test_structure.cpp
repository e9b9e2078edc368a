#include <doctest.h>

#include <cmath>
#include <random>

#include "degenlab/structure.hpp"

using namespace dgl;

namespace {

const double kX[3] = {0.3, 0.6, 0.2};
const Point X(kX, 2);

GradientMatrix row(double a, double b) {
  GradientMatrix m(1, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("prototype values") {
  CHECK(prototype(2.0).value(X, 0.0, 0.7) == 0.0);
  CHECK(prototype(2.0).value(X, 0.0, 3.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(prototype(1.5, 2.0).value(X, 0.0, 2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(prototype(2.0).value(X, 0.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(prototype(2.0, 0.0), std::invalid_argument);
}

TEST_CASE("prototype derivatives match finite differences") {
  for (double p : {1.3, 2.0, 3.5}) {
    const auto F = prototype(p, 1.7);
    for (double s : {1.2, 1.7, 3.0, 8.0}) {
      const double h = 1e-5;
      const double fd1 = (F.value(X, 0, s + h) - F.value(X, 0, s - h)) / (2 * h);
      const double fd2 = (F.d_s(X, 0, s + h) - F.d_s(X, 0, s - h)) / (2 * h);
      CHECK(F.d_s(X, 0, s) == doctest::Approx(fd1).epsilon(1e-7));
      CHECK(F.d_ss(X, 0, s) == doctest::Approx(fd2).epsilon(1e-7));
    }
    CHECK(F.d_s(X, 0, 0.5) == 0.0);
    CHECK(F.d_ss(X, 0, 0.5) == 0.0);
  }
}

TEST_CASE("vector field A") {
  const auto F = prototype(2.0);
  const auto A = vector_field_A(F, X, 0.0, row(2.0, 0.0));
  CHECK(A(0, 0) == doctest::Approx(1.0));
  CHECK(A(0, 1) == 0.0);
  CHECK(vector_field_A(F, X, 0.0, row(0.6, -0.8)).norm() == 0.0);
  CHECK(vector_field_A(F, X, 0.0, row(0.0, 0.0)).norm() == 0.0);
}

TEST_CASE("A commutes with rotations acting on every row") {
  std::mt19937_64 g(7);
  std::normal_distribution<double> nd;
  const auto F = prototype(2.5);
  for (int k = 0; k < 200; ++k) {
    GradientMatrix xi(2, 2);
    for (double& v : xi.data()) v = 2.0 * nd(g);
    const double th = nd(g), c = std::cos(th), s = std::sin(th);
    GradientMatrix rot = xi;
    for (int i = 0; i < 2; ++i) {
      rot(i, 0) = c * xi(i, 0) - s * xi(i, 1);
      rot(i, 1) = s * xi(i, 0) + c * xi(i, 1);
    }
    const auto A = vector_field_A(F, X, 0, xi), B = vector_field_A(F, X, 0, rot);
    for (int i = 0; i < 2; ++i) {
      CHECK(B(i, 0) == doctest::Approx(c * A(i, 0) - s * A(i, 1)).epsilon(1e-12).scale(1.0));
      CHECK(B(i, 1) == doctest::Approx(s * A(i, 0) + c * A(i, 1)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("structure conditions hold for the prototype") {
  StructureParams prm;
  prm.p = 2.0;
  prm.L = 2.0;
  prm.C1 = 2.0;
  const auto rep = check_structure_conditions(prototype(2.0), prm);
  CHECK(rep.violations() == 0);
  CHECK(rep.at("H2").samples == 10000);
  // With a = 1 the derivative identities are exact, so the empirical constant is 1.
  CHECK(rep.at("H2").tightest <= 1.0 + 1e-12);
  CHECK(rep.at("H3").tightest <= 1.0 + 1e-12);
}

TEST_CASE("Lipschitz coefficient is detected with K <= 1") {
  StructureParams prm;
  prm.p = 2.0;
  prm.L = 2.0 * (1.0 + std::sqrt(2.0));
  prm.C1 = 3.0;
  prm.K = 1.0;
  const auto F = prototype(2.0, [](Point x, double) { return 1.0 + std::hypot(x[0], x[1]); });
  const auto rep = check_structure_conditions(F, prm);
  CHECK(rep.violations() == 0);
  CHECK(rep.at("H4").tightest <= 1.0 + 1e-12);
  CHECK(rep.at("H4").tightest > 0.5);
}

TEST_CASE("a vanishing F violates the lower growth bound everywhere") {
  StructureFunction zero;
  zero.p = 2.0;
  zero.value = [](Point, double, double) { return 0.0; };
  zero.d_s = zero.value;
  zero.d_ss = zero.value;
  StructureParams prm;
  ConditionSampling cs;
  cs.samples = 500;
  const auto rep = check_structure_conditions(zero, prm, cs);
  CHECK(rep.at("H1").violations == rep.at("H1").samples);
  CHECK(rep.at("H1").samples == 500);
}

TEST_CASE("parameter validation") {
  StructureParams prm;
  CHECK_NOTHROW(validate(prm));
  prm.p = 1.0;
  CHECK_THROWS_AS(validate(prm), std::invalid_argument);
  prm.p = 1.5;
  prm.beta = 4.0;  // cap is 4
  CHECK_THROWS_AS(validate(prm), std::invalid_argument);
  prm.beta = 1.0;
  prm.n = 3;
  prm.beta = 10.0;  // irrelevant when n = 3
  CHECK_NOTHROW(validate(prm));
  prm.epsilon = 0.3;
  prm.delta = 0.25;
  CHECK_NOTHROW(validate(prm));
  CHECK_THROWS_AS(validate(prm, true), std::invalid_argument);
  CHECK(epsilon_ceiling(2.0, 1.0) == doctest::Approx(0.25));
  CHECK(epsilon_ceiling(1.5, 4.0) == doctest::Approx(0.5));
}
