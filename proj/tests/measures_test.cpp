#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hsp/measures.hpp"
#include "hsp/verify.hpp"

using namespace hsp;

TEST_CASE("root measure of z^3 - 1") {
  auto mu = root_measure(ComplexPolynomial({cxd(-1, 0), 0, 0, cxd(1, 0)}));
  REQUIRE(mu.atoms.size() == 3);
  CHECK(mu.weight() == doctest::Approx(1.0 / 3));
  for (cxd a : mu.atoms) {
    CHECK(std::abs(std::abs(a) - 1.0) < 1e-9);
    CHECK(std::abs(a * a * a - 1.0) < 1e-8);
  }
}

TEST_CASE("repeated roots appear as repeated atoms") {
  auto mu = root_measure(ComplexPolynomial::from_roots({cxd(2, 0), cxd(2, 0)}));
  REQUIRE(mu.atoms.size() == 2);
  CHECK(std::abs(mu.atoms[0] - 2.0) < 1e-5);
  CHECK(std::abs(mu.atoms[1] - 2.0) < 1e-5);
}

TEST_CASE("Cauchy transform of a single atom") {
  RootMeasure mu{{cxd(1, 0)}};
  CHECK(std::abs(cauchy_transform(mu, cxd(3, 0)) - 0.5) < 1e-15);
  CHECK(std::abs(cauchy_transform(mu, cxd(1, 2)) - cxd(0, -0.5)) < 1e-15);
}

TEST_CASE("evaluation at an atom is refused") {
  RootMeasure mu{{cxd(1, 0), cxd(-1, 0)}};
  CHECK_THROWS_AS(cauchy_transform(mu, cxd(1, 0)), AtomCollision);
  CHECK_THROWS_AS(log_potential(mu, cxd(-1, 0)), AtomCollision);
}

TEST_CASE("Cauchy transform of the roots of unity") {
  // sum over roots of z^m - 1 of 1/(z - r) = m z^{m-1}/(z^m - 1);
  // the measure divides by m
  for (int m : {4, 9}) {
    std::vector<cxd> c(m + 1, cxd(0, 0));
    c[0] = cxd(-1, 0);
    c[m] = cxd(1, 0);
    auto mu = root_measure(ComplexPolynomial(c));
    for (cxd z : {cxd(1.7, 0.4), cxd(-0.2, 0.1), cxd(0, 3)}) {
      cxd zm = std::pow(z, m);
      cxd want = std::pow(z, m - 1) / (zm - 1.0);
      CHECK(std::abs(cauchy_transform(mu, z) - want) < 1e-10);
    }
  }
}

TEST_CASE("log potential of the roots of unity") {
  // (1/m) log|z^m - 1|
  int m = 6;
  std::vector<cxd> c(m + 1, cxd(0, 0));
  c[0] = cxd(-1, 0);
  c[m] = cxd(1, 0);
  auto mu = root_measure(ComplexPolynomial(c));
  for (cxd z : {cxd(2, 1), cxd(0.3, -0.2), cxd(-1.4, 0.6)}) {
    double want = std::log(std::abs(std::pow(z, m) - 1.0)) / m;
    CHECK(log_potential(mu, z) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("trivial pencil has zero branch deviation") {
  // z p' = lambda p: p = z^n, branch w = 1/z exactly matches p'/(lambda p)
  Pencil P({ComplexPolynomial({cxd(-1, 0)}),
            ComplexPolynomial({cxd(0, 0), cxd(1, 0)})});
  double dev = branch_deviation(P, 1, 12, 2.0, 32);
  CHECK(dev < 1e-10);
}

TEST_CASE("fixture branch deviation decays with degree") {
  Pencil P = fixture_pencil();
  PlaneCurve C(P);
  double R = 0;
  for (cxd z : branch_points(C)) R = std::max(R, std::abs(z));
  double d1 = branch_deviation(P, 1, 15, 2 * R, 32);
  double d2 = branch_deviation(P, 1, 45, 2 * R, 32);
  CHECK(d2 < d1);
}

TEST_CASE("radius inside the branch points is refused") {
  Pencil P = fixture_pencil();
  CHECK_THROWS_AS(branch_deviation(P, 1, 10, 1e-3, 8), std::invalid_argument);
}

TEST_CASE("derivative potential ordering for real-rooted polynomials") {
  std::vector<ComplexPolynomial> ps{
      ComplexPolynomial::from_roots({cxd(-2, 0), cxd(-1, 0), cxd(1, 0), cxd(2, 0)}),
      ComplexPolynomial::from_roots({cxd(0, 1), cxd(0, -1), cxd(3, 0), cxd(-3, 0),
                                     cxd(1, 1), cxd(1, -1)})};
  std::vector<cxd> grid;
  for (int i = -8; i <= 8; ++i)
    for (int j = -8; j <= 8; ++j) grid.push_back(cxd(i * 0.75, j * 0.75));
  auto rep = potential_ordering_check(ps, grid);
  CHECK(rep.max_violation <= 0);
  CHECK(rep.outer_points > 0);
  // outside the hull the potentials agree up to the slack
  CHECK(rep.max_outer_gap < 5.0 / 4 + 1e-9);
}
