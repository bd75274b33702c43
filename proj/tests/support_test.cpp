#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hsp/support.hpp"
#include "hsp/verify.hpp"

using namespace hsp;

namespace {

Pencil example3_pencil(cxd b1, cxd b2, cxd b3) {
  // prod_i ((b_i - z) w - 1)
  ComplexPolynomial L1({b1, cxd(-1, 0)}), L2({b2, cxd(-1, 0)}), L3({b3, cxd(-1, 0)});
  return Pencil({ComplexPolynomial({cxd(-1, 0)}), L1 + L2 + L3,
                 (L1 * L2 + L1 * L3 + L2 * L3) * cxd(-1, 0), L1 * L2 * L3});
}

}  // namespace

TEST_CASE("scaled branch of the trivial pencil") {
  // w = 1/z, alpha = 1
  Pencil P({ComplexPolynomial({cxd(-1, 0)}),
            ComplexPolynomial({cxd(0, 0), cxd(1, 0)})});
  for (cxd z : {cxd(2, 1), cxd(-3, 0.5)}) {
    auto A = scaled_branches(P, 1, z);
    REQUIRE(A.size() == 1);
    CHECK(std::abs(A[0] - 1.0 / z) < 1e-12);
  }
}

TEST_CASE("scaled branches are the fiber scaled by alpha") {
  Pencil P = fixture_pencil();
  auto alphas = validate_general_type(P).alphas;
  PlaneCurve C(P);
  cxd z(3.5, -2.5);
  for (int j = 1; j <= 3; ++j) {
    auto A = scaled_branches(P, j, z);
    auto f = branches_at(C, z);
    REQUIRE(A.size() == f.w.size());
    for (cxd a : A) {
      double best = 1e300;
      for (cxd w : f.w) best = std::min(best, std::abs(a - alphas[j - 1] * w));
      CHECK(best < 1e-8);
    }
  }
}

TEST_CASE("three poles at twice the cube roots of unity give the circle of radius two") {
  cxd b1 = 2.0 * std::polar(1.0, 0.0);
  cxd b2 = 2.0 * std::polar(1.0, 2 * M_PI / 3);
  cxd b3 = 2.0 * std::polar(1.0, 4 * M_PI / 3);
  auto circ = example3_circle(b1, b2, b3);
  CHECK(std::abs(circ.center) < 1e-9);
  CHECK(circ.radius == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("the circle is invariant under pole permutations") {
  cxd b1(1, 0.5), b2(-2, 1), b3(0.5, -2);
  auto c0 = example3_circle(b1, b2, b3);
  for (auto [x, y, z] : {std::array<cxd, 3>{b2, b1, b3}, std::array<cxd, 3>{b3, b1, b2},
                         std::array<cxd, 3>{b2, b3, b1}}) {
    auto c = example3_circle(x, y, z);
    CHECK(std::abs(c.center - c0.center) < 1e-9);
    CHECK(c.radius == doctest::Approx(c0.radius).epsilon(1e-9));
  }
}

TEST_CASE("collinear poles have no circle") {
  CHECK_THROWS_AS(example3_circle(cxd(-1, 0), cxd(0, 0), cxd(2, 0)), CollinearB);
  CHECK_THROWS_AS(example3_circle(cxd(0, -1), cxd(0, 1), cxd(0, 4)), CollinearB);
}

TEST_CASE("the three-pole locus follows the closed-form circle") {
  cxd b1 = 2.0 * std::polar(1.0, 0.0);
  cxd b2 = 2.0 * std::polar(1.0, 2 * M_PI / 3);
  cxd b3 = 2.0 * std::polar(1.0, 4 * M_PI / 3);
  Pencil P = example3_pencil(b1, b2, b3);
  double res = 0.08;
  auto locus = gamma_locus(P, 1, {1, 2, 3}, Rect{-2.4, -2.4, 2.4, 2.4}, res);
  CHECK(locus.points.size() > 20);
  for (cxd z : locus.points) CHECK(std::abs(std::abs(z) - 2.0) < 2 * res);
}

TEST_CASE("a second-order pencil yields an empty locus") {
  Pencil P({ComplexPolynomial({cxd(1, 0)}), ComplexPolynomial({cxd(0, 0), cxd(1, 0)}),
            ComplexPolynomial({cxd(2, 0), cxd(0, 0), cxd(1, 0)})});
  auto locus = gamma_locus(P, 1, {1, 2, 2}, Rect{-1, -1, 1, 1}, 0.25);
  CHECK(locus.points.empty());
}

TEST_CASE("the difference integral vanishes on an empty segment") {
  Pencil P = fixture_pencil();
  cxd z(4, 3);
  CHECK(std::abs(h_difference(P, 1, {1, 2}, z, z)) < 1e-12);
}

TEST_CASE("the difference integral is additive along a segment") {
  Pencil P = fixture_pencil();
  cxd a(6, 4), c(8, 7);
  cxd b = 0.5 * (a + c);
  double whole = h_difference(P, 1, {1, 2}, a, c);
  double parts = h_difference(P, 1, {1, 2}, a, b) + h_difference(P, 1, {1, 2}, b, c);
  CHECK(std::abs(whole - parts) < 1e-8 * std::max(1.0, std::abs(whole)));
}

TEST_CASE("pair labels must name distinct existing branches") {
  Pencil P({ComplexPolynomial({cxd(-1, 0)}),
            ComplexPolynomial({cxd(0, 0), cxd(1, 0)})});
  CHECK_THROWS_AS(h_difference(P, 1, {1, 2}, cxd(2, 0), cxd(3, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(h_difference(fixture_pencil(), 1, {2, 2}, cxd(4, 0), cxd(5, 0)),
                  std::invalid_argument);
}

TEST_CASE("level-curve tracing keeps the step and stays orthogonal to the gradient") {
  Pencil P = fixture_pencil();
  double step = 0.04;
  auto lc = trace_level_curve(P, 1, {1, 2}, cxd(3, 3), step, 2.0);
  REQUIRE(lc.points.size() > 10);
  REQUIRE(lc.gvals.size() == lc.points.size());
  REQUIRE(lc.density.size() == lc.points.size());
  bool seed_present = false;
  for (cxd p : lc.points)
    if (std::abs(p - cxd(3, 3)) < 1e-9) seed_present = true;
  CHECK(seed_present);
  for (size_t v = 1; v < lc.points.size(); ++v) {
    double d = std::abs(lc.points[v] - lc.points[v - 1]);
    CHECK(d > 0.2 * step);
    CHECK(d < 1.6 * step);
  }
  for (size_t v = 1; v + 1 < lc.points.size(); ++v) {
    cxd tangent = lc.points[v + 1] - lc.points[v - 1];
    cxd expect = cxd(0, 1) * std::conj(lc.gvals[v]);
    double ang = std::abs(std::arg(tangent / expect));
    if (ang > M_PI / 2) ang = M_PI - ang;  // orientation-free
    CHECK(ang < 1e-2);
    CHECK(lc.density[v] == doctest::Approx(std::abs(lc.gvals[v]) / (2 * M_PI)));
  }
}

TEST_CASE("uniform atoms on a uniform curve give unit density ratios") {
  LevelCurve lc;
  lc.pair = {1, 2};
  int nv = 201;
  for (int v = 0; v < nv; ++v) {
    lc.points.push_back(cxd(v * 0.05, 0));
    // 20 atoms at spacing 0.5 carry probability mass (1/20)/0.5 per unit length
    lc.density.push_back(0.1);
    lc.gvals.push_back(cxd(0.2 * M_PI, 0));
  }
  RootMeasure mu;
  for (double x = 0.25; x < 10; x += 0.5) mu.atoms.push_back(cxd(x, 0.001));
  auto rep = density_vs_roots(lc, mu, 2.0);
  CHECK(rep.skipped < nv);
  CHECK(rep.mean == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("entirely sparse windows are an error") {
  LevelCurve lc;
  lc.pair = {1, 2};
  for (int v = 0; v < 50; ++v) {
    lc.points.push_back(cxd(v * 0.1, 0));
    lc.density.push_back(1.0);
    lc.gvals.push_back(cxd(2 * M_PI, 0));
  }
  RootMeasure mu{{cxd(100, 100), cxd(-100, 50)}};
  CHECK_THROWS_AS(density_vs_roots(lc, mu, 0.5), SparseWindow);
}
