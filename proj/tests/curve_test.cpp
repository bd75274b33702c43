#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hsp/curve.hpp"
#include "hsp/verify.hpp"

using namespace hsp;

namespace {

cxd fiber_value(const PlaneCurve& C, cxd z, cxd w) {
  cxd acc = 0, wp = 1;
  for (int i = 0; i <= C.order(); ++i) {
    acc += C.Q(i)(z) * wp;
    wp *= w;
  }
  return acc;
}

// evaluate the branch expansion w(z) = sum_{i>=1} eps_i y^i at y = 1/z
cxd series_branch_value(const BranchSeries& b, cxd z) {
  cxd y = 1.0 / z, acc = 0;
  for (int i = b.series.order(); i >= 1; --i) acc = (acc + b.series.eps(i)) * y;
  return acc;
}

}  // namespace

TEST_CASE("leading polynomial must not vanish identically") {
  CHECK_THROWS_AS(PlaneCurve({ComplexPolynomial({cxd(1, 0)}), ComplexPolynomial::zero()}),
                  DegenerateCurve);
}

TEST_CASE("inverted-variable coefficient lists") {
  PlaneCurve C(fixture_pencil());
  // P_i(y) lists a_{i,i-t}: leading z-coefficient first
  auto P3 = C.P(3);
  REQUIRE(P3.size() >= 3);
  CHECK(std::abs(P3[0] - cxd(1, 0)) < 1e-15);
  CHECK(std::abs(P3[1] - cxd(-5, -2)) < 1e-15);
  CHECK(std::abs(P3[2] - cxd(4, 2)) < 1e-15);
  for (size_t t = 3; t < P3.size(); ++t) CHECK(std::abs(P3[t]) < 1e-15);
  auto P0 = C.P(0);
  REQUIRE(P0.size() == 1);
  CHECK(std::abs(P0[0] - cxd(1, 0)) < 1e-15);
}

TEST_CASE("fibers satisfy the curve equation") {
  PlaneCurve C(fixture_pencil());
  for (cxd z : {cxd(0.7, -1.3), cxd(-2, 0.5), cxd(5, 5)}) {
    auto f = branches_at(C, z);
    CHECK(!f.sheet_drop);
    REQUIRE(f.w.size() == 3);
    double scale = C.coeff_scale() * std::pow(std::max(1.0, std::abs(z)), 3);
    for (cxd w : f.w)
      CHECK(std::abs(fiber_value(C, z, w)) <
            1e-8 * scale * std::pow(std::max(1.0, std::abs(w)), 3));
  }
}

TEST_CASE("sheet drop where the leading polynomial vanishes") {
  PlaneCurve C(fixture_pencil());
  // Q3(0) = 0
  auto f = branches_at(C, cxd(0, 0));
  CHECK(f.sheet_drop);
  CHECK(f.w.size() < 3);
}

TEST_CASE("the fixture curve has six branch points") {
  PlaneCurve C(fixture_pencil());
  auto bp = branch_points(C);
  CHECK(bp.size() == 6);
  // each admits a genuinely repeated fiber root nearby
  for (cxd z : bp) {
    auto f = branches_at(C, z);
    double best = 1e300;
    for (size_t a = 0; a < f.w.size(); ++a)
      for (size_t b = a + 1; b < f.w.size(); ++b)
        best = std::min(best, std::abs(f.w[a] - f.w[b]));
    CHECK(best < 1e-4);
  }
}

TEST_CASE("reciprocal-characteristic roots pair with the alphas") {
  Pencil P = fixture_pencil();
  PlaneCurve C(P);
  auto xis = xi_roots(C);
  auto alphas = validate_general_type(P).alphas;
  REQUIRE(xis.size() == 3);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(xis[j] * alphas[j] - 1.0) < 1e-9);
}

TEST_CASE("branch expansions at infinity solve the curve") {
  PlaneCurve C(fixture_pencil());
  auto xis = xi_roots(C);
  for (int j = 1; j <= 3; ++j) {
    auto b = branch_series_at_infinity(C, j, 18);
    CHECK(b.j == j);
    CHECK(std::abs(b.series.eps(1) - xis[j - 1]) < 1e-12);
    CHECK(b.series.origin == TruncatedSeries::Origin::CurveBranch);
    for (cxd z : {cxd(40, 0), cxd(0, -60), cxd(30, 30)}) {
      cxd w = series_branch_value(b, z);
      double scale = C.coeff_scale() * std::pow(std::abs(z), 3);
      CHECK(std::abs(fiber_value(C, z, w)) < 1e-9 * scale);
    }
  }
}

TEST_CASE("multiple reciprocal roots are rejected") {
  // (1 + t)^2 characteristic: Q2 = z^2 + 2z + ..., diag a22=1, a11=2, a00=1
  PlaneCurve C({ComplexPolynomial({cxd(1, 0)}), ComplexPolynomial({cxd(0, 0), cxd(2, 0)}),
                ComplexPolynomial({cxd(0, 0), cxd(0, 0), cxd(1, 0)})});
  CHECK_THROWS_AS(branch_series_at_infinity(C, 1, 8), MultipleXi);
}

TEST_CASE("continuation along a far loop has no monodromy") {
  PlaneCurve C(fixture_pencil());
  auto bp = branch_points(C);
  double R = 0;
  for (cxd z : bp) R = std::max(R, std::abs(z));
  R = 3 * R + 5;
  std::vector<cxd> loop;
  for (int t = 0; t <= 64; ++t)
    loop.push_back(R * std::polar(1.0, 2 * M_PI * t / 64.0));
  cxd w0 = branches_at(C, loop.front()).w[0];
  auto res = continue_branch(C, loop, w0);
  CHECK(!res.monodromy);
  CHECK(std::abs(res.samples.back().w - w0) < 1e-6);
}

TEST_CASE("a tight loop around one branch point permutes sheets") {
  PlaneCurve C(fixture_pencil());
  auto bp = branch_points(C);
  REQUIRE(!bp.empty());
  // pick the branch point best separated from its peers
  cxd center = bp[0];
  double sep = 0;
  for (cxd c : bp) {
    double d = 1e300;
    for (cxd o : bp)
      if (std::abs(o - c) > 1e-9) d = std::min(d, std::abs(o - c));
    if (d > sep) {
      sep = d;
      center = c;
    }
  }
  double r = 0.4 * sep;
  std::vector<cxd> loop;
  for (int t = 0; t <= 96; ++t)
    loop.push_back(center + r * std::polar(1.0, 2 * M_PI * t / 96.0));
  // start on a sheet that participates in the collision at the center
  auto fc = branches_at(C, center);
  size_t ia = 0, ib = 1;
  double best = 1e300;
  for (size_t a = 0; a < fc.w.size(); ++a)
    for (size_t b = a + 1; b < fc.w.size(); ++b)
      if (std::abs(fc.w[a] - fc.w[b]) < best) {
        best = std::abs(fc.w[a] - fc.w[b]);
        ia = a;
        ib = b;
      }
  auto f0 = branches_at(C, loop.front());
  auto near_colliding = [&](cxd w) {
    return std::min(std::abs(w - fc.w[ia]), std::abs(w - fc.w[ib]));
  };
  cxd w0 = *std::min_element(f0.w.begin(), f0.w.end(), [&](cxd a, cxd b) {
    return near_colliding(a) < near_colliding(b);
  });
  auto res = continue_branch(C, loop, w0, {}, 1e-6);
  CHECK(res.monodromy);
}
