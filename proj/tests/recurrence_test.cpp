#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hsp/curve.hpp"
#include "hsp/recurrence.hpp"
#include "hsp/verify.hpp"

using namespace hsp;

namespace {

Pencil trivial_pencil() {
  // z d/dz - lambda
  return Pencil({ComplexPolynomial({cxd(-1, 0)}),
                 ComplexPolynomial({cxd(0, 0), cxd(1, 0)})});
}

double series_max(const TruncatedSeries& s) {
  double m = 0;
  for (cxd c : s.coeffs) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST_CASE("log-derivative of a monomial") {
  // p = z^5: p'/p = 5/z, so lambda L = 5 y and eps_1 = 5/lambda
  cxd lam(7, -2);
  auto s = log_derivative_series(ComplexPolynomial({0, 0, 0, 0, 0, cxd(1, 0)}), lam, 8);
  CHECK(std::abs(s.eps(0)) == 0);
  CHECK(std::abs(s.eps(1) - 5.0 / lam) < 1e-15);
  for (int i = 2; i <= 8; ++i) CHECK(std::abs(s.eps(i)) < 1e-15);
}

TEST_CASE("log-derivative of z^2 - 1") {
  // p'/p = 2z/(z^2-1) = (2/z) sum z^{-2m}: eps = (2,0,2,0,...)/lambda
  cxd lam(3, 1);
  auto s = log_derivative_series(ComplexPolynomial({cxd(-1, 0), 0, cxd(1, 0)}), lam, 9);
  for (int i = 1; i <= 9; ++i) {
    cxd want = (i % 2 == 1) ? 2.0 / lam : cxd(0, 0);
    CHECK(std::abs(s.eps(i) - want) < 1e-14);
  }
}

TEST_CASE("non-monic input is rejected") {
  CHECK_THROWS_AS(log_derivative_series(ComplexPolynomial({cxd(1, 0), cxd(2, 0)}),
                                        cxd(1, 0), 4),
                  std::invalid_argument);
}

TEST_CASE("residual of an exact log-derivative vanishes") {
  Pencil P = trivial_pencil();
  int n = 6;
  cxd lam(n, 0);
  auto s = log_derivative_series(ComplexPolynomial::from_roots(
                                     std::vector<cxd>(n, cxd(0, 0))),
                                 lam, 10);
  auto r = pencil_series_residual(P, lam, s);
  CHECK(series_max(r) < 1e-12);
}

TEST_CASE("zero candidate leaves only the constant diagonal term") {
  Pencil P = fixture_pencil();
  TruncatedSeries N;
  N.coeffs.assign(7, cxd(0, 0));
  auto r = pencil_series_residual(P, cxd(100, 0), N);
  // only i = 0 survives: P_0 = a_{0,0} = 1 at y^0
  CHECK(std::abs(r.eps(0) - P.a(0, 0)) < 1e-14);
}

TEST_CASE("a candidate with nonzero constant term is rejected") {
  Pencil P = fixture_pencil();
  TruncatedSeries N;
  N.coeffs.assign(5, cxd(0, 0));
  N.coeffs[0] = cxd(1, 0);
  CHECK_THROWS_AS(pencil_series_residual(P, cxd(100, 0), N), OrderViolation);
}

TEST_CASE("leading-coefficient candidates approach the reciprocal roots") {
  Pencil P = fixture_pencil();
  PlaneCurve C(P);
  auto xis = xi_roots(C);
  cxd lam(400, 130);
  auto cand = epsilon1_candidates(P, lam, 100);
  REQUIRE(cand.size() == 3);
  for (cxd xi : xis) {
    double best = 1e300;
    for (cxd c : cand) best = std::min(best, std::abs(c - xi));
    CHECK(best < 0.1);
  }
}

TEST_CASE("small lambda is refused") {
  Pencil P = fixture_pencil();
  CHECK_THROWS_AS(epsilon1_candidates(P, cxd(5, 0)), std::invalid_argument);
}

TEST_CASE("first-order pencil has a single exact candidate") {
  Pencil P = trivial_pencil();
  cxd lam(30, 0);
  auto cand = epsilon1_candidates(P, lam, 10);
  REQUIRE(cand.size() == 1);
  // constant equation: a11 (lambda eps1) + a00 lambda = 0 -> eps1 = 1
  CHECK(std::abs(cand[0] - 1.0) < 1e-12);
}

TEST_CASE("first-order linear coefficient is constant") {
  Pencil P = trivial_pencil();
  for (int m : {1, 3, 7}) {
    TruncatedSeries pre;
    pre.coeffs.assign(m + 1, cxd(0, 0));
    pre.coeffs[1] = cxd(0.03, 0.01);
    cxd v = phi0(P, pre, cxd(40, 0), m);
    CHECK(std::abs(v - P.a(1, 1)) < 1e-12);
  }
}

TEST_CASE("the eps dependence is affine") {
  Pencil P = fixture_pencil();
  cxd lam(300, 50);
  auto cand = epsilon1_candidates(P, lam, 100);
  TruncatedSeries pre;
  pre.coeffs.assign(4, cxd(0, 0));
  pre.coeffs[1] = cand[0];
  pre.coeffs[2] = cxd(0.001, 0.002);
  pre.coeffs[3] = cxd(-0.0005, 0.0007);
  // second difference of the y^m coefficient in eps_{m+1} must vanish;
  // equivalently phi0 is independent of any shift applied at index m+1
  int m = 3;
  cxd v0 = phi0(P, pre, lam, m);
  TruncatedSeries pre2 = pre;
  pre2.coeffs.push_back(cxd(0.5, -0.25));  // eps_4 guess, must not matter
  cxd v1 = phi0(P, pre2, lam, m);
  CHECK(std::abs(v0 - v1) < 1e-10 * std::max(1.0, std::abs(v0)));
}

TEST_CASE("recurrence reproduces the trivial solution") {
  Pencil P = trivial_pencil();
  int n = 9;
  cxd lam(n, 0);
  auto s = solve_recurrence(P, lam, cxd(1, 0) * double(n) / lam, 10);
  CHECK(std::abs(s.eps(1) - 1.0) < 1e-12);
  for (int i = 2; i <= 10; ++i) CHECK(std::abs(s.eps(i)) < 1e-12);
  CHECK(s.origin == TruncatedSeries::Origin::Recurrence);
}

TEST_CASE("recurrence solution zeroes the residual") {
  Pencil P = fixture_pencil();
  int n = 55;
  auto ev = spectral_eigenvalues(P, n);
  cxd lam = ev.lambda_for(1);
  auto s = solve_recurrence(P, lam, cxd(n, 0) / lam, 20);
  auto r = pencil_series_residual(P, lam, s);
  double scale = P.coeff_scale() * std::pow(std::abs(lam), P.order());
  for (int t = 0; t < 20; ++t) CHECK(std::abs(r.eps(t)) < 1e-8 * scale);
}

TEST_CASE("an eps1 violating the constant equation is rejected") {
  Pencil P = fixture_pencil();
  CHECK_THROWS_AS(solve_recurrence(P, cxd(200, 0), cxd(10, 10), 8),
                  std::invalid_argument);
}

TEST_CASE("sup scan is finite on the fixture") {
  Pencil P = fixture_pencil();
  int n = 55;
  auto ev = spectral_eigenvalues(P, n);
  cxd lam = ev.lambda_for(1);
  auto scan = phi0_sup_scan(P, lam, cxd(n, 0) / lam, 200);
  CHECK(scan.sup_value > 0);
  CHECK(std::isfinite(scan.sup_value));
  CHECK(scan.m_max == 200);
}

TEST_CASE("majorant radius closed form") {
  CHECK(majorant_radius(0) == doctest::Approx(1.0));
  CHECK(majorant_radius(0.5) == doctest::Approx(0.25));
  CHECK(majorant_radius(2) == doctest::Approx(1.0 / 25.0));
  CHECK_THROWS_AS(majorant_radius(-1), std::invalid_argument);
}
