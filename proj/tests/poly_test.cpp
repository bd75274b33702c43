#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "hsp/poly.hpp"

using namespace hsp;

namespace {

// independent oracle: eigenvalues of the companion matrix
std::vector<cxd> companion_roots(const ComplexPolynomial& p) {
  const int n = p.degree();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) M(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) M(i, n - 1) = -p.coeff(i) / p.leading();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  std::vector<cxd> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

// greedy multiset match; returns the largest pairing distance
double multiset_gap(std::vector<cxd> a, std::vector<cxd> b) {
  REQUIRE(a.size() == b.size());
  double worst = 0;
  for (cxd x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cxd u, cxd v) {
      return std::abs(u - x) < std::abs(v - x);
    });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST_CASE("evaluation and construction from roots") {
  ComplexPolynomial p = ComplexPolynomial::from_roots({cxd(1, 0), cxd(-2, 0), cxd(0, 3)});
  CHECK(p.degree() == 3);
  CHECK(std::abs(p(cxd(1, 0))) < 1e-14);
  CHECK(std::abs(p(cxd(-2, 0))) < 1e-13);
  CHECK(std::abs(p(cxd(0, 3))) < 1e-13);
  CHECK(std::abs(p.leading() - 1.0) < 1e-15);
}

TEST_CASE("derivative and arithmetic") {
  ComplexPolynomial p({cxd(1, 0), cxd(2, 0), cxd(3, 0)});  // 1 + 2z + 3z^2
  auto d = p.derivative();
  CHECK(d.degree() == 1);
  CHECK(std::abs(d(cxd(2, 0)) - cxd(14, 0)) < 1e-14);
  auto q = p * p;
  CHECK(q.degree() == 4);
  cxd z(0.3, -0.7);
  CHECK(std::abs(q(z) - p(z) * p(z)) < 1e-13);
  CHECK((p - p).is_zero());
}

TEST_CASE("roots agree with the companion-matrix oracle") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + int(rng() % 12);
    std::vector<cxd> c(n + 1);
    for (auto& cc : c) cc = cxd(U(rng), U(rng));
    while (std::abs(c[n]) < 0.2) c[n] = cxd(U(rng), U(rng));
    ComplexPolynomial p(c);
    if (p.degree() < 1) continue;
    auto got = roots(p);
    auto want = companion_roots(p);
    CHECK(multiset_gap(got, want) < 1e-6);
  }
}

TEST_CASE("repeated roots are reported with multiplicity") {
  ComplexPolynomial p =
      ComplexPolynomial::from_roots({cxd(1, 0), cxd(1, 0), cxd(-2, 0)});
  auto r = roots(p);
  REQUIRE(r.size() == 3);
  int near_one = 0;
  for (cxd x : r)
    if (std::abs(x - 1.0) < 1e-4) ++near_one;
  CHECK(near_one == 2);
}

TEST_CASE("root residual bound holds") {
  ComplexPolynomial p = ComplexPolynomial::from_roots(
      {cxd(0.5, 0.5), cxd(-3, 1), cxd(2, -2), cxd(0, 1), cxd(1, 1)});
  for (cxd r : roots(p)) {
    double bound =
        1e-10 * p.coeff_scale() * std::pow(std::max(1.0, std::abs(r)), p.degree());
    CHECK(std::abs(p(r)) <= bound);
  }
}

TEST_CASE("discriminant of a squarefree quadratic fiber") {
  // w^2 + z w + 1: repeated w-root iff z^2 - 4 = 0
  std::vector<ComplexPolynomial> Q{ComplexPolynomial({cxd(1, 0)}),
                                   ComplexPolynomial({cxd(0, 0), cxd(1, 0)}),
                                   ComplexPolynomial({cxd(1, 0)})};
  auto disc = discriminant_in_w(Q);
  REQUIRE(!disc.is_zero());
  auto zs = roots(disc);
  REQUIRE(zs.size() >= 2);
  std::sort(zs.begin(), zs.end(),
            [](cxd a, cxd b) { return a.real() < b.real(); });
  CHECK(std::abs(zs.front() + 2.0) < 1e-7);
  CHECK(std::abs(zs.back() - 2.0) < 1e-7);
}

TEST_CASE("identically degenerate curve gives the zero discriminant") {
  // (z w - 1)^2: every fiber has a double root
  std::vector<ComplexPolynomial> Q{ComplexPolynomial({cxd(1, 0)}),
                                   ComplexPolynomial({cxd(0, 0), cxd(-2, 0)}),
                                   ComplexPolynomial({cxd(0, 0), cxd(0, 0), cxd(1, 0)})};
  CHECK(discriminant_in_w(Q).is_zero());
}

TEST_CASE("linear fibers never branch") {
  std::vector<ComplexPolynomial> Q{ComplexPolynomial({cxd(-1, 0)}),
                                   ComplexPolynomial({cxd(0, 0), cxd(1, 0)})};
  auto disc = discriminant_in_w(Q);
  REQUIRE(!disc.is_zero());
  CHECK(disc.degree() == 0);
}
