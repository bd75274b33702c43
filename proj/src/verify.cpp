#include "hsp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "hsp/curve.hpp"
#include "hsp/measures.hpp"
#include "hsp/recurrence.hpp"
#include "hsp/support.hpp"

namespace hsp {

namespace {

// Frozen at the first recorded run of criterion 3; the running max root
// modulus of the fixture eigenpolynomials must stay within 1.1x of it.
constexpr double kRootModulusBaseline = 6.81769;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAIL[" << what << "] ";
    }
  }
};

using Body = std::function<void(const Pencil&, Check&)>;

void c1_branch_point_count(const Pencil& P, Check& ck) {
  PlaneCurve curve(P);
  auto bps = branch_points(curve);
  ck.require(bps.size() == 6, "count=" + std::to_string(bps.size()));
  auto disc = discriminant_in_w(curve.Q());
  double worst = 0;
  for (cxd b : bps) {
    double rel = std::abs(disc(b)) /
                 (disc.coeff_scale() * std::pow(std::max(1.0, std::abs(b)), disc.degree()));
    worst = std::max(worst, rel);
  }
  ck.require(worst <= 1e-8, "residual=" + fmt(worst));
  ck.detail << "points=" << bps.size() << " worst_residual=" << fmt(worst);
}

void c2_eigenvalue_asymptotics(const Pencil& P, Check& ck) {
  auto alphas = validate_general_type(P).alphas;
  const int k = P.order();
  const int ns[] = {15, 25, 40, 55};
  for (int j = 1; j <= k; ++j) {
    double prev = 1e300, last = 0;
    for (int n : ns) {
      cxd lam = spectral_eigenvalues(P, n).lambda_for(j);
      double gap = std::abs(lam / double(n) - alphas[j - 1]);
      ck.require(gap < prev, "j=" + std::to_string(j) + " not decreasing at n=" +
                                 std::to_string(n));
      prev = gap;
      last = gap;
    }
    ck.require(last < 0.05, "j=" + std::to_string(j) + " gap55=" + fmt(last));
    ck.detail << "j" << j << ":gap55=" << fmt(last) << " ";
  }
}

void c3_root_localization(const Pencil& P, Check& ck) {
  const int k = P.order();
  double overall = 0;
  double running = 0, running_at_30 = 0;
  for (int n = 10; n <= 55; n += 5) {
    auto ev = spectral_eigenvalues(P, n);
    for (int j = 1; j <= k; ++j) {
      auto sol = eigen_solution(P, n, j, ev.lambda_for(j));
      for (cxd r : sol.roots) running = std::max(running, std::abs(r));
    }
    if (n == 30) running_at_30 = running;
    overall = running;
  }
  ck.detail << "max_modulus=" << fmt(overall);
  if (kRootModulusBaseline > 0) {
    ck.require(overall <= 1.1 * kRootModulusBaseline,
               "above 1.1x baseline " + fmt(kRootModulusBaseline));
    ck.require(overall <= 1.05 * running_at_30,
               "running max grew " + fmt(overall / running_at_30) + "x beyond n=30");
  } else {
    ck.detail << " (baseline unset; record " << fmt(overall) << ")";
  }
}

void c4_two_route_agreement(const Pencil& P, Check& ck) {
  const int n = 55, M = 20;
  auto ev = spectral_eigenvalues(P, n);
  for (int j = 1; j <= P.order(); ++j) {
    cxd lam = ev.lambda_for(j);
    auto ld = eigen_log_derivative(P, n, lam, M);
    auto rec = solve_recurrence(P, lam, double(n) / lam, M);
    double scale = 0;
    for (int i = 1; i <= M; ++i) scale = std::max(scale, std::abs(ld.eps(i)));
    double worst = 0;
    for (int i = 1; i <= M; ++i)
      worst = std::max(worst, std::abs(ld.eps(i) - rec.eps(i)) / scale);
    ck.require(worst <= 1e-8, "j=" + std::to_string(j) + " rel=" + fmt(worst));
    ck.detail << "j" << j << ":rel=" << fmt(worst) << " ";
  }
}

void c5_formal_limit(const Pencil& P, Check& ck) {
  PlaneCurve curve(P);
  const int ns[] = {20, 40, 80};
  for (int j = 1; j <= P.order(); ++j) {
    auto bs = branch_series_at_infinity(curve, j, 11);
    double prev = 1e300;
    for (int n : ns) {
      cxd lam = spectral_eigenvalues(P, n).lambda_for(j);
      auto rec = solve_recurrence(P, lam, double(n) / lam, 11);
      // relative per coefficient: the branch coefficients span six orders of
      // magnitude over i <= 10, so an absolute max-gap would only ever see the
      // largest one
      double gap = 0;
      for (int i = 1; i <= 10; ++i)
        gap = std::max(gap, std::abs(rec.eps(i) - bs.series.eps(i)) /
                                std::max(1.0, std::abs(bs.series.eps(i))));
      ck.require(gap < prev,
                 "j=" + std::to_string(j) + " not decreasing at n=" + std::to_string(n));
      prev = gap;
      if (n == 80) ck.detail << "j" << j << ":gap80=" << fmt(gap) << " ";
    }
  }
}

void c6_phi0_closed_form(const Pencil&, Check& ck) {
  std::mt19937 rng(20230611);
  std::uniform_real_distribution<double> U(-1, 1);
  auto rc = [&] { return cxd(U(rng), U(rng)); };
  cxd a22 = rc() + cxd(1.5, 0), a21 = rc(), a20 = rc();
  cxd a11 = rc() + cxd(0, 1.5), a10 = rc(), a00 = rc() + cxd(1.5, 0);
  Pencil P2({ComplexPolynomial{a00}, ComplexPolynomial{a10, a11},
             ComplexPolynomial{a20, a21, a22}});
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    cxd eps1 = rc();
    cxd lam = rc() + cxd(4, 4);
    int m = 1 + int((U(rng) + 1) * 10);
    TruncatedSeries prefix;
    prefix.coeffs.assign(m + 1, cxd{});
    prefix.coeffs[1] = eps1;
    cxd got = phi0(P2, prefix, lam, m);
    cxd want = a22 * (2.0 * eps1 - double(m) / lam) + a11 - a22 / lam;
    worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
  }
  ck.require(worst <= 1e-12, "rel=" + fmt(worst));
  ck.detail << "worst_rel=" << fmt(worst);
}

void c7_majorant_radius(const Pencil&, Check& ck) {
  ck.require(majorant_radius(0) == 1.0, "L=0");
  ck.require(majorant_radius(0.5) == 0.25, "L=1/2");
  ck.require(majorant_radius(2) == 1.0 / 25.0, "L=2");
  ck.detail << "spot values exact";
}

void c8_branch_convergence(const Pencil& P, Check& ck) {
  PlaneCurve curve(P);
  double r = 1;
  for (cxd b : branch_points(curve)) r = std::max(r, std::abs(b));
  const double radius = 2 * r;
  const int ns[] = {15, 25, 40, 55};
  for (int j = 1; j <= P.order(); ++j) {
    double prev = 1e300;
    for (int n : ns) {
      double dev = branch_deviation(P, j, n, radius, 64);
      ck.require(dev < prev,
                 "j=" + std::to_string(j) + " not decreasing at n=" + std::to_string(n));
      prev = dev;
      if (n == 55) ck.detail << "j" << j << ":dev55=" << fmt(dev) << " ";
    }
  }
}

void c9_potential_example(const Pencil&, Check& ck) {
  const int m = 200;
  std::vector<cxd> c(m + 1, cxd{});
  c[0] = -1;
  c[m] = 1;
  ComplexPolynomial p(std::move(c));
  auto mu = root_measure(p);
  auto mud = root_measure(p.derivative());
  double u2 = log_potential(mu, cxd(2, 0));
  double uh = log_potential(mu, cxd(0.5, 0));
  double udh = log_potential(mud, cxd(0.5, 0));
  ck.require(std::abs(u2 - std::log(2.0)) <= 0.01, "u(2)=" + fmt(u2));
  ck.require(std::abs(uh) <= 0.02, "u(0.5)=" + fmt(uh));
  ck.require(udh < uh - 0.5, "u'(0.5)=" + fmt(udh));
  ck.detail << "u(2)=" << fmt(u2) << " u(0.5)=" << fmt(uh) << " u'(0.5)=" << fmt(udh);
}

void c10_example3_circle(const Pencil&, Check& ck) {
  cxd b1 = 2.0 * std::polar(1.0, 0.0);
  cxd b2 = 2.0 * std::polar(1.0, 2 * M_PI / 3);
  cxd b3 = 2.0 * std::polar(1.0, 4 * M_PI / 3);
  // prod_i ((b_i - z) w - 1) expanded in w
  ComplexPolynomial L1({b1, -1.0}), L2({b2, -1.0}), L3({b3, -1.0});
  ComplexPolynomial Q3 = L1 * L2 * L3;
  ComplexPolynomial Q2 = (L1 * L2 + L1 * L3 + L2 * L3) * cxd(-1.0);
  ComplexPolynomial Q1 = L1 + L2 + L3;
  ComplexPolynomial Q0 = ComplexPolynomial::constant(-1.0);
  Pencil P3({Q0, Q1, Q2, Q3});

  auto circ = example3_circle(b1, b2, b3);
  const double res = 0.01;
  Rect rect{-2.4, -2.4, 2.4, 2.4};
  auto locus = gamma_locus(P3, 1, {1, 2, 3}, rect, res);
  ck.require(!locus.points.empty(), "empty locus");
  double worst = 0;
  for (cxd p : locus.points)
    worst = std::max(worst, std::abs(std::abs(p - circ.center) - circ.radius));
  ck.require(worst <= 2 * res, "circle_dist=" + fmt(worst));

  auto perm = gamma_locus(P3, 1, {2, 3, 1}, rect, res);
  double pworst = 0;
  for (cxd p : perm.points) {
    double best = 1e300;
    for (cxd q : locus.points) best = std::min(best, std::abs(p - q));
    pworst = std::max(pworst, best);
  }
  ck.require(pworst <= 2 * res, "perm_dist=" + fmt(pworst));
  ck.detail << "center=(" << fmt(circ.center.real()) << "," << fmt(circ.center.imag())
            << ") radius=" << fmt(circ.radius) << " n=" << locus.points.size()
            << " circle_dist=" << fmt(worst) << " perm_dist=" << fmt(pworst);
}

void c11_tangent_and_density(const Pencil& P, Check& ck) {
  const int n = 55;
  cxd lam = spectral_eigenvalues(P, n).lambda_for(1);
  auto sol = eigen_solution(P, n, 1, lam);
  RootMeasure mu{sol.roots};

  // seed: the atom whose 3rd-nearest neighbor is closest (densest cluster)
  cxd seed{};
  double best = 1e300;
  for (cxd a : mu.atoms) {
    std::vector<double> d;
    for (cxd b : mu.atoms)
      if (b != a) d.push_back(std::abs(a - b));
    std::nth_element(d.begin(), d.begin() + 2, d.end());
    if (d[2] < best) {
      best = d[2];
      seed = a;
    }
  }

  // median nearest-neighbor spacing, for the co-location score
  std::vector<double> nn;
  for (cxd a : mu.atoms) {
    double dmin = 1e300;
    for (cxd b : mu.atoms)
      if (b != a) dmin = std::min(dmin, std::abs(a - b));
    nn.push_back(dmin);
  }
  std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
  const double spacing = nn[nn.size() / 2];

  // the level curve for the pair of branches that best co-locates with the
  // root cloud carries the measure; the other pairs are rejected by score
  LevelCurve bestlc;
  int bestscore = -1;
  for (auto pr : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
    try {
      // step 0.004: the trace passes within ~0.05 of a branch point, and the
      // central-difference tangent there carries ~h^2 of discretization angle
      auto lc = trace_level_curve(P, 1, pr, seed, 0.004, 8.0);
      int score = 0;
      for (cxd a : mu.atoms) {
        double dmin = 1e300;
        for (cxd v : lc.points) dmin = std::min(dmin, std::abs(a - v));
        if (dmin <= 3 * spacing) ++score;
      }
      if (score > bestscore) {
        bestscore = score;
        bestlc = lc;
      }
    } catch (const std::runtime_error&) {
    }
  }
  ck.require(bestscore >= 0, "no traceable pair");
  if (bestscore < 0) return;
  ck.detail << "pair=" << bestlc.pair.first << "-" << bestlc.pair.second
            << " colocated=" << bestscore << "/" << mu.atoms.size()
            << " vertices=" << bestlc.points.size() << " ";

  double worst_angle = 0;
  for (size_t v = 1; v + 1 < bestlc.points.size(); ++v) {
    cxd t = bestlc.points[v + 1] - bestlc.points[v - 1];
    cxd e = cxd(0, 1) * std::conj(bestlc.gvals[v]);
    double s = std::abs(std::imag(t * std::conj(e))) / (std::abs(t) * std::abs(e));
    worst_angle = std::max(worst_angle, std::asin(std::min(1.0, s)));
  }
  ck.require(worst_angle <= 1e-4, "angle=" + fmt(worst_angle));
  ck.detail << "angle=" << fmt(worst_angle) << " ";

  double len = 0;
  for (size_t v = 1; v < bestlc.points.size(); ++v)
    len += std::abs(bestlc.points[v] - bestlc.points[v - 1]);
  auto rep = density_vs_roots(bestlc, mu, len / 8);
  ck.require(rep.mean >= 0.7 && rep.mean <= 1.3, "density_mean=" + fmt(rep.mean));
  ck.detail << "density_mean=" << fmt(rep.mean) << " spread=" << fmt(rep.spread);
}

void c12_cauchy_identity(const Pencil&, Check& ck) {
  std::mt19937 rng(987654);
  std::uniform_real_distribution<double> U(-1, 1);
  std::uniform_int_distribution<int> D(1, 30);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    int deg = D(rng);
    std::vector<cxd> c(deg + 1);
    for (auto& cc : c) cc = cxd(U(rng), U(rng));
    while (std::abs(c[deg]) < 0.1) c[deg] = cxd(U(rng), U(rng));
    ComplexPolynomial p(std::move(c));
    auto mu = root_measure(p);
    cxd z;
    for (int tries = 0;; ++tries) {
      z = cxd(2.5 * U(rng), 2.5 * U(rng));
      double dmin = 1e300;
      for (cxd a : mu.atoms) dmin = std::min(dmin, std::abs(z - a));
      if (dmin > 0.05 || tries > 200) break;
    }
    cxd got = cauchy_transform(mu, z);
    cxd want = p.derivative()(z) / (double(deg) * p(z));
    worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
  }
  ck.require(worst <= 1e-10, "rel=" + fmt(worst));
  ck.detail << "worst_rel=" << fmt(worst);
}

}  // namespace

Pencil fixture_pencil() {
  ComplexPolynomial Q3({cxd{}, cxd(4, 2), cxd(-5, -2), cxd(1, 0)});
  ComplexPolynomial Q2({cxd(2, 0), cxd(0, 1), cxd(1, 0)});
  ComplexPolynomial Q1({cxd(-0.4, 0.2), cxd(0.2, 0)});
  ComplexPolynomial Q0({cxd(1, 0)});
  return Pencil({Q0, Q1, Q2, Q3});
}

std::vector<CriterionResult> run_acceptance(const Pencil& P) {
  struct Entry {
    int id;
    const char* name;
    Body body;
  };
  const Entry entries[] = {
      {1, "branch point count", c1_branch_point_count},
      {2, "eigenvalue asymptotics", c2_eigenvalue_asymptotics},
      {3, "root localization", c3_root_localization},
      {4, "two-route series agreement", c4_two_route_agreement},
      {5, "formal limit to the curve", c5_formal_limit},
      {6, "Phi0 closed form (k=2)", c6_phi0_closed_form},
      {7, "majorant radius spot values", c7_majorant_radius},
      {8, "branch convergence", c8_branch_convergence},
      {9, "potential example (z^200 - 1)", c9_potential_example},
      {10, "three-pole circle locus", c10_example3_circle},
      {11, "tangent orthogonality and density", c11_tangent_and_density},
      {12, "Cauchy transform identity", c12_cauchy_identity},
  };
  std::vector<CriterionResult> out;
  for (const auto& e : entries) {
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    auto t0 = std::chrono::steady_clock::now();
    Check ck;
    try {
      e.body(P, ck);
      r.pass = ck.pass;
      r.detail = ck.detail.str();
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace hsp
