#include "hsp/measures.hpp"

#include <algorithm>
#include <cmath>

namespace hsp {

namespace {

double atom_scale(const RootMeasure& mu) {
  double s = 1.0;
  for (cxd a : mu.atoms) s = std::max(s, std::abs(a));
  return s;
}

void guard_collision(const RootMeasure& mu, cxd z) {
  double tol = 1e-13 * atom_scale(mu);
  for (cxd a : mu.atoms)
    if (std::abs(z - a) <= tol)
      throw AtomCollision("evaluation point collides with a measure atom");
}

// Andrew monotone chain; returns hull vertices counterclockwise.
std::vector<cxd> convex_hull(std::vector<cxd> pts) {
  std::sort(pts.begin(), pts.end(), [](cxd a, cxd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](cxd o, cxd a, cxd b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
  };
  std::vector<cxd> h(2 * pts.size());
  size_t m = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (m >= 2 && cross(h[m - 2], h[m - 1], pts[i]) <= 0) --m;
    h[m++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = m + 1; i-- > 0;) {
    while (m >= t && cross(h[m - 2], h[m - 1], pts[i]) <= 0) --m;
    h[m++] = pts[i];
  }
  h.resize(m - 1);
  return h;
}

bool inside_hull(const std::vector<cxd>& hull, cxd z) {
  if (hull.size() < 3) return false;
  for (size_t i = 0; i < hull.size(); ++i) {
    cxd a = hull[i], b = hull[(i + 1) % hull.size()];
    double cr = (b.real() - a.real()) * (z.imag() - a.imag()) -
                (b.imag() - a.imag()) * (z.real() - a.real());
    if (cr < 0) return false;
  }
  return true;
}

}  // namespace

RootMeasure root_measure(const ComplexPolynomial& p, const PrecisionPolicy& policy) {
  if (p.is_zero() || p.degree() < 1)
    throw std::invalid_argument("root_measure: degree >= 1 required");
  RootMeasure mu;
  mu.atoms = roots(p, policy);
  return mu;
}

cxd cauchy_transform(const RootMeasure& mu, cxd z) {
  guard_collision(mu, z);
  cxd acc{};
  for (cxd a : mu.atoms) acc += 1.0 / (z - a);
  return acc * mu.weight();
}

double log_potential(const RootMeasure& mu, cxd z) {
  guard_collision(mu, z);
  double acc = 0;
  for (cxd a : mu.atoms) acc += std::log(std::abs(z - a));
  return acc * mu.weight();
}

double branch_deviation(const Pencil& P, int j, int n, double radius, int samples,
                        const PrecisionPolicy& policy) {
  if (samples < 1) throw std::invalid_argument("branch_deviation: samples >= 1");
  PlaneCurve curve(P);
  for (cxd b : branch_points(curve, policy))
    if (radius <= std::abs(b))
      throw std::invalid_argument("branch_deviation: radius must exceed all branch points");

  cxd lambda = spectral_eigenvalues(P, n, policy).lambda_for(j);
  auto bs = branch_series_at_infinity(curve, j, 12, policy);

  // branch value nearest to the series prediction, per sample (double is fine:
  // the fiber is well conditioned away from branch points)
  std::vector<cxd> gammas(samples);
  for (int s = 0; s < samples; ++s) {
    cxd z = std::polar(radius, 2 * M_PI * s / samples);
    cxd y = 1.0 / z;
    cxd pred{};
    for (int i = bs.series.order(); i >= 1; --i) pred = (pred + bs.series.eps(i)) * y;
    auto fiber = branches_at(curve, z, policy);
    if (fiber.w.empty()) throw DegenerateCurve("branch_deviation: empty fiber");
    cxd gamma = fiber.w[0];
    for (cxd w : fiber.w)
      if (std::abs(w - pred) < std::abs(gamma - pred)) gamma = w;
    gammas[s] = gamma;
  }

  // p'(z)/(lambda p(z)) must be evaluated at the working precision of the
  // kernel coefficients: near the eigenpolynomial's coefficient peak the
  // largest Horner term dwarfs the value, and hardware doubles leave pure
  // roundoff. Accept when consecutive tiers agree.
  double worst = 0, prev_worst = 0;
  bool have_prev = false;
  bool ok = detail::precision_ladder(policy, [&](auto tag) {
    using C = typename decltype(tag)::type;
    std::vector<C> c;
    double residual = 0;
    bool resid_ok = detail::triangular_solve<C>(P, n, lambda, policy.residual_target,
                                                &c, &residual);
    std::vector<C> d(c.size() - 1);
    for (size_t m = 1; m < c.size(); ++m) d[m - 1] = C(double(m)) * c[m];
    const C lam = detail::from_cxd<C>(lambda);
    worst = 0;
    for (int s = 0; s < samples; ++s) {
      cxd z = std::polar(radius, 2 * M_PI * s / samples);
      C zc = detail::from_cxd<C>(z);
      cxd L = detail::round_cxd(detail::horner(d, zc) / (lam * detail::horner(c, zc)));
      worst = std::max(worst, std::abs(L - gammas[s]));
    }
    bool stable =
        have_prev && std::abs(worst - prev_worst) <= 1e-9 + 1e-6 * worst;
    prev_worst = worst;
    have_prev = true;
    return resid_ok && stable;
  });
  if (!ok) throw PrecisionExhausted("branch_deviation: precision ladder exhausted");
  return worst;
}

PotentialOrderingReport potential_ordering_check(
    const std::vector<ComplexPolynomial>& p_list, const std::vector<cxd>& grid,
    const PrecisionPolicy& policy) {
  PotentialOrderingReport rep;
  for (const auto& p : p_list) {
    if (p.is_zero() || p.degree() < 2)
      throw std::invalid_argument("potential_ordering_check: degree >= 2 required");
    RootMeasure mu = root_measure(p, policy);
    RootMeasure mud = root_measure(p.derivative(), policy);
    double slack = 5.0 / p.degree();

    auto hull = convex_hull(mu.atoms);
    cxd centroid{};
    for (cxd a : mu.atoms) centroid += a;
    centroid /= double(mu.atoms.size());
    std::vector<cxd> inflated;
    inflated.reserve(hull.size());
    for (cxd h : hull) inflated.push_back(centroid + 1.2 * (h - centroid));

    for (cxd z : grid) {
      double u, ud;
      try {
        u = log_potential(mu, z);
        ud = log_potential(mud, z);
      } catch (const AtomCollision&) {
        continue;
      }
      rep.max_violation = std::max(rep.max_violation, ud - u - slack);
      if (!inside_hull(inflated, z)) {
        rep.max_outer_gap = std::max(rep.max_outer_gap, std::abs(u - ud));
        ++rep.outer_points;
      }
    }
  }
  return rep;
}

}  // namespace hsp
