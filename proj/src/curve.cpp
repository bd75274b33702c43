#include "hsp/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsp {

PlaneCurve::PlaneCurve(std::vector<ComplexPolynomial> Q) : Q_(std::move(Q)) {
  if (Q_.size() < 2) throw std::invalid_argument("curve: need order k >= 1");
  k_ = static_cast<int>(Q_.size()) - 1;
  if (Q_[k_].is_zero())
    throw DegenerateCurve("curve: Q_k identically zero, not a k-sheeted covering");
  for (int i = 0; i <= k_; ++i)
    if (!Q_[i].is_zero() && Q_[i].degree() > i)
      throw std::invalid_argument("curve: deg Q_" + std::to_string(i) + " exceeds " +
                                  std::to_string(i));
}

std::vector<cxd> PlaneCurve::P(int i) const {
  std::vector<cxd> p(i + 1);
  for (int t = 0; t <= i; ++t) p[t] = a(i, i - t);
  while (!p.empty() && p.back() == cxd{}) p.pop_back();
  return p;
}

double PlaneCurve::coeff_scale() const {
  double s = 0;
  for (const auto& q : Q_) s = std::max(s, q.coeff_scale());
  return s;
}

BranchesAt branches_at(const PlaneCurve& curve, cxd z, const PrecisionPolicy& policy) {
  const int k = curve.order();
  std::vector<cxd> c(k + 1);
  double scale = 0;
  for (int i = 0; i <= k; ++i) {
    c[i] = curve.Q(i).is_zero() ? cxd{} : curve.Q(i)(z);
    scale = std::max(scale, std::abs(c[i]));
  }
  BranchesAt out;
  if (std::abs(c[k]) <= 1e-12 * scale) out.sheet_drop = true;
  while (!c.empty() && std::abs(c.back()) <= 1e-12 * scale) c.pop_back();
  if (c.size() <= 1) return out;
  out.w = roots(ComplexPolynomial(std::move(c)), policy);
  return out;
}

std::vector<cxd> branch_points(const PlaneCurve& curve, const PrecisionPolicy& policy) {
  ComplexPolynomial disc = discriminant_in_w(curve.Q(), policy);
  if (disc.is_zero())
    throw DegenerateCurve("branch_points: discriminant vanishes identically");
  if (disc.degree() < 1) return {};
  auto zs = roots(disc, policy);
  const int k = curve.order();
  const ComplexPolynomial& qk = curve.Q(k);
  std::vector<cxd> out;
  for (cxd z : zs) {
    double qscale = qk.coeff_scale() * std::pow(std::max(1.0, std::abs(z)), qk.degree());
    if (std::abs(qk(z)) <= 1e-8 * qscale) continue;
    bool dup = false;
    for (cxd seen : out)
      if (std::abs(z - seen) <= 1e-6 * (1 + std::abs(seen))) dup = true;
    if (!dup) out.push_back(z);
  }
  return out;
}

std::vector<cxd> xi_roots(const PlaneCurve& curve, const PrecisionPolicy& policy) {
  const int k = curve.order();
  cxd a00 = curve.a(0, 0), akk = curve.a(k, k);
  if (a00 == cxd{} || akk == cxd{})
    throw DegenerateCharEq("xi_roots: a_{0,0} and a_{k,k} must be nonzero");

  std::vector<cxd> recip(k + 1), charc(k + 1);
  for (int i = 0; i <= k; ++i) {
    recip[i] = curve.a(i, i);
    charc[i] = curve.a(k - i, k - i);
  }
  auto xis = roots(ComplexPolynomial(std::move(recip)), policy);
  auto alphas = roots(ComplexPolynomial(std::move(charc)), policy);

  // order by the alpha labels: xi_j = 1/alpha_j
  std::vector<cxd> out(k);
  std::vector<bool> used(k, false);
  for (int j = 0; j < k; ++j) {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1;
    for (int i = 0; i < k; ++i) {
      if (used[i]) continue;
      double d = std::abs(xis[i] * alphas[j] - 1.0);
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    used[bi] = true;
    out[j] = xis[bi];
  }
  return out;
}

BranchSeries branch_series_at_infinity(const PlaneCurve& curve, int j, int M,
                                       const PrecisionPolicy& policy) {
  const int k = curve.order();
  if (j < 1 || j > k) throw std::invalid_argument("branch label out of range");
  if (M < 1) throw std::invalid_argument("truncation order M >= 1 required");
  auto xis = xi_roots(curve, policy);
  cxd xi = xis[j - 1];

  // simplicity of xi_j in the reciprocal characteristic equation
  std::vector<cxd> recip(k + 1);
  for (int i = 0; i <= k; ++i) recip[i] = curve.a(i, i);
  ComplexPolynomial rp(recip);
  double rscale = rp.coeff_scale() * std::pow(std::max(1.0, std::abs(xi)), k - 1);
  if (std::abs(rp.derivative()(xi)) <= 1e-8 * rscale)
    throw MultipleXi("branch_series_at_infinity: xi_" + std::to_string(j) +
                     " is not a simple root");
  for (int i = 0; i < k; ++i)
    if (i != j - 1 && std::abs(xis[i] - xi) <= 1e-10 * (1 + std::abs(xi)))
      throw MultipleXi("branch_series_at_infinity: coincident xi roots");

  // Newton on truncated series for F(N) = sum_i P_i(y) N^i = 0 (mod y^M)
  using detail::series;
  std::vector<series<cxd>> P(k + 1);
  double pscale = 0;
  for (int i = 0; i <= k; ++i) {
    P[i] = curve.P(i);
    pscale = std::max(pscale, detail::series_scale(P[i]));
  }
  const int len = M;
  series<cxd> N(len, cxd{});
  N[0] = xi;
  double resid = 0;
  for (int iter = 0; iter < 64; ++iter) {
    series<cxd> f(len, cxd{}), fp(len, cxd{});
    series<cxd> npow(len, cxd{});
    npow[0] = 1.0;
    // the terms P_i N^i grow geometrically with the truncation order, so the
    // residual must be judged against their scale, not the input coefficients
    double tscale = pscale;
    for (int i = 0; i <= k; ++i) {
      auto term = detail::series_mul(P[i], npow, len);
      tscale = std::max(tscale, detail::series_scale(term));
      detail::series_add_scaled(f, term, cxd(1.0));
      if (i < k) {
        auto next = detail::series_mul(npow, N, len);
        auto dterm = detail::series_mul(P[i + 1], npow, len);
        detail::series_add_scaled(fp, dterm, cxd(double(i + 1)));
        npow = std::move(next);
      }
    }
    resid = detail::series_scale(f) / std::max(tscale, 1e-300);
    if (resid <= 1e-13) break;
    auto delta = detail::series_div(f, fp, len);
    for (int t = 0; t < len; ++t) N[t] -= delta[t];
  }
  if (resid > 1e-12)
    throw PrecisionExhausted("branch_series_at_infinity: plug-back residual " +
                             std::to_string(resid));

  BranchSeries out;
  out.j = j;
  out.xi = xi;
  out.series.origin = TruncatedSeries::Origin::CurveBranch;
  out.series.coeffs.assign(M + 1, cxd{});
  for (int i = 0; i < M; ++i) out.series.coeffs[i + 1] = N[i];  // eps_{i+1}
  return out;
}

ContinuationResult continue_branch(const PlaneCurve& curve, const std::vector<cxd>& path,
                                   cxd w0, const PrecisionPolicy& policy,
                                   double clearance) {
  if (path.size() < 2) throw std::invalid_argument("continue_branch: need a polyline");
  std::vector<cxd> bps;
  try {
    bps = branch_points(curve, policy);
  } catch (const DegenerateCurve&) {
    throw;
  }
  double curve_scale = 1.0;
  for (cxd b : bps) curve_scale = std::max(curve_scale, std::abs(b));
  if (clearance < 0) clearance = 1e-3 * curve_scale;

  auto check_clearance = [&](cxd z) {
    for (cxd b : bps)
      if (std::abs(z - b) < clearance)
        throw BranchCollision("continue_branch: path within clearance of branch point");
  };

  ContinuationResult out;
  cxd z = path.front();
  check_clearance(z);
  // verify w0 is a branch value at the start
  {
    auto f = branches_at(curve, z, policy);
    double best = std::numeric_limits<double>::infinity();
    cxd snapped = w0;
    for (cxd w : f.w)
      if (std::abs(w - w0) < best) {
        best = std::abs(w - w0);
        snapped = w;
      }
    if (best > 1e-6 * (1 + std::abs(w0)))
      throw std::invalid_argument("continue_branch: w0 is not a branch value at start");
    w0 = snapped;
  }
  cxd w = w0;
  out.samples.push_back({z, w});

  for (size_t seg = 1; seg < path.size(); ++seg) {
    cxd target = path[seg];
    while (std::abs(target - z) > 0) {
      cxd znext = target;
      for (int halve = 0;; ++halve) {
        if (halve > 48)
          throw BranchCollision("continue_branch: step underflow near branch point");
        check_clearance(znext);
        auto f = branches_at(curve, znext, policy);
        // nearest and second-nearest root to the tracked value
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        cxd wn{};
        for (cxd cand : f.w) {
          double d = std::abs(cand - w);
          if (d < d1) {
            d2 = d1;
            d1 = d;
            wn = cand;
          } else if (d < d2) {
            d2 = d;
          }
        }
        if (f.w.size() <= 1 || d1 < 0.5 * d2) {
          z = znext;
          w = wn;
          out.samples.push_back({z, w});
          break;
        }
        znext = z + 0.5 * (znext - z);
      }
    }
  }

  if (std::abs(path.back() - path.front()) <= 1e-12 * (1 + std::abs(path.front()))) {
    if (std::abs(w - w0) > 1e-6 * (1 + std::abs(w0))) out.monodromy = true;
  }
  return out;
}

}  // namespace hsp
