#include "hsp/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsp {

const char* origin_name(TruncatedSeries::Origin o) {
  switch (o) {
    case TruncatedSeries::Origin::LogDerivative:
      return "log-derivative";
    case TruncatedSeries::Origin::Recurrence:
      return "recurrence";
    case TruncatedSeries::Origin::CurveBranch:
      return "curve-branch";
  }
  return "unknown";
}

namespace {

using detail::dbl;
using detail::from_cxd;
using detail::series;

// r_0 = 1, r_{i+1} = lambda (yN) r_i - y^2 d/dy r_i; returns
// sum_i P_i(y) lambda^{-i} (y^{-i} r_i) to length outlen. L holds the
// coefficients of yN. term_scale reports the largest summand magnitude for
// relative residual tests.
template <class C>
series<C> residual_kernel(const Pencil& P, const C& lambda, const series<C>& L,
                          int outlen, bool check_order, double* term_scale = nullptr) {
  const int k = P.order();
  const int worklen = outlen + k;
  series<C> r(worklen, C{});
  r[0] = C(1);
  series<C> out(outlen, C{});
  const C lam_inv = C(1) / lambda;
  C lam_inv_pow(1);
  double tscale = 0;
  for (int i = 0; i <= k; ++i) {
    if (check_order) {
      double rs = std::max(detail::series_scale(r), 1e-300);
      for (int t = 0; t < i && t < worklen; ++t)
        if (dbl(abs(r[t])) > 1e-10 * rs)
          throw OrderViolation("pencil_series_residual: r_" + std::to_string(i) +
                               " has y-order below " + std::to_string(i));
    }
    series<C> s(outlen, C{});
    for (int t = 0; t < outlen && t + i < worklen; ++t) s[t] = r[t + i];
    series<C> Piy(i + 1, C{});
    for (int t = 0; t <= i; ++t) Piy[t] = from_cxd<C>(P.a(i, i - t));
    auto term = detail::series_mul(Piy, s, outlen);
    for (auto& c : term) c *= lam_inv_pow;
    tscale = std::max(tscale, detail::series_scale(term));
    detail::series_add_scaled(out, term, C(1));
    lam_inv_pow *= lam_inv;
    if (i < k) {
      series<C> next = detail::series_mul(L, r, worklen);
      for (auto& c : next) c *= lambda;
      // subtract y^2 d/dy r: coefficient at u is (u-1) r[u-1]
      for (int u = 2; u < worklen; ++u) next[u] -= C(double(u - 1)) * r[u - 1];
      r = std::move(next);
    }
  }
  if (term_scale) *term_scale = tscale;
  return out;
}

// The y^0 residual coefficient as a degree-k polynomial in eps_1,
// reconstructed by inverse DFT over k+1 nodes on a circle of radius
// max(1, 2 max|xi|).
std::vector<cxd> constant_term_poly(const Pencil& P, cxd lambda,
                                    const PrecisionPolicy& policy) {
  const int k = P.order();
  double R = 1.0;
  ComplexPolynomial recip = P.reciprocal_characteristic();
  if (!recip.is_zero() && recip.degree() >= 1) {
    for (cxd xi : roots(recip, policy)) R = std::max(R, 2 * std::abs(xi));
  }
  const int nn = k + 1;
  std::vector<cxd> f(nn);
  for (int s = 0; s < nn; ++s) {
    cxd node = std::polar(R, 2 * M_PI * s / nn);
    series<cxd> L(2, cxd{});
    L[1] = node;
    f[s] = residual_kernel<cxd>(P, lambda, L, 1, false)[0];
  }
  std::vector<cxd> c(nn);
  for (int j = 0; j < nn; ++j) {
    cxd acc{};
    for (int s = 0; s < nn; ++s) acc += f[s] * std::polar(1.0, -2 * M_PI * j * s / nn);
    c[j] = acc / (double(nn) * std::pow(R, j));
  }
  return c;
}

}  // namespace

TruncatedSeries log_derivative_series(const ComplexPolynomial& p, cxd lambda, int M) {
  if (p.is_zero() || p.degree() < 1)
    throw std::invalid_argument("log_derivative_series: degree >= 1 required");
  if (lambda == cxd{}) throw std::invalid_argument("log_derivative_series: lambda != 0");
  if (std::abs(p.leading() - 1.0) > 1e-12)
    throw std::invalid_argument("log_derivative_series: p must be monic");
  if (M < 1) throw std::invalid_argument("log_derivative_series: M >= 1 required");
  const int n = p.degree();
  series<cxd> rev(M, cxd{}), revd(M, cxd{});
  for (int t = 0; t <= n && t < M; ++t) {
    rev[t] = p.coeff(n - t);
    revd[t] = double(n - t) * p.coeff(n - t);
  }
  auto q = detail::series_div(revd, rev, M);
  TruncatedSeries out;
  out.origin = TruncatedSeries::Origin::LogDerivative;
  out.lambda = lambda;
  out.coeffs.assign(M + 1, cxd{});
  for (int t = 0; t < M; ++t) out.coeffs[t + 1] = q[t] / lambda;
  return out;
}

TruncatedSeries eigen_log_derivative(const Pencil& P, int n, cxd lambda, int M,
                                     const PrecisionPolicy& policy) {
  if (n < 1) throw std::invalid_argument("eigen_log_derivative: n >= 1 required");
  if (M < 1) throw std::invalid_argument("eigen_log_derivative: M >= 1 required");
  if (lambda == cxd{}) throw std::invalid_argument("eigen_log_derivative: lambda != 0");
  std::vector<cxd> eps, prev;
  bool have_prev = false;
  bool ok = detail::precision_ladder(policy, [&](auto tag) {
    using C = typename decltype(tag)::type;
    std::vector<C> c;
    double residual = 0;
    bool resid_ok = detail::triangular_solve<C>(P, n, lambda, policy.residual_target,
                                                &c, &residual);
    series<C> rev(M, C{}), revd(M, C{});
    for (int t = 0; t <= n && t < M; ++t) {
      rev[t] = c[n - t];
      revd[t] = C(double(n - t)) * c[n - t];
    }
    auto q = detail::series_div(revd, rev, M);
    const C lam = from_cxd<C>(lambda);
    eps.assign(M + 1, cxd{});
    for (int t = 0; t < M; ++t) eps[t + 1] = detail::round_cxd(q[t] / lam);
    double scale = 0;
    for (cxd e : eps) scale = std::max(scale, std::abs(e));
    bool stable = have_prev && prev.size() == eps.size();
    if (stable) {
      for (size_t m = 0; m < eps.size(); ++m) {
        if (std::abs(eps[m] - prev[m]) >
            policy.residual_target * std::max(scale, 1e-280)) {
          stable = false;
          break;
        }
      }
    }
    prev = eps;
    have_prev = true;
    return resid_ok && stable;
  });
  if (!ok) throw PrecisionExhausted("eigen_log_derivative: precision ladder exhausted");
  TruncatedSeries out;
  out.origin = TruncatedSeries::Origin::LogDerivative;
  out.lambda = lambda;
  out.coeffs = std::move(eps);
  return out;
}

TruncatedSeries pencil_series_residual(const Pencil& P, cxd lambda,
                                       const TruncatedSeries& N) {
  if (lambda == cxd{}) throw std::invalid_argument("pencil_series_residual: lambda != 0");
  const int M = N.order();
  auto out = residual_kernel<cxd>(P, lambda, N.coeffs, M + 1, true);
  TruncatedSeries res;
  res.origin = N.origin;
  res.lambda = lambda;
  res.coeffs = std::move(out);
  return res;
}

std::vector<cxd> epsilon1_candidates(const Pencil& P, cxd lambda,
                                     double lambda_threshold,
                                     const PrecisionPolicy& policy) {
  const int k = P.order();
  if (lambda_threshold < 0) lambda_threshold = 10.0 * k * P.coeff_scale();
  if (std::abs(lambda) < lambda_threshold)
    throw std::invalid_argument("epsilon1_candidates: |lambda| below the large-lambda threshold");
  auto c = constant_term_poly(P, lambda, policy);
  double cmax = 0;
  for (cxd cj : c) cmax = std::max(cmax, std::abs(cj));
  if (std::abs(c[k]) <= 1e-8 * cmax)
    throw RootDeficient("epsilon1_candidates: constant-term polynomial drops below degree k");
  return roots(ComplexPolynomial(std::move(c)), policy);
}

cxd phi0(const Pencil& P, const TruncatedSeries& eps_prefix, cxd lambda, int m) {
  if (m < 1) throw std::invalid_argument("phi0: m >= 1 required");
  series<cxd> L(m + 2, cxd{});
  for (int i = 1; i <= m; ++i) L[i] = eps_prefix.eps(i);
  L[m + 1] = cxd{};
  cxd B0 = residual_kernel<cxd>(P, lambda, L, m + 1, false)[m];
  L[m + 1] = cxd(1);
  cxd B1 = residual_kernel<cxd>(P, lambda, L, m + 1, false)[m];
  return B1 - B0;
}

namespace {

template <class C>
bool solve_recurrence_kernel(const Pencil& P, cxd lambda0, cxd eps10, int M,
                             double residual_target, std::vector<cxd>* out) {
  const C lambda = from_cxd<C>(lambda0);
  const double scale = std::max(P.coeff_scale(), 1e-300);
  series<C> L(M + 1, C{});
  L[1] = from_cxd<C>(eps10);
  {
    auto r0 = residual_kernel<C>(P, lambda, L, 1, false);
    if (dbl(abs(r0[0])) > 1e-6 * scale)
      throw std::invalid_argument(
          "solve_recurrence: eps1 does not satisfy the constant-term equation");
  }
  for (int m = 1; m < M; ++m) {
    L[m + 1] = C{};
    C B = residual_kernel<C>(P, lambda, L, m + 1, false)[m];
    L[m + 1] = C(1);
    C Phi = residual_kernel<C>(P, lambda, L, m + 1, false)[m] - B;
    if (dbl(abs(Phi)) < 1e-12 * scale)
      throw ResonantPhi0("solve_recurrence: Phi0 vanishes at m = " + std::to_string(m));
    L[m + 1] = -B / Phi;
  }
  double tscale = 0;
  auto rfull = residual_kernel<C>(P, lambda, L, M, true, &tscale);
  double rel = detail::series_scale(rfull) / std::max(tscale, 1e-300);
  out->resize(M + 1);
  for (int i = 0; i <= M; ++i) (*out)[i] = detail::round_cxd(L[i]);
  return rel <= residual_target;
}

}  // namespace

TruncatedSeries solve_recurrence(const Pencil& P, cxd lambda, cxd eps1, int M,
                                 const PrecisionPolicy& policy) {
  if (M < 1) throw std::invalid_argument("solve_recurrence: M >= 1 required");
  if (lambda == cxd{}) throw std::invalid_argument("solve_recurrence: lambda != 0");
  std::vector<cxd> coeffs;
  // The residual check re-runs the same arithmetic as the recurrence, so it
  // cannot see relative error accumulated in the later coefficients.  Accept
  // only when two consecutive precision tiers agree coefficient-wise.
  std::vector<cxd> prev;
  bool have_prev = false;
  bool ok = detail::precision_ladder(policy, [&](auto tag) {
    using C = typename decltype(tag)::type;
    bool resid_ok = solve_recurrence_kernel<C>(P, lambda, eps1, M, 1e-10, &coeffs);
    bool stable = have_prev && prev.size() == coeffs.size();
    if (stable) {
      for (size_t m = 0; m < coeffs.size(); ++m) {
        double diff = std::abs(coeffs[m] - prev[m]);
        if (diff > policy.residual_target * std::max(std::abs(coeffs[m]), 1e-280)) {
          stable = false;
          break;
        }
      }
    }
    prev = coeffs;
    have_prev = true;
    return resid_ok && stable;
  });
  if (!ok) throw PrecisionExhausted("solve_recurrence: residual bound unmet");
  TruncatedSeries out;
  out.origin = TruncatedSeries::Origin::Recurrence;
  out.lambda = lambda;
  out.coeffs = std::move(coeffs);
  return out;
}

Phi0Scan phi0_sup_scan(const Pencil& P, cxd lambda, cxd eps1, int m_max) {
  if (m_max < 1) throw std::invalid_argument("phi0_sup_scan: m_max >= 1 required");
  const int k = P.order();
  const double scale = std::max(P.coeff_scale(), 1e-300);
  Phi0Scan scan;
  scan.lambda = lambda;
  scan.eps1 = eps1;
  scan.m_max = m_max;

  TruncatedSeries prefix;
  prefix.coeffs.assign(m_max + 1, cxd{});
  prefix.coeffs[1] = eps1;

  auto consider = [&](cxd phi, int m) {
    if (std::abs(phi) < 1e-12 * scale)
      throw ResonantPhi0("phi0_sup_scan: Phi0 vanishes at m = " + std::to_string(m));
    cxd base = double(m) / lambda;
    cxd pw = 1.0;
    for (int r = 0; r < k; ++r) {
      double v = std::abs(pw) / std::abs(phi);
      if (v > scan.sup_value) {
        scan.sup_value = v;
        scan.worst_m = m;
        scan.worst_r = r;
      }
      pw *= base;
    }
  };

  {
    // m = 0: Phi0 limits to the eps_1 derivative of the constant-term polynomial
    auto c = constant_term_poly(P, lambda, PrecisionPolicy{});
    cxd d{};
    cxd pw = 1.0;
    for (int j = 1; j <= k; ++j) {
      d += double(j) * c[j] * pw * eps1;
      pw *= eps1;
    }
    // d above accumulated j*c_j*eps1^j; divide once by eps1 (guard eps1 = 0)
    cxd phi = (eps1 == cxd{}) ? c[1] : d / eps1;
    consider(phi, 0);
  }
  for (int m = 1; m <= m_max; ++m) consider(phi0(P, prefix, lambda, m), m);
  return scan;
}

double majorant_radius(double L) {
  if (L < 0) throw std::invalid_argument("majorant_radius: L >= 0 required");
  return 1.0 / ((1 + 2 * L) * (1 + 2 * L));
}

}  // namespace hsp
