#include "hsp/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsp {

Pencil::Pencil(std::vector<ComplexPolynomial> Q) : Q_(std::move(Q)) {
  if (Q_.size() < 2) throw std::invalid_argument("pencil: need order k >= 1");
  k_ = static_cast<int>(Q_.size()) - 1;
  for (int i = 0; i <= k_; ++i)
    if (!Q_[i].is_zero() && Q_[i].degree() > i)
      throw std::invalid_argument("pencil: deg Q_" + std::to_string(i) +
                                  " exceeds " + std::to_string(i));
}

ComplexPolynomial Pencil::characteristic() const {
  std::vector<cxd> c(k_ + 1);
  for (int i = 0; i <= k_; ++i) c[i] = a(k_ - i, k_ - i);
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial Pencil::reciprocal_characteristic() const {
  std::vector<cxd> c(k_ + 1);
  for (int i = 0; i <= k_; ++i) c[i] = a(i, i);
  return ComplexPolynomial(std::move(c));
}

double Pencil::coeff_scale() const {
  double s = 0;
  for (const auto& q : Q_) s = std::max(s, q.coeff_scale());
  return s;
}

GeneralTypeReport validate_general_type(const Pencil& pencil, double tol) {
  GeneralTypeReport rep;
  const int k = pencil.order();
  rep.leading_ok = std::abs(pencil.a(k, k)) > 0;
  rep.constant_ok = std::abs(pencil.a(0, 0)) > 0;
  if (!rep.constant_ok) {
    // characteristic equation degenerates below degree k
    rep.roots_distinct = false;
    rep.no_collinear_pair = false;
    return rep;
  }
  rep.alphas = roots(pencil.characteristic());
  rep.roots_distinct = true;
  rep.no_collinear_pair = true;
  for (size_t r = 0; r < rep.alphas.size(); ++r) {
    for (size_t s = r + 1; s < rep.alphas.size(); ++s) {
      cxd ar = rep.alphas[r], as = rep.alphas[s];
      double sep = std::abs(ar - as);
      if (sep <= tol * std::max(std::abs(ar), std::abs(as))) rep.roots_distinct = false;
      // arg a_r == arg a_s (mod pi) within tol, i.e. collinear through 0
      if (std::abs(std::imag(ar * std::conj(as))) <= tol * std::abs(ar) * std::abs(as))
        rep.no_collinear_pair = false;
    }
  }
  if (rep.alphas.empty()) rep.no_collinear_pair = false;
  for (const auto& al : rep.alphas)
    if (std::abs(al) <= tol) rep.no_collinear_pair = false;
  return rep;
}

namespace {

double falling(int n, int i) {
  double f = 1;
  for (int t = 0; t < i; ++t) f *= double(n - t);
  return f;
}

}  // namespace

SpectralEigenvalues spectral_eigenvalues(const Pencil& pencil, int n,
                                         const PrecisionPolicy& policy, double tie_tol) {
  const int k = pencil.order();
  if (n < 1) throw std::invalid_argument("spectral_eigenvalues: n >= 1 required");
  std::vector<cxd> c(k + 1);
  for (int i = 0; i <= k; ++i) c[k - i] = falling(n, i) * pencil.a(i, i);
  auto lambdas = roots(ComplexPolynomial(std::move(c)), policy);

  auto rep = validate_general_type(pencil);
  if (!rep.general_type())
    throw std::invalid_argument("spectral_eigenvalues: pencil is not of general type");
  const auto& alphas = rep.alphas;

  // greedy matching of eigenvalues to targets alpha_j * n by relative distance
  SpectralEigenvalues out;
  std::vector<bool> used_l(lambdas.size(), false), used_a(alphas.size(), false);
  for (size_t step = 0; step < lambdas.size(); ++step) {
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    size_t bl = 0, ba = 0;
    for (size_t l = 0; l < lambdas.size(); ++l) {
      if (used_l[l]) continue;
      for (size_t aidx = 0; aidx < alphas.size(); ++aidx) {
        if (used_a[aidx]) continue;
        double d = std::abs(lambdas[l] - double(n) * alphas[aidx]) /
                   (double(n) * std::abs(alphas[aidx]));
        if (d < best) {
          second = best;
          best = d;
          bl = l;
          ba = aidx;
        } else if (d < second) {
          second = d;
        }
      }
    }
    if (second - best <= tie_tol && second < std::numeric_limits<double>::infinity()) {
      // equidistant pair: resolved by the smallest family index (alphas order)
      for (size_t aidx = 0; aidx < alphas.size(); ++aidx) {
        if (used_a[aidx]) continue;
        double d = std::abs(lambdas[bl] - double(n) * alphas[aidx]) /
                   (double(n) * std::abs(alphas[aidx]));
        if (d - best <= tie_tol) {
          ba = aidx;
          break;
        }
      }
      out.warnings.push_back("label ambiguity at n=" + std::to_string(n) +
                             ", family " + std::to_string(ba + 1));
    }
    used_l[bl] = true;
    used_a[ba] = true;
    out.values.emplace_back(lambdas[bl], static_cast<int>(ba) + 1);
  }
  std::sort(out.values.begin(), out.values.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

ComplexPolynomial operator_apply(const Pencil& pencil, cxd lambda,
                                 const ComplexPolynomial& p) {
  const int k = pencil.order();
  ComplexPolynomial acc;
  ComplexPolynomial der = p;
  cxd lam_pow = 1.0;
  std::vector<cxd> lam_powers(k + 1);
  for (int i = 0; i <= k; ++i) {
    lam_powers[i] = lam_pow;
    lam_pow *= lambda;
  }
  for (int i = 0; i <= k; ++i) {
    if (!pencil.Q(i).is_zero() && !der.is_zero())
      acc = acc + pencil.Q(i) * der * lam_powers[k - i];
    der = der.derivative();
  }
  return acc;
}

namespace detail {

template <class C>
bool triangular_solve(const Pencil& pencil, int n, cxd lambda0, double residual_target,
                      std::vector<C>* coeffs_out, double* residual_out) {
  const int k = pencil.order();
  C lambda = from_cxd<C>(lambda0);
  {
    // polish the eigenvalue on the degree-n spectral equation at working
    // precision so the back-substitution residual is not floored by the
    // double rounding of lambda
    std::vector<C> sp(k + 1), spd(k);
    for (int i = 0; i <= k; ++i) sp[k - i] = C(falling(n, i)) * from_cxd<C>(pencil.a(i, i));
    for (int m = 1; m <= k; ++m) spd[m - 1] = double(m) * sp[m];
    for (int it = 0; it < 4; ++it) {
      C dv = horner(spd, lambda);
      if (dbl(abs(dv)) == 0.0) break;
      lambda -= horner(sp, lambda) / dv;
    }
  }
  std::vector<C> lam_pow(k + 1);
  lam_pow[0] = C(1);
  for (int i = 1; i <= k; ++i) lam_pow[i] = lam_pow[i - 1] * lambda;

  // entry(r, m) = sum_i lambda^{k-i} m(m-1)...(m-i+1) a_{i, r-m+i}
  auto entry = [&](int r, int m) {
    C acc{};
    for (int i = 0; i <= std::min(k, m); ++i) {
      int j = r - m + i;
      if (j < 0 || j > i) continue;
      cxd aij = pencil.a(i, j);
      if (aij == cxd{}) continue;
      acc += lam_pow[k - i] * C(falling(m, i)) * from_cxd<C>(aij);
    }
    return acc;
  };

  double mat_scale = 0;
  std::vector<C> diag(n + 1);
  for (int m = 0; m <= n; ++m) {
    diag[m] = entry(m, m);
    mat_scale = std::max(mat_scale, dbl(abs(diag[m])));
  }
  for (int m = 0; m < n; ++m)
    if (dbl(abs(diag[m])) <= 1e-12 * std::max(mat_scale, 1.0))
      throw ResonantDegree("eigenpolynomial: eigenvalue resonates with degree " +
                           std::to_string(m));

  std::vector<C> c(n + 1, C{});
  c[n] = C(1);
  for (int r = n - 1; r >= 0; --r) {
    C rhs{};
    for (int m = r + 1; m <= n; ++m) {
      if (m - r > k) continue;  // band: entry vanishes when r < m-k
      rhs += entry(r, m) * c[m];
    }
    c[r] = -rhs / diag[r];
  }

  // residual check: apply the full triangular matrix
  double cmax = 0;
  for (const auto& cm : c) cmax = std::max(cmax, dbl(abs(cm)));
  double worst = 0;
  for (int r = 0; r <= n; ++r) {
    C acc{};
    for (int m = r; m <= std::min(n, r + k); ++m) acc += entry(r, m) * c[m];
    worst = std::max(worst, dbl(abs(acc)));
  }
  double rel = worst / (std::max(mat_scale, 1e-300) * std::max(cmax, 1e-300));
  *coeffs_out = std::move(c);
  *residual_out = rel;
  return rel <= residual_target;
}

template bool triangular_solve<cxd>(const Pencil&, int, cxd, double, std::vector<cxd>*,
                                    double*);
template bool triangular_solve<cx32>(const Pencil&, int, cxd, double,
                                     std::vector<cx32>*, double*);
template bool triangular_solve<cx64>(const Pencil&, int, cxd, double,
                                     std::vector<cx64>*, double*);
template bool triangular_solve<cx128>(const Pencil&, int, cxd, double,
                                      std::vector<cx128>*, double*);
template bool triangular_solve<cx256>(const Pencil&, int, cxd, double,
                                      std::vector<cx256>*, double*);

}  // namespace detail

ComplexPolynomial eigenpolynomial(const Pencil& pencil, int n, cxd lambda,
                                  const PrecisionPolicy& policy, double* residual_out) {
  if (n < 1) throw std::invalid_argument("eigenpolynomial: n >= 1 required");
  std::vector<cxd> coeffs;
  double residual = 0;
  // A small relative residual alone does not certify the coefficients: when
  // they span many orders of magnitude the back-substitution can leave the
  // small (high-degree) coefficients relatively wrong while the residual,
  // normalized by the largest coefficient, still looks tiny.  Accept only when
  // two consecutive precision tiers agree coefficient-wise.
  std::vector<cxd> prev;
  bool have_prev = false;
  bool ok = detail::precision_ladder(policy, [&](auto tag) {
    using C = typename decltype(tag)::type;
    std::vector<C> native;
    bool resid_ok = detail::triangular_solve<C>(pencil, n, lambda,
                                                policy.residual_target, &native,
                                                &residual);
    coeffs.resize(native.size());
    for (size_t m = 0; m < native.size(); ++m) coeffs[m] = detail::round_cxd(native[m]);
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
  if (!ok) throw PrecisionExhausted("eigenpolynomial: residual bound unmet");
  if (residual_out) *residual_out = residual;
  return ComplexPolynomial(std::move(coeffs));
}

EigenSolution eigen_solution(const Pencil& pencil, int n, int j, cxd lambda,
                             const PrecisionPolicy& policy) {
  if (n < 1) throw std::invalid_argument("eigen_solution: n >= 1 required");
  EigenSolution sol;
  sol.n = n;
  sol.j = j;
  sol.lambda = lambda;
  // One ladder for both coefficients and roots: the root finder must consume
  // the kernel coefficients at working precision, and a tier is accepted only
  // when both agree with the previous tier.
  std::vector<cxd> coeffs, prev_coeffs, rts, prev_roots;
  double residual = 0;
  bool have_prev = false;
  bool ok = detail::precision_ladder(policy, [&](auto tag) {
    using C = typename decltype(tag)::type;
    std::vector<C> native;
    bool resid_ok = detail::triangular_solve<C>(pencil, n, lambda,
                                                policy.residual_target, &native,
                                                &residual);
    coeffs.resize(native.size());
    for (size_t m = 0; m < native.size(); ++m) coeffs[m] = detail::round_cxd(native[m]);
    bool coeffs_stable = have_prev && prev_coeffs.size() == coeffs.size();
    if (coeffs_stable) {
      for (size_t m = 0; m < coeffs.size() && coeffs_stable; ++m)
        if (std::abs(coeffs[m] - prev_coeffs[m]) >
            policy.residual_target * std::max(std::abs(coeffs[m]), 1e-280))
          coeffs_stable = false;
    }
    prev_coeffs = coeffs;
    have_prev = true;
    // Root finding only starts once the coefficients have settled: roots of a
    // not-yet-converged coefficient vector are wasted work and poison the warm
    // start. Acceptance needs two root runs that agree.
    if (!coeffs_stable || !resid_ok) {
      prev_roots.clear();
      return false;
    }
    rts = prev_roots;  // warm start when sizes match
    bool root_ok = detail::aberth_roots<C>(native, policy.residual_target, &rts);
    bool roots_stable = prev_roots.size() == rts.size();
    for (size_t i = 0; i < rts.size() && roots_stable; ++i)
      if (std::abs(rts[i] - prev_roots[i]) > 1e-8 * (1.0 + std::abs(rts[i])))
        roots_stable = false;
    prev_roots = rts;
    return root_ok && roots_stable;
  });
  if (!ok) throw PrecisionExhausted("eigen_solution: residual bound unmet");
  sol.residual = residual;
  sol.p = ComplexPolynomial(std::move(coeffs));
  sol.roots = std::move(rts);
  return sol;
}

}  // namespace hsp
