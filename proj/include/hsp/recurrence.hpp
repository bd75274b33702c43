#pragma once

#include <vector>

#include "hsp/pencil.hpp"
#include "hsp/series.hpp"

namespace hsp {

/// Result of scanning |Phi0(eps1, 1/lambda, m/lambda)^{-1} (m/lambda)^r| over
/// 0 <= m <= m_max, 0 <= r <= k-1. A finite, lambda-stable sup across an
/// eigenvalue family is the convergence hypothesis for the majorant bound.
struct Phi0Scan {
  cxd lambda{};
  cxd eps1{};
  int m_max = 0;
  double sup_value = 0;
  int worst_m = 0;
  int worst_r = 0;
};

/// Taylor coefficients at y = 0 of p'(z)/(lambda p(z)) under z = 1/y, via
/// series division of the reversed-coefficient polynomials. coeffs[0] == 0
/// and eps(1) == deg(p)/lambda exactly. Requires p monic of degree >= 1.
TruncatedSeries log_derivative_series(const ComplexPolynomial& p, cxd lambda, int M);

/// log_derivative_series of the degree-n eigenpolynomial of T_lambda, with the
/// kernel coefficients and the series division kept at one working precision
/// end to end. Needed because the reversed-coefficient division cancels
/// catastrophically once the kernel coefficients span many orders of
/// magnitude, so double-rounded coefficients cannot determine the series.
/// Escalates until consecutive tiers agree to policy.residual_target relative
/// to the largest coefficient.
TruncatedSeries eigen_log_derivative(const Pencil& P, int n, cxd lambda, int M,
                                     const PrecisionPolicy& policy = {});

/// The transformed pencil equation applied to the candidate series:
///   r_0 = 1,  r_{i+1} = lambda (yN) r_i - y^2 d/dy r_i,
///   output = sum_i P_i(y) y^{-i} lambda^{-i} r_i, truncated to N.order().
/// The y^{-i} cancellation is exact because each r_i has y-order >= i;
/// OrderViolation signals an internal breach of that filtration.
TruncatedSeries pencil_series_residual(const Pencil& P, cxd lambda,
                                       const TruncatedSeries& N);

/// The k roots of the degree-k polynomial that the y^0 residual coefficient
/// forms in eps_1 (all later eps frozen at 0), reconstructed by interpolation
/// at k+1 circle nodes. Requires |lambda| >= lambda_threshold (default
/// 10 k max|a_ij|). Throws RootDeficient when the interpolated polynomial
/// drops below degree k.
std::vector<cxd> epsilon1_candidates(const Pencil& P, cxd lambda,
                                     double lambda_threshold = -1,
                                     const PrecisionPolicy& policy = {});

/// Linear coefficient of eps_{m+1} in the y^m residual coefficient, extracted
/// by evaluating at eps_{m+1} = 0 and 1 and differencing (the dependence is
/// affine). eps_prefix supplies eps_1 ... eps_m.
cxd phi0(const Pencil& P, const TruncatedSeries& eps_prefix, cxd lambda, int m);

/// Solves eps_{m+1} = -B/Phi0 for m = 1 ... M-1 starting from eps1 (which
/// must satisfy the constant-term equation). The result zeroes the residual
/// through order M-1 to 1e-10 relative, escalating precision first. Throws
/// ResonantPhi0 when some Phi0 vanishes to 1e-12 x coefficient scale.
TruncatedSeries solve_recurrence(const Pencil& P, cxd lambda, cxd eps1, int M,
                                 const PrecisionPolicy& policy = {});

/// Sup scan of the convergence quantity; m = 0 contributes the eps_1
/// derivative of the constant-term polynomial (the limit of Phi0 as
/// m/lambda -> 0).
Phi0Scan phi0_sup_scan(const Pencil& P, cxd lambda, cxd eps1, int m_max);

/// Convergence radius lower bound 1/(1+2L)^2 from the majorant argument.
double majorant_radius(double L);

}  // namespace hsp
