#pragma once

#include <vector>

#include "hsp/pencil.hpp"
#include "hsp/series.hpp"

namespace hsp {

/// Expansion of one curve branch at infinity in the chart y = 1/z:
/// w(z) = y * N(y) with yN(y) = sum_{i>=1} eps_i y^i and eps_1 = xi_j.
struct BranchSeries {
  int j = 0;       // branch label, 1-based, paired with alpha_j
  cxd xi{};        // leading coefficient, xi_j = 1/alpha_j
  TruncatedSeries series;  // coefficients of yN(y), origin CurveBranch
};

struct BranchesAt {
  std::vector<cxd> w;      // finite sheet values at z
  bool sheet_drop = false; // Q_k(z) ~ 0: fewer than k finite sheets
};

struct ContinuationSample {
  cxd z;
  cxd w;
};

struct ContinuationResult {
  std::vector<ContinuationSample> samples;
  bool monodromy = false;  // closed path returned on a different sheet
};

/// The plane algebraic curve sum_i Q_i(z) w^i = 0 associated with a pencil.
class PlaneCurve {
 public:
  explicit PlaneCurve(std::vector<ComplexPolynomial> Q);
  explicit PlaneCurve(const Pencil& pencil) : PlaneCurve(pencil.Q()) {}

  int order() const { return k_; }
  const ComplexPolynomial& Q(int i) const { return Q_[i]; }
  const std::vector<ComplexPolynomial>& Q() const { return Q_; }
  cxd a(int i, int j) const { return Q_[i].coeff(j); }

  /// P_i(y) = z^{-i} Q_i(z): coefficient of y^t is a_{i,i-t}.
  std::vector<cxd> P(int i) const;

  double coeff_scale() const;

 private:
  int k_;
  std::vector<ComplexPolynomial> Q_;
};

/// Fiber of the covering over z: the multiset of w with sum Q_i(z) w^i = 0.
BranchesAt branches_at(const PlaneCurve& curve, cxd z, const PrecisionPolicy& policy = {});

/// Roots of discriminant_in_w lying where Q_k != 0, deduplicated.
std::vector<cxd> branch_points(const PlaneCurve& curve, const PrecisionPolicy& policy = {});

/// Roots of the reciprocal characteristic equation, ordered so that
/// xi_roots()[j-1] * alphas[j-1] == 1 for the alphas of validate_general_type.
std::vector<cxd> xi_roots(const PlaneCurve& curve, const PrecisionPolicy& policy = {});

/// Branch expansion at infinity to truncation order M by Newton iteration on
/// truncated series, starting from eps_1 = xi_j. Throws MultipleXi when xi_j
/// is not a simple root of the reciprocal characteristic equation.
BranchSeries branch_series_at_infinity(const PlaneCurve& curve, int j, int M,
                                       const PrecisionPolicy& policy = {});

/// Analytic continuation of the branch through (path.front(), w0) along the
/// polyline, nearest-root tracking with adaptive step halving (safety ratio
/// 0.5). Throws BranchCollision when the path comes within `clearance` of a
/// branch point (clearance < 0 selects 1e-3 x curve scale).
ContinuationResult continue_branch(const PlaneCurve& curve, const std::vector<cxd>& path,
                                   cxd w0, const PrecisionPolicy& policy = {},
                                   double clearance = -1);

}  // namespace hsp
