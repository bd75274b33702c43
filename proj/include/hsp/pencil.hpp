#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hsp/poly.hpp"

namespace hsp {

/// Homogenized spectral pencil T_lambda = sum_i Q_i(z) lambda^{k-i} d^i/dz^i
/// with deg Q_i <= i (Bochner constraint).
class Pencil {
 public:
  explicit Pencil(std::vector<ComplexPolynomial> Q);

  int order() const { return k_; }
  const ComplexPolynomial& Q(int i) const { return Q_[i]; }
  const std::vector<ComplexPolynomial>& Q() const { return Q_; }
  /// a_{i,j}: coefficient of z^j in Q_i.
  cxd a(int i, int j) const { return Q_[i].coeff(j); }

  /// Characteristic polynomial a_{k,k} + a_{k-1,k-1} t + ... + a_{0,0} t^k.
  ComplexPolynomial characteristic() const;
  /// Reciprocal characteristic polynomial a_{k,k} xi^k + ... + a_{0,0}.
  ComplexPolynomial reciprocal_characteristic() const;

  double coeff_scale() const;

 private:
  int k_;
  std::vector<ComplexPolynomial> Q_;
};

struct GeneralTypeReport {
  bool leading_ok = false;    // a_{k,k} != 0
  bool constant_ok = false;   // a_{0,0} != 0
  bool roots_distinct = false;
  bool no_collinear_pair = false;
  std::vector<cxd> alphas;

  bool general_type() const {
    return leading_ok && constant_ok && roots_distinct && no_collinear_pair;
  }
};

/// Checks the general-type conditions: nonzero leading/constant diagonal
/// coefficients, distinct characteristic roots, and no two roots collinear
/// with the origin (arg alpha_r == arg alpha_s mod pi within tol).
GeneralTypeReport validate_general_type(const Pencil& pencil, double tol = 1e-9);

struct SpectralEigenvalues {
  /// (lambda_{n,j}, family index j) pairs, one per family.
  std::vector<std::pair<cxd, int>> values;
  std::vector<std::string> warnings;  // label-ambiguity notes

  cxd lambda_for(int j) const {
    for (const auto& [l, fam] : values)
      if (fam == j) return l;
    throw std::out_of_range("no eigenvalue for family " + std::to_string(j));
  }
};

/// The k solutions of sum_i n(n-1)...(n-i+1) a_{i,i} lambda^{k-i} = 0,
/// labeled by greedy relative-nearest matching against alpha_j * n.
SpectralEigenvalues spectral_eigenvalues(const Pencil& pencil, int n,
                                         const PrecisionPolicy& policy = {},
                                         double tie_tol = 1e-9);

struct EigenSolution {
  int n = 0;
  int j = 0;
  cxd lambda{};
  ComplexPolynomial p;       // monic, degree exactly n
  std::vector<cxd> roots;
  double residual = 0;       // relative sup norm of T_lambda p
};

/// sum_i Q_i lambda^{k-i} p^{(i)}. Never raises degree.
ComplexPolynomial operator_apply(const Pencil& pencil, cxd lambda,
                                 const ComplexPolynomial& p);

/// Monic degree-n kernel element of T_lambda via triangular back-substitution
/// on the monomial basis, with precision escalation until the relative
/// residual meets policy.residual_target. Throws ResonantDegree when a
/// diagonal entry for a lower degree vanishes, PrecisionExhausted on failure.
/// Roots are not computed here; use eigen_solution for the full record.
ComplexPolynomial eigenpolynomial(const Pencil& pencil, int n, cxd lambda,
                                  const PrecisionPolicy& policy = {},
                                  double* residual_out = nullptr);

/// eigenpolynomial + roots + residual bundled as an EigenSolution. The
/// coefficients and roots are produced inside one precision-escalation loop so
/// that the root finder sees the kernel coefficients at full working precision
/// (for moderate degrees they span many orders of magnitude, and rounding them
/// to hardware doubles can manufacture spurious far roots).
EigenSolution eigen_solution(const Pencil& pencil, int n, int j, cxd lambda,
                             const PrecisionPolicy& policy = {});

namespace detail {

// Upper-triangular back-substitution for the monic degree-n kernel element of
// T_lambda on the monomial basis, in a fixed scalar type; the eigenvalue is
// Newton-polished on the degree-n spectral equation at working precision
// first. Returns false when the relative row residual misses residual_target.
template <class C>
bool triangular_solve(const Pencil& pencil, int n, cxd lambda0, double residual_target,
                      std::vector<C>* coeffs_out, double* residual_out);

}  // namespace detail
}  // namespace hsp
