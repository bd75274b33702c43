#pragma once

#include <cassert>
#include <complex>
#include <vector>

#include "hsp/scalar.hpp"

namespace hsp {

/// Dense univariate polynomial over complex scalars.
///
/// Coefficient index equals the power of the variable. The zero polynomial
/// is the empty coefficient sequence; its degree is undefined and operations
/// requiring a degree reject it.
class ComplexPolynomial {
 public:
  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<cxd> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
  }
  ComplexPolynomial(std::initializer_list<cxd> coeffs)
      : ComplexPolynomial(std::vector<cxd>(coeffs)) {}

  static ComplexPolynomial zero() { return {}; }
  static ComplexPolynomial constant(cxd c) { return ComplexPolynomial({c}); }
  static ComplexPolynomial from_roots(const std::vector<cxd>& roots);

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const {
    assert(!coeffs_.empty() && "degree of the zero polynomial is undefined");
    return static_cast<int>(coeffs_.size()) - 1;
  }
  const std::vector<cxd>& coeffs() const { return coeffs_; }
  cxd coeff(int m) const {
    return (m >= 0 && m < static_cast<int>(coeffs_.size())) ? coeffs_[m] : cxd{};
  }
  cxd leading() const { return coeffs_.empty() ? cxd{} : coeffs_.back(); }

  cxd operator()(cxd z) const;

  ComplexPolynomial derivative() const;

  ComplexPolynomial operator+(const ComplexPolynomial& o) const;
  ComplexPolynomial operator-(const ComplexPolynomial& o) const;
  ComplexPolynomial operator*(const ComplexPolynomial& o) const;
  ComplexPolynomial operator*(cxd s) const;

  /// Largest coefficient magnitude (0 for the zero polynomial).
  double coeff_scale() const;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == cxd{}) coeffs_.pop_back();
  }
  std::vector<cxd> coeffs_;
};

/// All deg(p) roots with multiplicity.
///
/// Aberth-Ehrlich simultaneous iteration seeded on a circle of Fujiwara-bound
/// radius. Precision escalates (doubling decimal digits up to
/// policy.max_digits) until every root r satisfies
///   |p(r)| <= residual_target * max|c_m| * max(1,|r|)^deg.
/// Throws PrecisionExhausted when the bound still fails at max_digits.
std::vector<cxd> roots(const ComplexPolynomial& p, const PrecisionPolicy& policy = {});

/// Resultant in w of P(z,w) = sum_i Q[i](z) w^i and dP/dw, as a polynomial in
/// z (Sylvester determinant convention, defined up to a nonzero constant
/// factor; only the zero set is contractual). Returns the zero polynomial when
/// P(z, .) has a repeated root for every z. Throws DegenerateCurve when P is
/// identically zero.
ComplexPolynomial discriminant_in_w(const std::vector<ComplexPolynomial>& curve_coeffs,
                                    const PrecisionPolicy& policy = {});

namespace detail {

template <class C>
C horner(const std::vector<C>& coeffs, const C& z) {
  C acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// One full Aberth-Ehrlich run in a fixed scalar type on coefficients given at
// that type's native precision. Returns false when the residual bound is not
// met after the iteration budget. When *out already holds deg(p) values they
// seed the iteration (warm start from a lower-precision run).
template <class C>
bool aberth_roots(const std::vector<C>& coeffs, double residual_target,
                  std::vector<cxd>* out);

}  // namespace detail
}  // namespace hsp
