#pragma once

#include <string>
#include <vector>

#include "hsp/scalar.hpp"

namespace hsp {

/// Truncated power series in y at infinity, L(y) = yN(y) = sum eps_i y^i.
/// coeffs[i] is the coefficient of y^i; length is M+1 and coeffs[0] == 0 for
/// series of log-derivative shape.
struct TruncatedSeries {
  enum class Origin { LogDerivative, Recurrence, CurveBranch };

  std::vector<cxd> coeffs;
  Origin origin = Origin::Recurrence;
  cxd lambda{};

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  /// eps_i (the y^i coefficient), i >= 1.
  cxd eps(int i) const {
    return (i >= 0 && i < static_cast<int>(coeffs.size())) ? coeffs[i] : cxd{};
  }
};

const char* origin_name(TruncatedSeries::Origin o);

namespace detail {

// Plain truncated-series arithmetic, exact modulo y^{len}.
template <class C>
using series = std::vector<C>;

template <class C>
series<C> series_mul(const series<C>& a, const series<C>& b, int len) {
  series<C> out(len, C{});
  for (int i = 0; i < static_cast<int>(a.size()) && i < len; ++i) {
    if (dbl(abs(a[i])) == 0.0) continue;
    int jmax = std::min<int>(b.size(), len - i);
    for (int j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

template <class C>
void series_add_scaled(series<C>& acc, const series<C>& a, const C& s) {
  if (acc.size() < a.size()) acc.resize(a.size(), C{});
  for (size_t i = 0; i < a.size() && i < acc.size(); ++i) acc[i] += s * a[i];
}

// coefficientwise a / b where b has a unit (nonzero) constant term
template <class C>
series<C> series_div(const series<C>& a, const series<C>& b, int len) {
  series<C> out(len, C{});
  C b0 = b.empty() ? C{} : b[0];
  for (int m = 0; m < len; ++m) {
    C acc = m < static_cast<int>(a.size()) ? a[m] : C{};
    int jmax = std::min<int>(b.size() - 1, m);
    for (int j = 1; j <= jmax; ++j) acc -= b[j] * out[m - j];
    out[m] = acc / b0;
  }
  return out;
}

template <class C>
series<C> series_shift_up(const series<C>& a, int s, int len) {
  series<C> out(len, C{});
  for (int i = 0; i + s < len && i < static_cast<int>(a.size()); ++i) out[i + s] = a[i];
  return out;
}

// d/dy
template <class C>
series<C> series_deriv(const series<C>& a) {
  if (a.size() <= 1) return series<C>{};
  series<C> out(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) out[i - 1] = double(i) * a[i];
  return out;
}

template <class C>
double series_scale(const series<C>& a) {
  double s = 0;
  for (const auto& c : a) s = std::max(s, dbl(abs(c)));
  return s;
}

}  // namespace detail
}  // namespace hsp
