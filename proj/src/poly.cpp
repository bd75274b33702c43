#include "hsp/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hsp {

ComplexPolynomial ComplexPolynomial::from_roots(const std::vector<cxd>& roots) {
  std::vector<cxd> c{1.0};
  for (cxd r : roots) {
    c.push_back(0.0);
    for (int m = static_cast<int>(c.size()) - 1; m > 0; --m) c[m] = c[m - 1] - r * c[m];
    c[0] *= -r;
  }
  return ComplexPolynomial(std::move(c));
}

cxd ComplexPolynomial::operator()(cxd z) const { return detail::horner(coeffs_, z); }

ComplexPolynomial ComplexPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return zero();
  std::vector<cxd> d(coeffs_.size() - 1);
  for (size_t m = 1; m < coeffs_.size(); ++m) d[m - 1] = double(m) * coeffs_[m];
  return ComplexPolynomial(std::move(d));
}

ComplexPolynomial ComplexPolynomial::operator+(const ComplexPolynomial& o) const {
  std::vector<cxd> c(std::max(coeffs_.size(), o.coeffs_.size()));
  for (size_t m = 0; m < c.size(); ++m) c[m] = coeff(int(m)) + o.coeff(int(m));
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::operator-(const ComplexPolynomial& o) const {
  std::vector<cxd> c(std::max(coeffs_.size(), o.coeffs_.size()));
  for (size_t m = 0; m < c.size(); ++m) c[m] = coeff(int(m)) - o.coeff(int(m));
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::operator*(const ComplexPolynomial& o) const {
  if (is_zero() || o.is_zero()) return zero();
  std::vector<cxd> c(coeffs_.size() + o.coeffs_.size() - 1);
  for (size_t a = 0; a < coeffs_.size(); ++a)
    for (size_t b = 0; b < o.coeffs_.size(); ++b) c[a + b] += coeffs_[a] * o.coeffs_[b];
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::operator*(cxd s) const {
  std::vector<cxd> c = coeffs_;
  for (auto& x : c) x *= s;
  return ComplexPolynomial(std::move(c));
}

double ComplexPolynomial::coeff_scale() const {
  double s = 0;
  for (const auto& c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

namespace detail {

template <class C>
bool aberth_roots(const std::vector<C>& c, double residual_target,
                  std::vector<cxd>* out) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<C> d(n);
  for (int m = 1; m <= n; ++m) d[m - 1] = double(m) * c[m];

  double maxc = 0;
  for (const auto& cm : c) maxc = std::max(maxc, dbl(abs(cm)));

  // Fujiwara bound: all roots lie in |z| <= 2 max_k |a_{n-k}/a_n|^{1/k}.
  double lead = dbl(abs(c[n]));
  double fujiwara = 0;
  for (int m = 0; m < n; ++m) {
    double t = dbl(abs(c[m])) / lead;
    if (m == 0) t *= 0.5;
    fujiwara = std::max(fujiwara, 2.0 * std::pow(t, 1.0 / (n - m)));
  }
  double r0 = std::max(fujiwara, 1e-30);

  std::vector<C> z(n);
  if (out->size() == size_t(n)) {
    // warm start from a lower-precision run
    for (int i = 0; i < n; ++i) z[i] = from_cxd<C>((*out)[i]);
  } else {
    // Newton-polygon start (Bini): initial radii from the upper convex hull of
    // (m, log|c_m|); each hull segment [m1,m2] seeds m2-m1 roots on the ring
    // of radius (|c_m1|/|c_m2|)^{1/(m2-m1)}. Far better than one big circle
    // when the coefficients span many orders of magnitude.
    std::vector<int> fin;
    std::vector<double> lg(n + 1);
    for (int m = 0; m <= n; ++m) {
      double a = dbl(abs(c[m]));
      lg[m] = std::log(std::max(a, 1e-300));
      if (a > 0) fin.push_back(m);
    }
    std::vector<int> hull;
    for (int m : fin) {
      while (hull.size() >= 2) {
        int h0 = hull[hull.size() - 2], h1 = hull.back();
        if ((lg[h1] - lg[h0]) * (m - h1) <= (lg[m] - lg[h1]) * (h1 - h0))
          hull.pop_back();
        else
          break;
      }
      hull.push_back(m);
    }
    int idx = 0;
    // roots "at zero" for a leading run of vanishing low-order coefficients
    for (int i = 0; i < hull.front(); ++i) {
      double th = 2 * std::numbers::pi * i / std::max(1, hull.front()) + 0.31;
      z[idx++] = from_cxd<C>(std::polar(1e-6 * (1 + r0), th));
    }
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
      int m1 = hull[s], m2 = hull[s + 1];
      double r = std::exp((lg[m1] - lg[m2]) / double(m2 - m1));
      r = std::min(std::max(r, 1e-30), r0);
      for (int i = 0; i < m2 - m1; ++i) {
        double th = 2 * std::numbers::pi * i / (m2 - m1) + 0.79 + 0.37 * double(s);
        z[idx++] = from_cxd<C>(std::polar(r, th));
      }
    }
  }

  const double eps = std::pow(10.0, 2.0 - scalar_traits<C>::digits10);
  const int max_iter = 60 + 12 * n;
  // Converged roots are frozen (they still repel the others); typically most
  // roots settle in a few sweeps while a cluster keeps iterating.
  std::vector<char> done(n, 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    double worst = 0;
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      all_done = false;
      C pv = horner(c, z[i]);
      C dv = horner(d, z[i]);
      if (dbl(abs(dv)) == 0.0) {
        z[i] += from_cxd<C>(cxd(eps * (1 + r0), eps * (1 + r0)));
        worst = 1;
        continue;
      }
      C w = pv / dv;
      C s{};
      for (int j = 0; j < n; ++j)
        if (j != i) s += C(1) / (z[i] - z[j]);
      C denom = C(1) - w * s;
      C corr = (dbl(abs(denom)) == 0.0) ? w : w / denom;
      z[i] -= corr;
      double rel = dbl(abs(corr)) / (1 + dbl(abs(z[i])));
      // Attainable accuracy is limited by roundoff in evaluating p: the
      // absolute-value Horner sum can dwarf p(z) when coefficients span many
      // orders of magnitude, so cap the target at that per-root floor.
      double az = dbl(abs(z[i]));
      double pabs = 0;
      for (int m = n; m >= 0; --m) pabs = pabs * az + dbl(abs(c[m]));
      double floor_i = std::pow(10.0, -double(scalar_traits<C>::digits10)) * pabs /
                       std::max(dbl(abs(dv)), 1e-300) / (1 + az);
      if (rel < std::max(eps, 4 * floor_i)) done[i] = 1;
      worst = std::max(worst, rel);
    }
    if (all_done || worst < eps) break;
  }

  bool ok = true;
  for (int i = 0; i < n; ++i) {
    double bound =
        residual_target * maxc * std::pow(std::max(1.0, dbl(abs(z[i]))), double(n));
    if (dbl(abs(horner(c, z[i]))) > bound) ok = false;
  }
  out->resize(n);
  for (int i = 0; i < n; ++i) (*out)[i] = round_cxd(z[i]);
  return ok;
}

template bool aberth_roots<cxd>(const std::vector<cxd>&, double, std::vector<cxd>*);
template bool aberth_roots<cx32>(const std::vector<cx32>&, double, std::vector<cxd>*);
template bool aberth_roots<cx64>(const std::vector<cx64>&, double, std::vector<cxd>*);
template bool aberth_roots<cx128>(const std::vector<cx128>&, double, std::vector<cxd>*);
template bool aberth_roots<cx256>(const std::vector<cx256>&, double, std::vector<cxd>*);

namespace {

// Determinant by Gaussian elimination with partial pivoting.
template <class C>
C lu_determinant(std::vector<std::vector<C>> a) {
  const int n = static_cast<int>(a.size());
  C det = C(1);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = dbl(abs(a[col][col]));
    for (int r = col + 1; r < n; ++r) {
      double v = dbl(abs(a[r][col]));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return C{};
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (int r = col + 1; r < n; ++r) {
      C f = a[r][col] / a[col][col];
      for (int cc = col; cc < n; ++cc) a[r][cc] -= f * a[col][cc];
    }
  }
  return det;
}

template <class C>
void sylvester_values(const std::vector<ComplexPolynomial>& q, int kw, int nodes,
                      std::vector<cxd>* values, double* entry_scale) {
  // Sylvester matrix of P (degree kw in w) and dP/dw, evaluated at z-nodes on
  // the unit circle.
  const int dim = 2 * kw - 1;
  values->resize(nodes);
  *entry_scale = 0;
  for (int t = 0; t < nodes; ++t) {
    cxd z = std::polar(1.0, 2 * std::numbers::pi * t / nodes);
    std::vector<cxd> pw(kw + 1), dpw(kw);
    for (int i = 0; i <= kw; ++i) pw[i] = i < int(q.size()) && !q[i].is_zero() ? q[i](z) : cxd{};
    for (int i = 1; i <= kw; ++i) dpw[i - 1] = double(i) * pw[i];
    for (const auto& v : pw) *entry_scale = std::max(*entry_scale, std::abs(v));
    for (const auto& v : dpw) *entry_scale = std::max(*entry_scale, std::abs(v));
    std::vector<std::vector<C>> m(dim, std::vector<C>(dim, C{}));
    for (int r = 0; r < kw - 1; ++r)
      for (int i = 0; i <= kw; ++i) m[r][r + kw - i] = from_cxd<C>(pw[i]);
    for (int r = 0; r < kw; ++r)
      for (int i = 0; i < kw; ++i) m[kw - 1 + r][r + kw - 1 - i] = from_cxd<C>(dpw[i]);
    (*values)[t] = round_cxd(lu_determinant(std::move(m)));
  }
}

}  // namespace
}  // namespace detail

std::vector<cxd> roots(const ComplexPolynomial& p, const PrecisionPolicy& policy) {
  if (p.is_zero() || p.degree() < 1)
    throw std::invalid_argument("roots: polynomial must have degree >= 1");
  std::vector<cxd> out;
  bool ok = detail::precision_ladder(policy, [&](auto tag) {
    using C = typename decltype(tag)::type;
    std::vector<C> c(p.coeffs().size());
    for (size_t m = 0; m < c.size(); ++m) c[m] = detail::from_cxd<C>(p.coeffs()[m]);
    return detail::aberth_roots<C>(c, policy.residual_target, &out);
  });
  if (!ok) throw PrecisionExhausted("roots: residual bound unmet at max_digits");
  return out;
}

ComplexPolynomial discriminant_in_w(const std::vector<ComplexPolynomial>& curve_coeffs,
                                    const PrecisionPolicy& policy) {
  int kw = -1;
  int max_zdeg = 0;
  for (int i = 0; i < static_cast<int>(curve_coeffs.size()); ++i) {
    if (!curve_coeffs[i].is_zero()) {
      kw = i;
      max_zdeg = std::max(max_zdeg, curve_coeffs[i].degree());
    }
  }
  if (kw < 0) throw DegenerateCurve("discriminant_in_w: P is identically zero");
  if (kw <= 1) return ComplexPolynomial::constant(1.0);  // no repeated w-root possible

  const int dim = 2 * kw - 1;
  const int nodes = dim * max_zdeg + 1;
  std::vector<cxd> values;
  double entry_scale = 0;
  detail::sylvester_values<cxd>(curve_coeffs, kw, nodes, &values, &entry_scale);

  double vmax = 0;
  for (const auto& v : values) vmax = std::max(vmax, std::abs(v));
  double hadamard = std::pow(std::max(entry_scale, 1e-300) * std::sqrt(double(dim)), dim);
  if (vmax <= 1e-6 * hadamard) {
    // near the roundoff floor: settle identically-zero vs tiny at higher digits
    detail::sylvester_values<cx64>(curve_coeffs, kw, nodes, &values, &entry_scale);
    vmax = 0;
    for (const auto& v : values) vmax = std::max(vmax, std::abs(v));
    if (vmax <= 1e-10 * hadamard) return ComplexPolynomial::zero();
  }
  (void)policy;

  // inverse DFT on the unit-circle samples
  std::vector<cxd> coeffs(nodes);
  for (int m = 0; m < nodes; ++m) {
    cxd acc{};
    for (int t = 0; t < nodes; ++t)
      acc += values[t] * std::polar(1.0, -2 * std::numbers::pi * m * t / nodes);
    coeffs[m] = acc / double(nodes);
  }
  double cmax = 0;
  for (const auto& c : coeffs) cmax = std::max(cmax, std::abs(c));
  for (auto& c : coeffs)
    if (std::abs(c) <= 1e-9 * cmax) c = 0.0;
  while (!coeffs.empty() && coeffs.back() == cxd{}) coeffs.pop_back();
  return ComplexPolynomial(std::move(coeffs));
}

}  // namespace hsp
