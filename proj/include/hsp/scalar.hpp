#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_complex.hpp>

namespace hsp {

using cxd = std::complex<double>;

// Software floating point tiers used by the escalation ladder.
using cx32 = boost::multiprecision::cpp_complex<32>;
using cx64 = boost::multiprecision::cpp_complex<64>;
using cx128 = boost::multiprecision::cpp_complex<128>;
using cx256 = boost::multiprecision::cpp_complex<256>;

struct PrecisionPolicy {
  int initial_digits = 16;
  int max_digits = 256;
  double residual_target = 1e-10;
};

struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCurve : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCharEq : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResonantDegree : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MultipleXi : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BranchCollision : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RootDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OrderViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResonantPhi0 : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AtomCollision : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CollinearB : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LostTrack : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureFail : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SparseWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double dbl(double x) { return x; }

template <class Backend, boost::multiprecision::expression_template_option ET>
double dbl(const boost::multiprecision::number<Backend, ET>& x) {
  return x.template convert_to<double>();
}

template <class C>
struct scalar_traits;

template <>
struct scalar_traits<cxd> {
  static cxd from(const cxd& z) { return z; }
  static cxd to_cxd(const cxd& z) { return z; }
  static constexpr int digits10 = 16;
};

template <class Backend, boost::multiprecision::expression_template_option ET>
struct scalar_traits<boost::multiprecision::number<Backend, ET>> {
  using C = boost::multiprecision::number<Backend, ET>;
  static C from(const cxd& z) { return C(z.real(), z.imag()); }
  static cxd to_cxd(const C& z) {
    return {z.real().template convert_to<double>(),
            z.imag().template convert_to<double>()};
  }
  static constexpr int digits10 = std::numeric_limits<typename C::value_type>::digits10;
};

template <class C>
C from_cxd(const cxd& z) {
  return scalar_traits<C>::from(z);
}

template <class C>
cxd round_cxd(const C& z) {
  return scalar_traits<C>::to_cxd(z);
}

template <class C>
double abs2(const C& z) {
  using std::norm;
  return dbl(norm(z));
}

// Runs kernel(tag<C>) over the precision ladder until it returns true.
// Tiers are decimal digit counts 16 (hardware double), 32, 64, 128, 256.
template <class C>
struct tag {
  using type = C;
};

template <class F>
bool precision_ladder(const PrecisionPolicy& policy, F&& kernel) {
  int digits = policy.initial_digits;
  while (true) {
    bool ok = false;
    if (digits <= 16)
      ok = kernel(tag<cxd>{});
    else if (digits <= 32)
      ok = kernel(tag<cx32>{});
    else if (digits <= 64)
      ok = kernel(tag<cx64>{});
    else if (digits <= 128)
      ok = kernel(tag<cx128>{});
    else
      ok = kernel(tag<cx256>{});
    if (ok) return true;
    if (digits >= policy.max_digits || digits >= 256) return false;
    digits *= 2;
  }
}

}  // namespace detail
}  // namespace hsp
