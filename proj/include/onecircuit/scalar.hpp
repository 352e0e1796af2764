#ifndef ONECIRCUIT_SCALAR_HPP
#define ONECIRCUIT_SCALAR_HPP

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace onecircuit {

// High-precision scalar used wherever Hankel minors or q-products are
// evaluated. 50 decimal digits; the exponent range is wide enough for the
// q^{n^2} dynamic ranges that show up here.
using HighPrec = boost::multiprecision::cpp_bin_float_50;
using BigInt = boost::multiprecision::cpp_int;

template <class Real>
inline Real pi_v() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <class Real>
inline Real real_from_bigint(const BigInt& n) {
  return static_cast<Real>(n);
}

// x^n for integer n >= 0 by repeated squaring; exact for exactly
// representable bases.
template <class Real>
Real pow_int(Real x, long n) {
  Real r(1);
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

template <class Real>
inline Real abs_val(const Real& x) {
  using std::abs;
  return abs(x);
}

// Gamma(1/4), cached. Checked in the test suite against the reflection
// identity Gamma(1/4)*Gamma(3/4) = pi*sqrt(2).
template <class Real>
const Real& gamma_quarter() {
  static const Real g = boost::math::tgamma(Real(1) / 4);
  return g;
}

template <class Real>
std::string scalar_to_string(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
  } else {
    return x.str(50);
  }
}

// A value together with a rigorous (if conservative) bound on its error.
template <class Real>
struct ValErr {
  Real value{0};
  Real error{0};
};

}  // namespace onecircuit

#endif
