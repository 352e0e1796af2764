#ifndef ONECIRCUIT_QSPECIAL_HPP
#define ONECIRCUIT_QSPECIAL_HPP

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "onecircuit/errors.hpp"
#include "onecircuit/measures.hpp"
#include "onecircuit/scalar.hpp"

namespace onecircuit {

template <class Real>
struct QPair {
  Real a{0};
  Real q{0};
};

inline constexpr long kInfiniteProduct = -1;

// q-Pochhammer (z;q)_n. For n = kInfiniteProduct the product is truncated
// once |z q^{j-1}| < eps*(1-|q|); the returned error bound dominates the
// log of the omitted factors.
template <class Real>
ValErr<Real> q_pochhammer(const Real& z, const Real& q, long n,
                          const Real& eps = Real(1e-40)) {
  using std::expm1;
  ValErr<Real> r{Real(1), Real(0)};
  if (n == 0) return r;
  if (n != kInfiniteProduct) {
    Real zq = z;
    for (long j = 1; j <= n; ++j) {
      r.value *= (Real(1) - zq);
      zq *= q;
    }
    return r;
  }
  if (!(abs_val(q) < Real(1)))
    throw DivergentProduct("(z;q)_infinity needs |q| < 1");
  const Real cutoff = eps * (Real(1) - abs_val(q));
  Real zq = z;
  long j = 0;
  while (abs_val(zq) >= cutoff) {
    r.value *= (Real(1) - zq);
    zq *= q;
    if (++j > 1000000) throw DivergentProduct("q-Pochhammer truncation did not converge");
  }
  // remaining factors: |log prod| <= 2 sum |z q^{j-1}| <= 2 eps
  const Real log_tail = 2 * abs_val(zq) / (Real(1) - abs_val(q));
  r.error = abs_val(r.value) * expm1(log_tail);
  return r;
}

// Value of the n-th Al-Salam-Carlitz polynomial by its three-term
// recurrence.
template <class Real>
Real asc_polynomial_value(const QPair<Real>& p, long n, const Real& x) {
  if (p.q == Real(0)) throw ParameterOutOfRange("asc recurrence needs q != 0");
  if (n < 0) return Real(0);
  Real vm1(0), v(1);  // V_{-1}, V_0
  Real qn(1);         // q^k
  for (long k = 0; k < n; ++k) {
    // V_{k+1} = (x - (1+a)/q^k) V_k - a (1-q^k)/q^{2k-1} V_{k-1}
    const Real c = (x - (Real(1) + p.a) / qn) * v;
    const Real lam = p.a * (Real(1) - qn) * p.q / (qn * qn);  // a(1-q^k)/q^{2k-1}
    const Real vnext = c - lam * vm1;
    vm1 = v;
    v = vnext;
    qn *= p.q;
  }
  return v;
}

// Monomial coefficients of V_0..V_n; an independent route to the same
// polynomials, used to cross-check the recurrence on values.
template <class Real>
struct ASCPolynomialTable {
  QPair<Real> params;
  std::vector<std::vector<Real>> coeffs;  // coeffs[k][m] = coefficient of x^m in V_k

  static ASCPolynomialTable build(const QPair<Real>& p, long n) {
    if (p.q == Real(0)) throw ParameterOutOfRange("asc recurrence needs q != 0");
    ASCPolynomialTable t;
    t.params = p;
    t.coeffs.resize(static_cast<std::size_t>(n) + 1);
    t.coeffs[0] = {Real(1)};
    std::vector<Real> prev;  // V_{-1} = 0
    Real qn(1);
    for (long k = 0; k < n; ++k) {
      const auto& vk = t.coeffs[static_cast<std::size_t>(k)];
      std::vector<Real> next(vk.size() + 1, Real(0));
      const Real c = (Real(1) + p.a) / qn;
      const Real lam = p.a * (Real(1) - qn) * p.q / (qn * qn);
      for (std::size_t m = 0; m < vk.size(); ++m) {
        next[m + 1] += vk[m];
        next[m] -= c * vk[m];
      }
      for (std::size_t m = 0; m < prev.size(); ++m) next[m] -= lam * prev[m];
      prev = vk;
      t.coeffs[static_cast<std::size_t>(k) + 1] = std::move(next);
      qn *= p.q;
    }
    return t;
  }

  Real eval(long k, const Real& x) const {
    const auto& c = coeffs[static_cast<std::size_t>(k)];
    Real v(0);
    for (std::size_t m = c.size(); m-- > 0;) v = v * x + c[m];
    return v;
  }
};

// Existence of an orthogonalizing measure for the V polynomials.
template <class Real>
bool asc_orthogonalizable(const Real& a, const Real& q) {
  if (a < Real(0)) return (q > Real(-1) && q < Real(0)) || q > Real(1);
  if (a > Real(0)) return q > Real(0) && q < Real(1);
  return false;
}

namespace detail {

// Tail bound for a series whose term ratio is decreasing in n and equals
// ratio_at_start at the first omitted term.
template <class Real>
Real geometric_tail(const Real& first_omitted_term, const Real& ratio_at_start) {
  if (!(ratio_at_start < Real(1)))
    throw ParameterOutOfRange("series tail not dominated; increase the atom count");
  return first_omitted_term / (Real(1) - ratio_at_start);
}

// Largest degree D <= requested with per-term ratio(D) <= 1/2, where
// ratio(D) = base_ratio * growth^D and growth >= 1.
template <class Real>
std::pair<long, Real> trim_tail_degree(long requested, const Real& base_ratio,
                                       const Real& growth) {
  for (long D = requested; D > 0; --D) {
    const Real r = base_ratio * pow_int(growth, D);
    if (r <= Real(1) / 2) return {D, r};
  }
  return {0, base_ratio};
}

}  // namespace detail

// Orthogonalizing measure with atoms at q^{-n}. Masses follow the
// super-geometric profile a^n q^{n^2}; the tail bounds come from a
// geometric domination of the omitted terms.
template <class Real>
AtomicMeasure<Real> asc_beta_measure(const QPair<Real>& p, long atom_count,
                                     long tail_degree = 48) {
  const Real &a = p.a, &q = p.q;
  if (!(a > Real(0)) || !(q > Real(0)) || !(q < Real(1)))
    throw ParameterOutOfRange("beta measure needs a > 0 and q in (0,1)");
  if (!(a * q < Real(1)))
    throw ParameterOutOfRange(
        "beta measure needs aq < 1 (otherwise the series does not define a positive measure)");
  if (atom_count < 1) throw ParameterOutOfRange("need at least one atom");

  const Real aq_inf = q_pochhammer(a * q, q, kInfiniteProduct).value;
  std::vector<Atom<Real>> atoms;
  atoms.reserve(static_cast<std::size_t>(atom_count));
  Real aq_n(1), q_n(1);  // (aq;q)_n, (q;q)_n
  Real an_qnn(1);        // a^n q^{n^2}
  Real loc(1);           // q^{-n}
  Real aqpow = a * q, qpow = q, qodd = q;  // aq^{n+1}, q^{n+1}, q^{2n+1}
  for (long n = 0; n < atom_count; ++n) {
    const Real mass = aq_inf * an_qnn / (aq_n * q_n);
    if (!(mass > Real(0)))
      throw ParameterOutOfRange(
          "atom mass underflows this scalar type; use high precision or fewer atoms");
    atoms.push_back({loc, mass});
    aq_n *= (Real(1) - aqpow);
    q_n *= (Real(1) - qpow);
    an_qnn *= a * qodd;  // a^{n+1} q^{(n+1)^2} = a^n q^{n^2} * a q^{2n+1}
    loc /= q;
    aqpow *= q;
    qpow *= q;
    qodd *= q * q;
  }
  // first omitted mass and the (decreasing) term ratio at the cut
  const long N = atom_count;
  const Real mass_N = aq_inf * an_qnn / (aq_n * q_n);
  const Real ratio = a * qodd / ((Real(1) - aqpow) * (Real(1) - qpow));
  const Real tail_mass = detail::geometric_tail(mass_N, ratio);
  // degree-D tail: terms mass_n q^{-nD}, ratio inflated by q^{-D}
  auto [D, ratio_D] = detail::trim_tail_degree(tail_degree, ratio, Real(1) / q);
  const Real tail_moment = detail::geometric_tail(mass_N / pow_int(q, N * D), ratio_D);
  return AtomicMeasure<Real>(std::move(atoms), tail_mass, D, tail_moment,
                             "asc-beta(a=" + scalar_to_string(a) + ",q=" + scalar_to_string(q) +
                                 "): Friedrichs measure for 0<q<a<=1; N-extremal, neither Krein "
                                 "nor Friedrichs, for 1<a<1/q");
}

// Companion measure with atoms at a q^{-n}, sharing all moments with the
// beta measure when 1 < a < 1/q.
template <class Real>
AtomicMeasure<Real> asc_gamma_measure(const QPair<Real>& p, long atom_count,
                                      long tail_degree = 48) {
  const Real &a = p.a, &q = p.q;
  if (!(q > Real(0)) || !(q < Real(1)) || !(a > Real(1)) || !(a * q < Real(1)))
    throw ParameterOutOfRange("gamma measure needs q in (0,1) and 1 < a < 1/q");
  if (atom_count < 1) throw ParameterOutOfRange("need at least one atom");

  const Real qa = q / a;
  const Real qa_inf = q_pochhammer(qa, q, kInfiniteProduct).value;
  std::vector<Atom<Real>> atoms;
  atoms.reserve(static_cast<std::size_t>(atom_count));
  Real qa_n(1), q_n(1);  // (q/a;q)_n, (q;q)_n
  Real an_qnn(1);        // a^{-n} q^{n^2}
  Real loc = a;          // a q^{-n}
  Real qapow = qa, qpow = q, qodd = q;
  for (long n = 0; n < atom_count; ++n) {
    const Real mass = qa_inf * an_qnn / (qa_n * q_n);
    if (!(mass > Real(0)))
      throw ParameterOutOfRange(
          "atom mass underflows this scalar type; use high precision or fewer atoms");
    atoms.push_back({loc, mass});
    qa_n *= (Real(1) - qapow);
    q_n *= (Real(1) - qpow);
    an_qnn *= qodd / a;
    loc /= q;
    qapow *= q;
    qpow *= q;
    qodd *= q * q;
  }
  const long N = atom_count;
  const Real mass_N = qa_inf * an_qnn / (qa_n * q_n);
  const Real ratio = qodd / (a * (Real(1) - qapow) * (Real(1) - qpow));
  const Real tail_mass = detail::geometric_tail(mass_N, ratio);
  auto [D, ratio_D] = detail::trim_tail_degree(tail_degree, ratio, Real(1) / q);
  const Real tail_moment =
      detail::geometric_tail(mass_N * pow_int(a / pow_int(q, N), D), ratio_D);
  return AtomicMeasure<Real>(std::move(atoms), tail_mass, D, tail_moment,
                             "asc-gamma(a=" + scalar_to_string(a) + ",q=" + scalar_to_string(q) +
                                 "): Friedrichs measure for 1<a<1/q");
}

// Closed-form n-th moment of the beta measure.
template <class Real>
Real asc_moment(const QPair<Real>& p, long n) {
  const Real &a = p.a, &q = p.q;
  if (!(a > Real(0)) || !(q > Real(0)) || !(q < Real(1)) || !(a * q < Real(1)))
    throw ParameterOutOfRange("asc_moment needs a > 0, q in (0,1), aq < 1");
  // sum_{k=0..n} (q;q)_n q^{k(k-n)} / ((q;q)_k (q;q)_{n-k}) a^k
  std::vector<Real> qq(static_cast<std::size_t>(n) + 1);  // (q;q)_k
  qq[0] = Real(1);
  Real qpow = q;
  for (long k = 1; k <= n; ++k) {
    qq[static_cast<std::size_t>(k)] = qq[static_cast<std::size_t>(k - 1)] * (Real(1) - qpow);
    qpow *= q;
  }
  Real sum(0), apow(1);
  for (long k = 0; k <= n; ++k) {
    const long e = k * (k - n);  // <= 0
    const Real qfac = Real(1) / pow_int(q, -e);
    sum += qq[static_cast<std::size_t>(n)] * qfac * apow /
           (qq[static_cast<std::size_t>(k)] * qq[static_cast<std::size_t>(n - k)]);
    apow *= a;
  }
  return sum;
}

template <class Real>
struct EulerThresholdResult {
  Real q0{0};
  std::vector<Real> tested_q;
  bool pentagonal_ok = true;          // (q;q)_inf > 1 - q/(1-q) at every tested point
  bool prefix_monotone_true = true;   // predicate held at every tested q <= q0
};

// Largest grid point q0 < 1/a below which (q/a;q)_inf + (aq;q)_inf > 1
// holds at every tested q. The pentagonal lower bound on the Euler function
// is verified alongside.
template <class Real>
EulerThresholdResult<Real> euler_threshold(const Real& a, const Real& grid_step = Real(1) / 1000) {
  if (!(a > Real(1))) throw ParameterOutOfRange("euler_threshold needs a > 1");
  EulerThresholdResult<Real> res;
  std::vector<bool> pass;
  for (Real q = grid_step; q * a < Real(1); q += grid_step) {
    res.tested_q.push_back(q);
    const Real euler = q_pochhammer(q, q, kInfiniteProduct).value;
    if (!(euler > Real(1) - q / (Real(1) - q))) res.pentagonal_ok = false;
    const Real lhs = q_pochhammer(q / a, q, kInfiniteProduct).value +
                     q_pochhammer(a * q, q, kInfiniteProduct).value;
    pass.push_back(lhs > Real(1));
  }
  std::size_t prefix_end = 0;  // one past the last point of the all-passing prefix
  while (prefix_end < pass.size() && pass[prefix_end]) ++prefix_end;
  if (prefix_end == 0) throw NotFound("no grid point satisfies the Euler predicate");
  res.q0 = res.tested_q[prefix_end - 1];
  // any pass beyond the first failure would break monotonicity
  res.prefix_monotone_true =
      std::find(pass.begin() + static_cast<std::ptrdiff_t>(prefix_end), pass.end(), true) ==
      pass.end();
  return res;
}

// The two probability measures of the quartic birth-and-death moment
// problem: atoms at (k pi / K0)^4 with K0 = Gamma(1/4)^2 / (4 sqrt(pi)).
// zeta carries the even-indexed atoms (including 0), rho the odd ones.
template <class Real>
std::pair<AtomicMeasure<Real>, AtomicMeasure<Real>> quartic_pair(long atom_count,
                                                                 long tail_degree = 24) {
  using std::exp;
  using std::log;
  using std::sinh;
  using std::sqrt;
  if (atom_count < 2) throw ParameterOutOfRange("quartic_pair needs at least 2 atoms");
  const Real pi = pi_v<Real>();
  const Real K0 = gamma_quarter<Real>() * gamma_quarter<Real>() / (4 * sqrt(pi));
  const Real c = 4 * pi / (K0 * K0);

  auto x_at = [&](long k) { return pow_int(k * pi / K0, 4); };

  auto mass_at = [&](long k) {
    const Real m = c * (k * pi) / sinh(k * pi);
    if (!(m > Real(0)))
      throw ParameterOutOfRange(
          "atom mass underflows this scalar type; use high precision or fewer atoms");
    return m;
  };
  std::vector<Atom<Real>> even, odd;
  even.push_back({Real(0), pi / (K0 * K0)});
  for (long n = 1; n < atom_count; ++n) even.push_back({x_at(2 * n), mass_at(2 * n)});
  for (long n = 0; n < atom_count; ++n) odd.push_back({x_at(2 * n + 1), mass_at(2 * n + 1)});

  // Tail bounds from 1/sinh(x) <= 2 e^{-x} / (1 - e^{-2x}). Consecutive
  // sinh arguments differ by 2 pi, so the degree-D term ratio is at most
  // ((n+1)/n)^{4D+1} e^{-2 pi} / (1 - e^{-8 pi}), decreasing in n; D is
  // trimmed until that ratio is <= 1/2 at the cut.
  auto tails = [&](long first_omitted_k, long N) {
    const Real sinh_corr = 2 / (Real(1) - exp(Real(-4) * pi));
    const Real ratio_corr = exp(-2 * pi) / (Real(1) - exp(Real(-8) * pi));
    const Real mass0 = c * (first_omitted_k * pi) * sinh_corr * exp(-Real(first_omitted_k) * pi);
    const Real step = (Real(N) + 1) / Real(N);
    const Real tail_mass = detail::geometric_tail(mass0, step * ratio_corr);
    auto [D, ratio_D] = detail::trim_tail_degree(tail_degree, step * ratio_corr,
                                                 pow_int(step, 4));
    const Real tail_moment =
        detail::geometric_tail(mass0 * pow_int(x_at(first_omitted_k), D), ratio_D);
    return std::make_tuple(tail_mass, D, tail_moment);
  };

  auto [zm, zD, zM] = tails(2 * atom_count, atom_count);
  auto [rm, rD, rM] = tails(2 * atom_count + 1, atom_count);
  AtomicMeasure<Real> zeta(std::move(even), zm, zD, zM,
                           "quartic birth-and-death pair: Krein measure (even atoms)");
  AtomicMeasure<Real> rho(std::move(odd), rm, rD, rM,
                          "quartic birth-and-death pair: Friedrichs measure (odd atoms)");
  return {std::move(zeta), std::move(rho)};
}

}  // namespace onecircuit

#endif
