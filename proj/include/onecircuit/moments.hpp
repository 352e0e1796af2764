#ifndef ONECIRCUIT_MOMENTS_HPP
#define ONECIRCUIT_MOMENTS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "onecircuit/linalg.hpp"
#include "onecircuit/measures.hpp"
#include "onecircuit/scalar.hpp"

namespace onecircuit {

// gamma_0..gamma_N with optional per-entry error bounds.
template <class Real>
struct MomentSequence {
  std::vector<Real> values;
  std::vector<Real> error_bounds;  // empty or same length as values

  std::size_t max_order() const { return values.empty() ? 0 : values.size() - 1; }
};

template <class Real>
MomentSequence<Real> moments_of(const AtomicMeasure<Real>& m, long max_n) {
  MomentSequence<Real> s;
  bool any_err = false;
  for (long n = 0; n <= max_n; ++n) {
    auto v = m.moment(n);
    s.values.push_back(v.value);
    s.error_bounds.push_back(v.error);
    if (v.error != Real(0)) any_err = true;
  }
  if (!any_err) s.error_bounds.clear();
  return s;
}

enum class HankelVerdict { StieltjesConsistent, HamburgerOnly, NotHamburger };

inline const char* to_string(HankelVerdict v) {
  switch (v) {
    case HankelVerdict::StieltjesConsistent: return "StieltjesConsistent";
    case HankelVerdict::HamburgerOnly: return "HamburgerOnly";
    case HankelVerdict::NotHamburger: return "NotHamburger";
  }
  return "?";
}

template <class Real>
struct HankelOrderEntry {
  int k = 0;
  Real min_eig_base{0};
  std::optional<Real> min_eig_shift;  // absent when 2k+1 exceeds the data
};

template <class Real>
struct HankelReport {
  std::vector<HankelOrderEntry<Real>> orders;
  HankelVerdict verdict = HankelVerdict::StieltjesConsistent;
  int failing_order = -1;
  // Finite data can never prove positivity of the full sequence.
  bool truncation_evidence_only = true;
};

namespace detail {

template <class Real>
SymMatrix<Real> hankel_minor(const std::vector<Real>& g, int k, int shift) {
  SymMatrix<Real> m(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) m.at(i, j) = g[i + j + shift];
  return m;
}

}  // namespace detail

template <class Real>
Real hankel_minor_det(const std::vector<Real>& g, int k, int shift = 0) {
  return determinant(detail::hankel_minor(g, k, shift));
}

// Smallest-eigenvalue test of [g_{i+j}] and [g_{i+j+1}] at every available
// order. Thresholds are relative to the largest diagonal entry of each
// matrix; the growth of moment sequences makes absolute thresholds useless.
template <class Real>
HankelReport<Real> hankel_report(const MomentSequence<Real>& g, const Real& tol) {
  const auto& v = g.values;
  const int N = static_cast<int>(v.size()) - 1;
  HankelReport<Real> rep;
  bool base_ok = true, shift_ok = true;
  int base_fail = -1, shift_fail = -1;
  for (int k = 0; 2 * k <= N; ++k) {
    HankelOrderEntry<Real> e;
    e.k = k;
    {
      auto m = detail::hankel_minor(v, k, 0);
      const Real scale = std::max(m.max_diagonal(), Real(1));
      e.min_eig_base = min_symmetric_eigenvalue(m);
      if (base_ok && e.min_eig_base < -tol * scale) {
        base_ok = false;
        base_fail = k;
      }
    }
    if (2 * k + 1 <= N) {
      auto m = detail::hankel_minor(v, k, 1);
      const Real scale = std::max(m.max_diagonal(), Real(1));
      e.min_eig_shift = min_symmetric_eigenvalue(m);
      if (shift_ok && *e.min_eig_shift < -tol * scale) {
        shift_ok = false;
        shift_fail = k;
      }
    }
    rep.orders.push_back(std::move(e));
  }
  if (!base_ok) {
    rep.verdict = HankelVerdict::NotHamburger;
    rep.failing_order = base_fail;
  } else if (!shift_ok) {
    rep.verdict = HankelVerdict::HamburgerOnly;
    rep.failing_order = shift_fail;
  } else {
    rep.verdict = HankelVerdict::StieltjesConsistent;
  }
  return rep;
}

// Certificate (at truncation level) for a representing measure supported in
// [1, inf): both the Hankel form of gamma and the Hankel form of the
// difference sequence gamma_{n+1} - gamma_n must be PSD.
template <class Real>
struct ShiftDominanceReport {
  bool pass = false;
  bool failure_in_differences = false;
  int failing_order = -1;
  Real failing_minor_det{0};  // determinant of the offending minor
  HankelReport<Real> base;
  HankelReport<Real> differences;
};

template <class Real>
ShiftDominanceReport<Real> shift_dominance(const MomentSequence<Real>& g, const Real& tol) {
  if (g.values.size() < 2) throw Error("shift dominance needs at least two entries");
  ShiftDominanceReport<Real> rep;
  rep.base = hankel_report(g, tol);

  MomentSequence<Real> d;
  for (std::size_t n = 0; n + 1 < g.values.size(); ++n)
    d.values.push_back(g.values[n + 1] - g.values[n]);
  rep.differences = hankel_report(d, tol);

  if (rep.base.verdict == HankelVerdict::NotHamburger) {
    rep.pass = false;
    rep.failing_order = rep.base.failing_order;
    rep.failure_in_differences = false;
    rep.failing_minor_det = hankel_minor_det(g.values, rep.failing_order, 0);
  } else if (rep.differences.verdict == HankelVerdict::NotHamburger) {
    rep.pass = false;
    rep.failing_order = rep.differences.failing_order;
    rep.failure_in_differences = true;
    rep.failing_minor_det = hankel_minor_det(d.values, rep.failing_order, 0);
  } else {
    rep.pass = true;
  }
  return rep;
}

enum class TransformDirection { Forward, Inverse };

// Action of the homothety group on sequences, with binomial weights taken
// in exact integer arithmetic before any scalar multiplication.
template <class Real>
MomentSequence<Real> transform_T(const MomentSequence<Real>& g, const Homothety<Real>& h,
                                 TransformDirection dir) {
  const std::size_t len = g.values.size();
  std::vector<std::vector<BigInt>> binom(len);
  for (std::size_t n = 0; n < len; ++n) {
    binom[n].resize(n + 1);
    binom[n][0] = 1;
    binom[n][n] = 1;
    for (std::size_t j = 1; j < n; ++j) binom[n][j] = binom[n - 1][j - 1] + binom[n - 1][j];
  }

  MomentSequence<Real> out;
  out.values.resize(len);
  for (std::size_t n = 0; n < len; ++n) {
    Real acc(0);
    for (std::size_t j = 0; j <= n; ++j) {
      const Real b = real_from_bigint<Real>(binom[n][j]);
      Real term;
      if (dir == TransformDirection::Forward) {
        term = b * pow_int(h.shift, static_cast<long>(n - j)) *
               pow_int(h.scale, static_cast<long>(n)) * g.values[j];
      } else {
        term = b * pow_int(-h.shift, static_cast<long>(n - j)) * g.values[j] /
               pow_int(h.scale, static_cast<long>(j));
      }
      acc += term;
    }
    out.values[n] = acc;
  }
  return out;
}

enum class CarlemanClass { Diverging, Converging, Inconclusive };

inline const char* to_string(CarlemanClass c) {
  switch (c) {
    case CarlemanClass::Diverging: return "Diverging";
    case CarlemanClass::Converging: return "Converging";
    case CarlemanClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

template <class Real>
struct CarlemanDiagnostic {
  std::vector<Real> partial_sums;  // partial_sums[k-1] = sum_{n=1..k} gamma_n^{-1/(2n)}
  CarlemanClass growth_class = CarlemanClass::Inconclusive;
  // Divergence of the full series is undecidable from a prefix; the class
  // is advisory only.
  std::string note = "truncation-level evidence only; growth class is advisory";
};

// Partial sums of gamma_n^{-1/(2n)} plus a growth-class guess obtained by
// fitting log gamma_n against n log n and n^2 on the tail half.
template <class Real>
CarlemanDiagnostic<Real> carleman_diagnostic(const MomentSequence<Real>& g) {
  using std::exp;
  using std::log;
  CarlemanDiagnostic<Real> d;
  const auto& v = g.values;
  for (std::size_t n = 0; n < v.size(); ++n)
    if (!(v[n] > Real(0))) throw NonPositiveEntry("carleman_diagnostic needs gamma_n > 0");

  Real acc(0);
  for (std::size_t n = 1; n < v.size(); ++n) {
    acc += exp(-log(v[n]) / Real(2 * static_cast<long>(n)));
    d.partial_sums.push_back(acc);
  }

  const std::size_t N = v.size() - 1;
  if (N < 6) return d;  // too short to even guess
  std::vector<Real> f1, f2, y;
  for (std::size_t n = N / 2; n <= N; ++n) {
    if (n < 2) continue;
    const Real rn = Real(static_cast<long>(n));
    f1.push_back(rn * log(rn));
    f2.push_back(rn * rn);
    y.push_back(log(v[n]));
  }
  auto [alpha, beta] = lsq_fit2(f1, f2, y);
  // compare total contributions of the two regressors over the fit window
  Real t1(0), t2(0);
  for (std::size_t i = 0; i < f1.size(); ++i) {
    t1 += alpha * f1[i];
    t2 += beta * f2[i];
  }
  if (t2 <= t1 || beta <= Real(0)) {
    d.growth_class = CarlemanClass::Diverging;
  } else if (t2 > 2 * std::max(t1, Real(0))) {
    d.growth_class = CarlemanClass::Converging;
  } else {
    d.growth_class = CarlemanClass::Inconclusive;
  }
  return d;
}

enum class StieltjesClass { SIndeterminate, SDeterminate, NotStieltjes };

inline const char* to_string(StieltjesClass v) {
  switch (v) {
    case StieltjesClass::SIndeterminate: return "S-Indeterminate";
    case StieltjesClass::SDeterminate: return "S-Determinate";
    case StieltjesClass::NotStieltjes: return "NotStieltjes";
  }
  return "?";
}

// Classification of a transformed sequence by the sign of the image of the
// Friedrichs inf-support. The inf-support itself is trusted metadata.
template <class Real>
StieltjesClass stieltjes_class_of_transform(const Real& inf_supp_friedrichs, const Homothety<Real>& h) {
  const Real c = h(inf_supp_friedrichs);
  if (c > Real(0)) return StieltjesClass::SIndeterminate;
  if (c == Real(0)) return StieltjesClass::SDeterminate;
  return StieltjesClass::NotStieltjes;
}

}  // namespace onecircuit

#endif
