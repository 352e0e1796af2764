#ifndef ONECIRCUIT_LINALG_HPP
#define ONECIRCUIT_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include "onecircuit/scalar.hpp"

namespace onecircuit {

// Dense symmetric matrix, row-major.
template <class Real>
struct SymMatrix {
  std::size_t n = 0;
  std::vector<Real> a;  // n*n entries

  explicit SymMatrix(std::size_t dim) : n(dim), a(dim * dim, Real(0)) {}
  Real& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Real& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  Real max_diagonal() const {
    Real m = at(0, 0);
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, at(i, i));
    return m;
  }
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations. Small
// matrices only (Hankel minors of order <= ~16), so the O(n^3) sweeps are
// irrelevant; what matters is that the rotations stay backward stable at
// any scalar precision.
template <class Real>
std::vector<Real> symmetric_eigenvalues(SymMatrix<Real> m) {
  using std::sqrt;
  const std::size_t n = m.n;
  if (n == 1) return {m.at(0, 0)};

  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int sweep = 0; sweep < 200; ++sweep) {
    Real off(0), diag(0);
    for (std::size_t i = 0; i < n; ++i) {
      diag += abs_val(m.at(i, i));
      for (std::size_t j = i + 1; j < n; ++j) off += abs_val(m.at(i, j));
    }
    if (off <= eps * (diag + off)) break;

    for (std::size_t p = 0; p < n - 1; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Real apq = m.at(p, q);
        if (apq == Real(0)) continue;
        const Real app = m.at(p, p), aqq = m.at(q, q);
        const Real theta = (aqq - app) / (2 * apq);
        // tan of the rotation angle, smaller root
        Real t;
        if (abs_val(theta) > Real(1) / eps) {
          t = 1 / (2 * theta);
        } else {
          t = Real(theta >= 0 ? 1 : -1) / (abs_val(theta) + sqrt(theta * theta + 1));
        }
        const Real c = 1 / sqrt(t * t + 1);
        const Real s = t * c;
        const Real tau = s / (1 + c);

        m.at(p, p) = app - t * apq;
        m.at(q, q) = aqq + t * apq;
        m.at(p, q) = m.at(q, p) = Real(0);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Real akp = m.at(k, p), akq = m.at(k, q);
          m.at(k, p) = m.at(p, k) = akp - s * (akq + tau * akp);
          m.at(k, q) = m.at(q, k) = akq + s * (akp - tau * akq);
        }
      }
    }
  }
  std::vector<Real> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = m.at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

template <class Real>
Real min_symmetric_eigenvalue(const SymMatrix<Real>& m) {
  return symmetric_eigenvalues(m).front();
}

// Determinant via LU with partial pivoting.
template <class Real>
Real determinant(SymMatrix<Real> m) {
  const std::size_t n = m.n;
  Real det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs_val(m.at(i, k)) > abs_val(m.at(piv, k))) piv = i;
    if (m.at(piv, k) == Real(0)) return Real(0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
      det = -det;
    }
    det *= m.at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real f = m.at(i, k) / m.at(k, k);
      for (std::size_t j = k; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
    }
  }
  return det;
}

// Least squares fit y ~ c1*f1 + c2*f2 through the 2x2 normal equations.
template <class Real>
std::pair<Real, Real> lsq_fit2(const std::vector<Real>& f1, const std::vector<Real>& f2,
                               const std::vector<Real>& y) {
  Real a11(0), a12(0), a22(0), b1(0), b2(0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    a11 += f1[i] * f1[i];
    a12 += f1[i] * f2[i];
    a22 += f2[i] * f2[i];
    b1 += f1[i] * y[i];
    b2 += f2[i] * y[i];
  }
  const Real det = a11 * a22 - a12 * a12;
  if (det == Real(0)) return {Real(0), Real(0)};
  return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det};
}

}  // namespace onecircuit

#endif
