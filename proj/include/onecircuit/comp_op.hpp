#ifndef ONECIRCUIT_COMP_OP_HPP
#define ONECIRCUIT_COMP_OP_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "onecircuit/circuit_graph.hpp"
#include "onecircuit/errors.hpp"
#include "onecircuit/measures.hpp"
#include "onecircuit/moments.hpp"
#include "onecircuit/scalar.hpp"

namespace onecircuit {

// integral of t^m / (t^{kappa+1} - 1) against a measure supported in
// (1, inf). nullopt when the tail degree cannot cover the integrand.
template <class Real>
std::optional<ValErr<Real>> integral_power_over_shifted(const AtomicMeasure<Real>& S, long m,
                                                        long kappa) {
  ValErr<Real> r;
  const long p = kappa + 1;
  r.value = S.integrate_atoms(
      [&](const Real& t) { return pow_int(t, m) / (pow_int(t, p) - Real(1)); });
  if (S.exact()) return r;
  if (S.atoms().empty()) return std::nullopt;
  const Real L = S.atoms().back().location;
  if (!(L > Real(1))) return std::nullopt;
  const Real C = Real(1) / (Real(1) - Real(1) / pow_int(L, p));
  if (m <= p) {
    r.error = C * S.tail_mass_bound();
  } else if (m - p <= S.tail_degree()) {
    r.error = C * S.tail_moment_bound();
  } else {
    return std::nullopt;
  }
  return r;
}

// integral of (t^r - 1) / (t^{kappa+1} - 1); the integrand sits in [0,1]
// for 0 <= r <= kappa+1, so the tail is controlled by the mass bound alone.
template <class Real>
ValErr<Real> integral_ratio_shifted(const AtomicMeasure<Real>& S, long r, long kappa) {
  ValErr<Real> out;
  const long p = kappa + 1;
  out.value = S.integrate_atoms([&](const Real& t) {
    return (pow_int(t, r) - Real(1)) / (pow_int(t, p) - Real(1));
  });
  out.error = S.tail_mass_bound();
  return out;
}

// Discrete weights on the truncated vertex set, with optional closed-form
// branch seeds: when branch i carries a seed S_i, the stored weights obey
// mu(x_{i,j}) = mu(x_{i,1}) * moment(S_i, j-1), which extends mu beyond the
// stored depth.
template <class Real>
struct WeightedGraphModel {
  GraphShape shape;
  std::vector<Real> circuit_mu;              // mu(x_0) .. mu(x_kappa)
  std::vector<std::vector<Real>> branch_mu;  // branch_mu[i-1][j-1] = mu(x_{i,j})
  std::vector<std::optional<AtomicMeasure<Real>>> branch_seed;

  // Bounds certifying the omitted branches of an eta = infinity model,
  // relative to mu(x_kappa). Only builders with closed forms can fill
  // these; free-form infinite models leave them empty and all affected
  // results degrade to Unknown.
  std::optional<Real> eta_mu_tail;                  // sum_{i>cap} mu(x_{i,1}) / mu(x_kappa)
  std::optional<Real> eta_loop_tail;              // tail of the Bud-ski sum at x_kappa
  std::vector<Real> eta_h_tail;                     // [m] -> tail of sum_i (mu(x_{i,1})/mu(x_kappa)) h_m(x_{i,1})

  bool eta_truncated() const { return shape.eta_infinite; }

  const Real& mu_circuit(std::int64_t r) const { return circuit_mu[static_cast<std::size_t>(r)]; }
  const Real& mu_x0() const { return circuit_mu.front(); }
  const Real& mu_xkappa() const { return circuit_mu.back(); }

  ValErr<Real> mu_with_error(const VertexId& v) const {
    if (v.is_circuit()) {
      if (v.index < 0 || v.index > shape.kappa)
        throw InvalidVertex("circuit index out of range");
      return {mu_circuit(v.index), Real(0)};
    }
    if (v.branch < 1 || v.branch > shape.branches())
      throw InvalidVertex("branch index out of range");
    const auto& row = branch_mu[static_cast<std::size_t>(v.branch - 1)];
    if (v.index >= 1 && v.index <= static_cast<std::int64_t>(row.size()))
      return {row[static_cast<std::size_t>(v.index - 1)], Real(0)};
    const auto& seed = branch_seed[static_cast<std::size_t>(v.branch - 1)];
    if (!seed)
      throw TruncationExhausted("mu(" + v.to_string() +
                                ") beyond stored depth and no seed closed form");
    auto m = seed->moment(v.index - 1);  // may throw TailDegreeExceeded
    return {row.front() * m.value, row.front() * m.error};
  }

  Real mu(const VertexId& v) const { return mu_with_error(v).value; }

  void validate() const {
    if (static_cast<std::int64_t>(circuit_mu.size()) != shape.kappa + 1)
      throw Error("circuit weight count does not match kappa");
    if (static_cast<std::int64_t>(branch_mu.size()) != shape.branches())
      throw Error("branch weight rows do not match eta");
    for (const auto& w : circuit_mu)
      if (!(w > Real(0))) throw Error("weights must be positive");
    for (const auto& row : branch_mu) {
      if (row.empty()) throw Error("every branch needs at least one weight");
      for (const auto& w : row)
        if (!(w > Real(0))) throw Error("weights must be positive");
    }
    if (!branch_seed.empty()) {
      for (std::size_t i = 0; i < branch_mu.size(); ++i) {
        if (!branch_seed[i]) continue;
        const auto& row = branch_mu[i];
        for (std::size_t j = 0; j < row.size(); ++j) {
          auto m = branch_seed[i]->moment(static_cast<long>(j));
          const Real expect = row.front() * m.value;
          if (abs_val(row[j] - expect) >
              Real(1e-12) * abs_val(expect) + row.front() * m.error)
            throw Error("stored branch weights disagree with the seed moments");
        }
      }
    }
  }
};

// mu(phi^{-1}(x)) for a circuit-top vertex, with the eta tail as error.
template <class Real>
ValErr<Real> preimage_mass_xkappa(const WeightedGraphModel<Real>& m) {
  ValErr<Real> s{m.mu_x0(), Real(0)};
  for (const auto& row : m.branch_mu) s.value += row.front();
  if (m.eta_truncated()) {
    if (m.eta_mu_tail)
      s.error = *m.eta_mu_tail * m.mu_xkappa();
    else
      throw TruncationExhausted("eta = infinity model without branch-sum tail bound");
  }
  return s;
}

// h_phi over the truncated vertex set. Vertices on the last branch level
// whose branch has no seed are omitted (their value needs mu one level
// beyond the truncation).
template <class Real>
std::map<VertexId, Real> h_phi(const WeightedGraphModel<Real>& m) {
  std::map<VertexId, Real> out;
  const auto& sh = m.shape;
  for (std::int64_t r = 0; r + 1 <= sh.kappa; ++r)
    out[VertexId::circuit(r)] = m.mu_circuit(r + 1) / m.mu_circuit(r);
  out[VertexId::circuit(sh.kappa)] = preimage_mass_xkappa(m).value / m.mu_xkappa();
  for (std::int64_t i = 1; i <= sh.branches(); ++i) {
    for (std::int64_t j = 1; j <= sh.branch_depth; ++j) {
      const VertexId v = VertexId::branch_vertex(i, j);
      try {
        out[v] = m.mu(VertexId::branch_vertex(i, j + 1)) / m.mu(v);
      } catch (const TruncationExhausted&) {
        // last level of a seedless branch
      } catch (const TailDegreeExceeded&) {
      }
    }
  }
  return out;
}

template <class Real>
Real h_phi_at(const WeightedGraphModel<Real>& m, const VertexId& v) {
  if (v.is_circuit() && v.index == m.shape.kappa)
    return preimage_mass_xkappa(m).value / m.mu_xkappa();
  if (v.is_circuit()) return m.mu_circuit(v.index + 1) / m.mu_circuit(v.index);
  return m.mu(VertexId::branch_vertex(v.branch, v.index + 1)) / m.mu(v);
}

// Radon-Nikodym derivative table. The row at x_0 is precomputed by the
// step-(kappa+1) recurrence; every circuit value is then derived from it
// (single recurrence authority), and branch values are plain weight
// ratios. Precomputation keeps the table safe for concurrent reads.
template <class Real>
class RnTable {
 public:
  RnTable(const WeightedGraphModel<Real>& model, long max_n)
      : model_(&model), kappa_(model.shape.kappa) {
    const long len = max_n + kappa_ + 1;
    x0_.reserve(static_cast<std::size_t>(len) + 1);
    const Real mu0 = model.mu_x0();
    for (long r = 0; r <= kappa_ && r <= len; ++r)
      x0_.push_back(ValErr<Real>{model.mu_circuit(r) / mu0, Real(0)});
    for (long n = static_cast<long>(x0_.size()); n <= len; ++n) {
      const long m = n - kappa_ - 1;
      if (!x0_[static_cast<std::size_t>(m)].has_value()) {
        x0_.push_back(std::nullopt);
        continue;
      }
      ValErr<Real> acc = *x0_[static_cast<std::size_t>(m)];
      bool ok = true;
      for (std::int64_t i = 1; i <= model.shape.branches() && ok; ++i) {
        try {
          const auto h_b = branch_h(i, 1, m);
          const Real w = model.branch_mu[static_cast<std::size_t>(i - 1)].front() / mu0;
          acc.value += w * h_b.value;
          acc.error += w * h_b.error;
        } catch (const Error&) {
          ok = false;
        }
      }
      if (ok && model.eta_truncated()) {
        if (static_cast<std::size_t>(m) < model.eta_h_tail.size())
          acc.error += model.eta_h_tail[static_cast<std::size_t>(m)] * model.mu_xkappa() / mu0;
        else
          ok = false;
      }
      x0_.push_back(ok ? std::optional<ValErr<Real>>(acc) : std::nullopt);
    }
  }

  // h_{phi^n}(v) with accumulated error bound.
  ValErr<Real> value(const VertexId& v, long n) const {
    if (n == 0) return {Real(1), Real(0)};
    if (v.is_circuit()) {
      const std::size_t idx = static_cast<std::size_t>(n + v.index);
      if (idx >= x0_.size() || !x0_[idx].has_value())
        throw TruncationExhausted("h_" + std::to_string(n) + "(" + v.to_string() +
                                  ") not determined by the truncated model");
      const auto base = *x0_[idx];
      const Real f = model_->mu_x0() / model_->mu_circuit(v.index);
      return {f * base.value, f * base.error};
    }
    return branch_h(v.branch, v.index, n);
  }

  long max_available_x0() const {
    long n = -1;
    for (const auto& e : x0_)
      if (e.has_value())
        ++n;
      else
        break;
    return n;
  }

 private:
  ValErr<Real> branch_h(std::int64_t i, std::int64_t j, long n) const {
    const auto num = model_->mu_with_error(VertexId::branch_vertex(i, j + n));
    const auto den = model_->mu_with_error(VertexId::branch_vertex(i, j));
    ValErr<Real> r;
    r.value = num.value / den.value;
    r.error = (num.error + r.value * den.error) / den.value;
    return r;
  }

  const WeightedGraphModel<Real>* model_;
  long kappa_;
  std::vector<std::optional<ValErr<Real>>> x0_;
};

// h_{phi^n}(x_kappa) evaluated as the mass of the n-fold preimage divided
// by mu(x_kappa), i.e. the closed double sum over the iterated inverse.
// Independent of the recurrence path above.
template <class Real>
ValErr<Real> h_n_xkappa_direct(const WeightedGraphModel<Real>& m, long n) {
  if (n == 0) return {Real(1), Real(0)};
  const long period = m.shape.kappa + 1;
  const long j = n / period;
  const long r = n % period;
  ValErr<Real> acc;
  const Real muk = m.mu_xkappa();
  if (r == 0) {
    acc.value = Real(1);
  } else {
    acc.value = m.mu_circuit(r - 1) / muk;
  }
  const long l0 = (r == 0) ? 1 : 0;
  for (std::int64_t i = 1; i <= m.shape.branches(); ++i) {
    for (long l = l0; l <= j; ++l) {
      const auto w = m.mu_with_error(VertexId::branch_vertex(i, l * period + r));
      acc.value += w.value / muk;
      acc.error += w.error / muk;
    }
  }
  if (m.eta_truncated()) {
    for (long l = l0; l <= j; ++l) {
      const long depth = l * period + r;
      if (static_cast<std::size_t>(depth - 1) < m.eta_h_tail.size())
        acc.error += m.eta_h_tail[static_cast<std::size_t>(depth - 1)];
      else
        throw TruncationExhausted("eta tail bound missing for the direct sum");
    }
  }
  return acc;
}

template <class Real>
struct NormBound {
  Real sup_value{0};
  VertexId attained_at;
  bool truncation_caveat = false;
};

// sup of h_{phi^n} over the truncated vertex set; the caveat flags branches
// whose tail behaviour is not pinned down by a closed form, or whose seeded
// ratios are still growing at the truncation depth.
template <class Real>
NormBound<Real> norm_bound(const WeightedGraphModel<Real>& m, long n) {
  RnTable<Real> table(m, n);
  NormBound<Real> out;
  bool first = true;
  auto consider = [&](const VertexId& v) {
    ValErr<Real> h;
    try {
      h = table.value(v, n);
    } catch (const Error&) {
      out.truncation_caveat = true;
      return;
    }
    if (first || h.value > out.sup_value) {
      out.sup_value = h.value;
      out.attained_at = v;
      first = false;
    }
  };
  for (std::int64_t r = 0; r <= m.shape.kappa; ++r) consider(VertexId::circuit(r));
  for (std::int64_t i = 1; i <= m.shape.branches(); ++i) {
    Real prev(-1);
    bool growing = false;
    for (std::int64_t jj = 1; jj <= m.shape.branch_depth; ++jj) {
      const VertexId v = VertexId::branch_vertex(i, jj);
      try {
        const Real h = table.value(v, n).value;
        growing = (h > prev * (Real(1) + Real(1e-12)));
        prev = h;
        consider(v);
      } catch (const Error&) {
        out.truncation_caveat = true;
        break;
      }
    }
    if (!m.branch_seed.empty() && !m.branch_seed[static_cast<std::size_t>(i - 1)])
      out.truncation_caveat = true;
    else if (growing)
      out.truncation_caveat = true;  // sup not attained inside the truncation
  }
  if (m.eta_truncated()) out.truncation_caveat = true;
  return out;
}

enum class DensityVerdict { Dense, NotDense, Unknown };

inline const char* to_string(DensityVerdict v) {
  switch (v) {
    case DensityVerdict::Dense: return "Dense";
    case DensityVerdict::NotDense: return "NotDense";
    case DensityVerdict::Unknown: return "Unknown";
  }
  return "?";
}

// Density test for the n-th power via the branch-seed integrals
// sum_i mu(x_{i,1}) * int t^{n+kappa} / (t^{kappa+1}-1) dP(x_{i,1}).
// Finite eta: every term is finite, so the answer is Dense unless a tail
// degree runs out. Infinite eta: the per-branch terms are extrapolated by a
// log-log slope fit; slopes near -1 (harmonic or worse) mean divergence.
template <class Real>
DensityVerdict power_density(const WeightedGraphModel<Real>& m, long n) {
  using std::log;
  if (m.branch_seed.empty()) return DensityVerdict::Unknown;
  std::vector<Real> terms;
  for (std::int64_t i = 1; i <= m.shape.branches(); ++i) {
    const auto& seed = m.branch_seed[static_cast<std::size_t>(i - 1)];
    if (!seed) return DensityVerdict::Unknown;
    auto I = integral_power_over_shifted(*seed, n + m.shape.kappa, m.shape.kappa);
    if (!I) return DensityVerdict::Unknown;
    terms.push_back(m.branch_mu[static_cast<std::size_t>(i - 1)].front() * I->value);
  }
  if (!m.eta_truncated()) return DensityVerdict::Dense;

  // TODO: for single-atom seeds the per-branch terms have a closed form;
  // a condensation bound would turn the slope fit below into a certificate.
  const std::size_t cnt = terms.size();
  if (cnt < 16) return DensityVerdict::Unknown;
  // geometric decay over the last half settles it immediately
  bool geometric = true;
  for (std::size_t i = cnt / 2; i + 1 < cnt; ++i)
    if (!(terms[i + 1] <= Real(9) / 10 * terms[i])) geometric = false;
  if (geometric) return DensityVerdict::Dense;

  std::vector<Real> lx, dummy, ly;
  for (std::size_t i = cnt / 2; i < cnt; ++i) {
    if (!(terms[i] > Real(0))) return DensityVerdict::Unknown;
    lx.push_back(log(Real(static_cast<long>(i) + 1)));
    dummy.push_back(Real(1));
    ly.push_back(log(terms[i]));
  }
  auto [slope, icept] = lsq_fit2(lx, dummy, ly);
  (void)icept;
  if (slope < Real(-115) / 100) return DensityVerdict::Dense;
  if (slope > Real(-1005) / 1000) return DensityVerdict::NotDense;
  return DensityVerdict::Unknown;
}

enum class HypoVerdict { Hyponormal, NotHyponormal };

inline const char* to_string(HypoVerdict v) {
  return v == HypoVerdict::Hyponormal ? "Hyponormal" : "NotHyponormal";
}

template <class Real>
struct HyponormalityReport {
  std::map<VertexId, Real> per_vertex_slack;
  HypoVerdict verdict = HypoVerdict::Hyponormal;
  VertexId worst_vertex;
  Real worst_slack{0};
  // specialized sides of the kappa = 0 inequality at x_0; the verdict there
  // is equivalent to left <= right
  std::optional<Real> loop_test_left, loop_test_right;
  bool truncation_caveat = false;
};

// Per-vertex hyponormality slack 1 - (1/mu(x)) sum_{y in phi^{-1}(x)}
// mu(y)^2 / mu(phi^{-1}(y)).
template <class Real>
HyponormalityReport<Real> hyponormality(const WeightedGraphModel<Real>& m,
                                        const Real& tol = Real(0)) {
  const auto& sh = m.shape;
  HyponormalityReport<Real> rep;

  const ValErr<Real> mass_k = preimage_mass_xkappa(m);  // mu(phi^{-1}(x_kappa))

  // mass of phi^{-1}({y}) for the single preimage chain entries
  auto preimage_mass = [&](const VertexId& y) -> Real {
    if (y.is_circuit() && y.index == sh.kappa) return mass_k.value;
    auto p = preimage(sh, y);
    if (p.vertices.empty()) throw TruncationExhausted("preimage truncated at " + y.to_string());
    Real s(0);
    for (const auto& z : p.vertices) s += m.mu(z);
    return s;
  };

  auto record = [&](const VertexId& x, const Real& slack) {
    rep.per_vertex_slack[x] = slack;
    if (rep.per_vertex_slack.size() == 1 || slack < rep.worst_slack) {
      rep.worst_slack = slack;
      rep.worst_vertex = x;
    }
  };

  // circuit vertices other than x_kappa
  for (std::int64_t r = 0; r + 1 <= sh.kappa; ++r) {
    const VertexId y = VertexId::circuit(r + 1);
    const Real s =
        Real(1) - m.mu(y) * m.mu(y) / (m.mu_circuit(r) * preimage_mass(y));
    record(VertexId::circuit(r), s);
  }
  // x_kappa: preimage {x_0} cup {x_{i,1}}
  {
    // For an eta-truncated model this sum is a lower bound (the x_0 term
    // uses the full preimage mass including the tail bound, the omitted
    // branch terms are positive), so the recorded slack is an upper bound
    // on the true one and a negative value stays conclusive.
    const Real x0_term =
        m.mu_x0() * m.mu_x0() /
        (sh.kappa >= 1 ? m.mu(VertexId::circuit(1)) : mass_k.value + mass_k.error);
    Real sum = x0_term;
    for (std::int64_t i = 1; i <= sh.branches(); ++i) {
      const Real w1 = m.branch_mu[static_cast<std::size_t>(i - 1)].front();
      sum += w1 * w1 / m.mu(VertexId::branch_vertex(i, 2));
    }
    if (m.eta_truncated()) rep.truncation_caveat = true;
    record(VertexId::circuit(sh.kappa), Real(1) - sum / m.mu_xkappa());

    if (sh.kappa == 0) {
      rep.loop_test_left = (sum - x0_term) / m.mu_x0();
      rep.loop_test_right = Real(1) - m.mu_x0() / (mass_k.value + mass_k.error);
    }
  }
  // branch vertices
  for (std::int64_t i = 1; i <= sh.branches(); ++i) {
    for (std::int64_t jj = 1; jj <= sh.branch_depth; ++jj) {
      try {
        const Real a = m.mu(VertexId::branch_vertex(i, jj));
        const Real b = m.mu(VertexId::branch_vertex(i, jj + 1));
        const Real c = m.mu(VertexId::branch_vertex(i, jj + 2));
        record(VertexId::branch_vertex(i, jj), Real(1) - b * b / (a * c));
      } catch (const Error&) {
        rep.truncation_caveat = true;
        break;
      }
    }
  }

  rep.verdict =
      rep.worst_slack < -tol ? HypoVerdict::NotHyponormal : HypoVerdict::Hyponormal;
  return rep;
}

// Conditional expectation of f given phi^{-1}(2^X), evaluated on the fiber
// over x.
template <class Real>
Real conditional_expectation(const WeightedGraphModel<Real>& m,
                             const std::map<VertexId, Real>& f, const VertexId& x) {
  auto p = preimage(m.shape, x);
  if (p.vertices.empty()) throw EmptyPreimage("no preimage available for " + x.to_string());
  Real num(0), den(0);
  for (const auto& y : p.vertices) {
    const Real w = m.mu(y);
    den += w;
    auto it = f.find(y);
    if (it == f.end()) throw Error("f not defined at " + y.to_string());
    num += w * it->second;
  }
  return num / den;
}

// Family of candidate representing measures indexed by vertices.
template <class Real>
struct CCFamily {
  std::map<VertexId, AtomicMeasure<Real>> members;
  Real tol{Real(1e-10)};

  void validate() const {
    for (const auto& [v, P] : members) {
      const auto m = P.total_mass_with_error();
      if (abs_val(m.value - Real(1)) > tol + m.error)
        throw Error("family member at " + v.to_string() + " is not a probability measure");
    }
  }
};

template <class Real>
struct CCVerification {
  Real max_residual{0};
  std::optional<VertexId> failing_vertex;
  bool truncation_caveat = false;
};

// Atom-by-atom check of the consistency condition
//   (1/mu(x)) sum_{y in phi^{-1}(x)} mu(y) P(y,{t}) = t P(x,{t});
// residuals are normalized by t P(x,{t}) + 1.
template <class Real>
CCVerification<Real> verify_cc(const WeightedGraphModel<Real>& m, const CCFamily<Real>& family) {
  CCVerification<Real> out;
  for (const auto& [x, Px] : family.members) {
    auto pre = preimage(m.shape, x);
    if (pre.truncated && !x.is_circuit()) {
      out.truncation_caveat = true;
      continue;
    }
    bool members_ok = true;
    for (const auto& y : pre.vertices)
      if (!family.members.count(y)) members_ok = false;
    if (!members_ok) {
      out.truncation_caveat = true;
      continue;
    }
    if (m.eta_truncated() && x.is_circuit() && x.index == m.shape.kappa)
      out.truncation_caveat = true;

    std::vector<Real> locations;
    for (const auto& a : Px.atoms()) locations.push_back(a.location);
    for (const auto& y : pre.vertices)
      for (const auto& a : family.members.at(y).atoms()) locations.push_back(a.location);
    std::sort(locations.begin(), locations.end());
    locations.erase(std::unique(locations.begin(), locations.end()), locations.end());

    for (const Real& t : locations) {
      Real lhs(0);
      for (const auto& y : pre.vertices) lhs += m.mu(y) * family.members.at(y).mass_at(t);
      lhs /= m.mu(x);
      const Real rhs = t * Px.mass_at(t);
      const Real resid = abs_val(lhs - rhs) / (rhs + Real(1));
      if (resid > out.max_residual) {
        out.max_residual = resid;
        out.failing_vertex = x;
      }
    }
  }
  return out;
}

template <class Real>
struct SubnormalBuildReport {
  Real Theta{0};     // absorbed mass ratio at x_0
  Real vartheta{0};  // delta_1 coefficient of P(x_0)
  Real cc_residual{0};
  std::string notes;
};

namespace detail {

// P-measure obtained by reweighting a seed with t^power / (t^{kappa+1}-1)
// (power <= kappa+1) and scaling by w; tail bounds follow the kernel bound
// on [L, inf).
template <class Real>
AtomicMeasure<Real> reweight_over_shifted(const AtomicMeasure<Real>& S, long power, long kappa,
                                          const Real& w) {
  const long p = kappa + 1;
  std::vector<Atom<Real>> atoms;
  atoms.reserve(S.size());
  for (const auto& a : S.atoms())
    atoms.push_back(
        {a.location, w * a.mass * pow_int(a.location, power) / (pow_int(a.location, p) - Real(1))});
  Real tail_mass(0), tail_moment(0);
  long D = 0;
  if (!S.exact()) {
    const Real L = S.atoms().back().location;
    const Real C = Real(1) / (Real(1) - Real(1) / pow_int(L, p));
    // kernel <= C * t^{power-p} <= C on the tail
    tail_mass = w * C * S.tail_mass_bound();
    D = S.tail_degree() + p - power;
    tail_moment = w * C * std::max(S.tail_moment_bound(), S.tail_mass_bound());
  }
  return AtomicMeasure<Real>::from_unsorted(std::move(atoms), tail_mass, D, tail_moment,
                                            S.provenance());
}

// P(x_{i,j}) from P(x_{i,1}): reweight by t^{j-1} and normalize.
template <class Real>
AtomicMeasure<Real> reweight_power(const AtomicMeasure<Real>& S, long power, const Real& norm) {
  std::vector<Atom<Real>> atoms;
  atoms.reserve(S.size());
  for (const auto& a : S.atoms())
    atoms.push_back({a.location, norm * a.mass * pow_int(a.location, power)});
  Real tail_mass(0), tail_moment(0);
  long D = 0;
  if (!S.exact()) {
    D = S.tail_degree() - power;
    if (D < 0) D = 0;
    tail_mass = norm * S.tail_moment_bound();
    tail_moment = norm * S.tail_moment_bound();
  }
  return AtomicMeasure<Real>(std::move(atoms), tail_mass, D, tail_moment, S.provenance());
}

template <class Real>
AtomicMeasure<Real> merge_measures(std::vector<AtomicMeasure<Real>> parts) {
  std::vector<Atom<Real>> atoms;
  Real tail_mass(0), tail_moment(0);
  long D = 0;
  bool first = true;
  for (auto& p : parts) {
    for (auto& a : p.atoms()) atoms.push_back(a);
    if (!p.exact()) {
      tail_mass += p.tail_mass_bound();
      tail_moment += p.tail_moment_bound();
      D = first ? p.tail_degree() : std::min(D, p.tail_degree());
      first = false;
    }
  }
  return AtomicMeasure<Real>::from_unsorted(std::move(atoms), tail_mass, D, tail_moment);
}

}  // namespace detail

// Construction of a weighted model plus a consistency family from branch
// seeds. The seeds must vanish on [0,1]; the default mu(x_0) makes the
// absorbed ratio Theta exactly 1/2.
template <class Real>
struct SubnormalBuild {
  WeightedGraphModel<Real> model;
  CCFamily<Real> family;
  SubnormalBuildReport<Real> report;
};

template <class Real>
SubnormalBuild<Real> build_subnormal(const std::vector<AtomicMeasure<Real>>& seeds, long kappa,
                                     std::optional<std::type_identity_t<Real>> mu_x0,
                                     const std::vector<std::type_identity_t<Real>>& seed_weights,
                                     long branch_depth = 24, bool eta_infinite = false) {
  if (seeds.empty() || seeds.size() != seed_weights.size())
    throw Error("need one positive weight per seed");
  for (const auto& S : seeds)
    if (!(S.inf_support() > Real(1)))
      throw SeedViolatesI10("seed support must lie in (1, infinity)");
  for (const auto& w : seed_weights)
    if (!(w > Real(0))) throw Error("seed weights must be positive");

  const auto eta = static_cast<std::int64_t>(seeds.size());
  // J_i = int 1/(t^{kappa+1}-1) dP_i  (finite by the support condition)
  std::vector<ValErr<Real>> J;
  Real weighted_J(0);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto v = integral_power_over_shifted(seeds[i], 0, kappa);
    if (!v) throw TruncationExhausted("seed tail cannot bound the base integral");
    J.push_back(*v);
    weighted_J += seed_weights[i] * v->value;
  }
  const Real mu0 = mu_x0 ? *mu_x0 : 2 * weighted_J;
  const Real theta = weighted_J / mu0;
  if (theta > Real(1) + Real(1e-12))
    throw ThetaOutOfRange("mu(x_0) makes the absorbed ratio exceed 1");

  // P(x_0) = sum_i (w_i/mu0) (t^{kappa+1}-1)^{-1} dP_i + (1-Theta) delta_1
  std::vector<AtomicMeasure<Real>> parts;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    parts.push_back(detail::reweight_over_shifted(seeds[i], 0, kappa, seed_weights[i] / mu0));
  if (theta < Real(1))
    parts.push_back(AtomicMeasure<Real>::point_mass(Real(1), Real(1) - theta));
  AtomicMeasure<Real> P0 = detail::merge_measures(std::move(parts));

  WeightedGraphModel<Real> model;
  model.shape = eta_infinite ? GraphShape::infinite(eta, kappa, branch_depth)
                             : GraphShape::finite(eta, kappa, branch_depth);
  model.circuit_mu.resize(static_cast<std::size_t>(kappa) + 1);
  model.circuit_mu[0] = mu0;
  for (long r = 1; r <= kappa; ++r)
    model.circuit_mu[static_cast<std::size_t>(r)] = mu0 * P0.moment(r).value;

  CCFamily<Real> family;
  family.members.emplace(VertexId::circuit(0), P0);
  for (long r = 1; r <= kappa; ++r)
    family.members.emplace(
        VertexId::circuit(r),
        detail::reweight_power(P0, r, mu0 / model.circuit_mu[static_cast<std::size_t>(r)]));

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    std::vector<Real> row(static_cast<std::size_t>(branch_depth));
    row[0] = seed_weights[i];
    for (long jj = 2; jj <= branch_depth; ++jj)
      row[static_cast<std::size_t>(jj - 1)] =
          seed_weights[i] * seeds[i].moment(jj - 1).value;
    model.branch_mu.push_back(std::move(row));
    model.branch_seed.push_back(seeds[i]);
    family.members.emplace(VertexId::branch_vertex(static_cast<std::int64_t>(i) + 1, 1),
                           seeds[i]);
    for (long jj = 2; jj <= branch_depth; ++jj) {
      const Real norm =
          seed_weights[i] /
          model.branch_mu[i][static_cast<std::size_t>(jj - 1)];
      family.members.emplace(VertexId::branch_vertex(static_cast<std::int64_t>(i) + 1, jj),
                             detail::reweight_power(seeds[i], jj - 1, norm));
    }
  }
  model.validate();

  SubnormalBuild<Real> out{std::move(model), std::move(family), {}};
  out.report.Theta = theta;
  out.report.vartheta = Real(1) - theta;
  out.report.cc_residual = verify_cc(out.model, out.family).max_residual;
  return out;
}

template <class Real>
struct ExtendReport {
  Real vartheta{0};
  Real ib_defect{0}, ic_defect{0}, id_defect{0};
  Real cc_residual{0};
};

// Extension of branch seeds to a full consistency family over an existing
// model. Verifies the moment match (i-b), the kappa circuit identities
// (i-c) and the mass-budget inequality (i-d); the (i-d) defect is the exact
// obstruction when it fails.
template <class Real>
std::pair<CCFamily<Real>, ExtendReport<Real>> extend_cc(
    const WeightedGraphModel<Real>& model, const std::vector<AtomicMeasure<Real>>& seeds,
    const Real& tol = Real(1e-9)) {
  const auto& sh = model.shape;
  if (static_cast<std::int64_t>(seeds.size()) != sh.branches())
    throw Error("need one seed per branch");
  ExtendReport<Real> rep;

  // (i-b): seeds represent the branch h-sequences and vanish on [0,1]
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!(seeds[i].inf_support() > Real(1)))
      throw ConditionIBViolated("seed support reaches [0,1]", 0.0);
    const auto& row = model.branch_mu[i];
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto mnt = seeds[i].moment(static_cast<long>(j));
      const Real expect = row[j] / row[0];
      const Real defect = abs_val(mnt.value - expect) / (abs_val(expect) + Real(1));
      rep.ib_defect = std::max(rep.ib_defect, defect);
      if (defect > tol + mnt.error)
        throw ConditionIBViolated("seed moments disagree with branch weights at j=" +
                                      std::to_string(j + 1),
                                  to_double(defect));
    }
  }
  // (i-c)
  for (long r = 1; r <= sh.kappa; ++r) {
    Real lhs = model.mu_x0() / model.mu_circuit(r);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto I = integral_ratio_shifted(seeds[i], r, sh.kappa);
      lhs += model.branch_mu[i].front() / model.mu_circuit(r) * I.value;
    }
    const Real defect = abs_val(lhs - Real(1));
    rep.ic_defect = std::max(rep.ic_defect, defect);
    if (defect > tol)
      throw ConditionICViolated("circuit identity fails at r=" + std::to_string(r),
                                to_double(defect));
  }
  // (i-d)
  Real S(0);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto J = integral_power_over_shifted(seeds[i], 0, sh.kappa);
    if (!J) throw TruncationExhausted("seed tail cannot bound the base integral");
    S += model.branch_mu[i].front() / model.mu_x0() * J->value;
  }
  rep.id_defect = S - Real(1);
  if (S > Real(1) + tol)
    throw ConditionIDViolated("mass budget exceeded", to_double(S - Real(1)));

  const Real vartheta = Real(1) - S;
  rep.vartheta = vartheta;

  CCFamily<Real> family;
  for (long r = 0; r <= sh.kappa; ++r) {
    std::vector<AtomicMeasure<Real>> parts;
    for (std::size_t i = 0; i < seeds.size(); ++i)
      parts.push_back(detail::reweight_over_shifted(
          seeds[i], r, sh.kappa, model.branch_mu[i].front() / model.mu_circuit(r)));
    if (vartheta > Real(0))
      parts.push_back(AtomicMeasure<Real>::point_mass(
          Real(1), vartheta * model.mu_x0() / model.mu_circuit(r)));
    family.members.emplace(VertexId::circuit(r), detail::merge_measures(std::move(parts)));
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    family.members.emplace(VertexId::branch_vertex(static_cast<std::int64_t>(i) + 1, 1),
                           seeds[i]);
    for (long jj = 2; jj <= sh.branch_depth; ++jj) {
      const Real norm = model.branch_mu[i].front() /
                        model.branch_mu[i][static_cast<std::size_t>(jj - 1)];
      family.members.emplace(VertexId::branch_vertex(static_cast<std::int64_t>(i) + 1, jj),
                             detail::reweight_power(seeds[i], jj - 1, norm));
    }
  }
  rep.cc_residual = verify_cc(model, family).max_residual;
  return {std::move(family), std::move(rep)};
}

// eta = 1 model with a prescribed h-sequence at x_0, built from the
// difference weights mu(x_{1,n+1}) = mu(x_0)(gamma_{n+kappa+1} - gamma_n).
template <class Real>
WeightedGraphModel<Real> build_from_target_h0(const MomentSequence<Real>& gamma, long kappa,
                                              const Real& mu_x0, long branch_depth = 0) {
  const auto& g = gamma.values;
  const long N = static_cast<long>(g.size()) - 1;
  if (N < kappa + 1) throw Error("sequence too short for the requested kappa");
  if (abs_val(g[0] - Real(1)) > Real(1e-12)) throw Error("gamma_0 must be 1");
  for (const auto& v : g)
    if (!(v > Real(0))) throw NonPositiveEntry("gamma entries must be positive");
  for (long n = 0; n + kappa + 1 <= N; ++n)
    if (!(g[static_cast<std::size_t>(n + kappa + 1)] > g[static_cast<std::size_t>(n)]))
      throw MonotonicityViolated("gamma_{n+kappa+1} - gamma_n must be positive at n=" +
                                 std::to_string(n));

  const long depth = branch_depth > 0 ? std::min(branch_depth, N - kappa) : N - kappa;
  WeightedGraphModel<Real> model;
  model.shape = GraphShape::finite(1, kappa, depth);
  model.circuit_mu.resize(static_cast<std::size_t>(kappa) + 1);
  model.circuit_mu[0] = mu_x0;
  for (long r = 1; r <= kappa; ++r)
    model.circuit_mu[static_cast<std::size_t>(r)] = mu_x0 * g[static_cast<std::size_t>(r)];
  std::vector<Real> row(static_cast<std::size_t>(depth));
  for (long n = 0; n < depth; ++n)
    row[static_cast<std::size_t>(n)] =
        mu_x0 * (g[static_cast<std::size_t>(n + kappa + 1)] - g[static_cast<std::size_t>(n)]);
  model.branch_mu.push_back(std::move(row));
  model.branch_seed.push_back(std::nullopt);
  model.validate();

  RnTable<Real> table(model, N - kappa - 1);
  for (long n = 0; n <= table.max_available_x0() && n <= N - kappa - 1; ++n) {
    const auto h = table.value(VertexId::circuit(0), n);
    if (abs_val(h.value - g[static_cast<std::size_t>(n)]) >
        Real(1e-10) * (abs_val(g[static_cast<std::size_t>(n)]) + Real(1)))
      throw Error("constructed model does not reproduce the target sequence");
  }
  return model;
}

// Truncation-level subnormality evidence; never a proof. The determinacy
// hypotheses that cannot be checked from finite data are restated verbatim
// in the report.
template <class Real>
struct SubnormalityEvidence {
  std::map<VertexId, HankelVerdict> hankel_at;
  bool hankel_all_pass = true;
  ShiftDominanceReport<Real> shift_dominance_x0;  // the eta = 1 criterion
  CarlemanClass carleman_strided = CarlemanClass::Inconclusive;
  bool truncation_evidence_only = true;
  std::vector<std::string> unproven_hypotheses{
      "the difference sequence {h_{n+kappa+1}(x_0) - h_n(x_0)} is S-determinate",
      "the strided sequence {h_{j(kappa+1)}(x_0)} is S-determinate",
      "{h_n(x_kappa) + c} is an S-determinate Stieltjes moment sequence for every c > 0",
  };
};

template <class Real>
SubnormalityEvidence<Real> subnormality_evidence(const WeightedGraphModel<Real>& model,
                                                 long max_n, const Real& tol) {
  SubnormalityEvidence<Real> ev;
  RnTable<Real> table(model, max_n);
  const long avail = std::min<long>(max_n, table.max_available_x0());

  auto sequence_at = [&](const VertexId& v, long limit) {
    MomentSequence<Real> s;
    for (long n = 0; n <= limit; ++n) {
      try {
        auto h = table.value(v, n);
        s.values.push_back(h.value);
        s.error_bounds.push_back(h.error);
      } catch (const Error&) {
        break;
      }
    }
    return s;
  };

  std::vector<VertexId> probes{VertexId::circuit(0), VertexId::circuit(model.shape.kappa)};
  for (std::int64_t i = 1; i <= model.shape.branches(); ++i)
    probes.push_back(VertexId::branch_vertex(i, 1));
  for (const auto& v : probes) {
    if (ev.hankel_at.count(v)) continue;
    auto s = sequence_at(v, avail);
    if (s.values.size() < 3) continue;
    const auto hr = hankel_report(s, tol);
    ev.hankel_at[v] = hr.verdict;
    if (hr.verdict != HankelVerdict::StieltjesConsistent) ev.hankel_all_pass = false;
  }

  ev.shift_dominance_x0 = shift_dominance(sequence_at(VertexId::circuit(0), avail), tol);

  MomentSequence<Real> strided;
  for (long jj = 0; jj * (model.shape.kappa + 1) <= avail; ++jj)
    strided.values.push_back(
        table.value(VertexId::circuit(0), jj * (model.shape.kappa + 1)).value);
  if (strided.values.size() >= 2 && strided.values.front() > Real(0))
    ev.carleman_strided = carleman_diagnostic(strided).growth_class;
  return ev;
}

}  // namespace onecircuit

#endif
