#ifndef ONECIRCUIT_MEASURES_HPP
#define ONECIRCUIT_MEASURES_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "onecircuit/errors.hpp"
#include "onecircuit/scalar.hpp"

namespace onecircuit {

template <class Real>
struct Atom {
  Real location{0};  // support point, >= 0
  Real mass{0};      // > 0
};

// Increasing affine map t -> scale*(t + shift), scale > 0.
template <class Real>
struct Homothety {
  Real scale{1};
  Real shift{0};

  Real operator()(const Real& t) const { return scale * (t + shift); }

  Homothety inverse() const { return {Real(1) / scale, -shift * scale}; }

  // composition: (g.after(h))(t) = g(h(t))
  Homothety after(const Homothety& h) const {
    return {scale * h.scale, h.shift + shift / h.scale};
  }
};

// Finite truncation of a positive atomic measure on [0, inf). The omitted
// tail is summarised by three numbers: a bound on its mass, and a bound on
// its D-th power moment. Truncation always keeps the smallest atoms, so
// inf_support is exact.
template <class Real>
class AtomicMeasure {
 public:
  AtomicMeasure() = default;

  AtomicMeasure(std::vector<Atom<Real>> atoms, Real tail_mass_bound = Real(0),
                long tail_degree = 0, Real tail_moment_bound = Real(0),
                std::string provenance = {})
      : atoms_(std::move(atoms)),
        tail_mass_bound_(std::move(tail_mass_bound)),
        tail_degree_(tail_degree),
        tail_moment_bound_(std::move(tail_moment_bound)),
        provenance_(std::move(provenance)) {
    validate();
  }

  // Sorts by location and coalesces exactly equal locations.
  static AtomicMeasure from_unsorted(std::vector<Atom<Real>> atoms,
                                     Real tail_mass_bound = Real(0), long tail_degree = 0,
                                     Real tail_moment_bound = Real(0),
                                     std::string provenance = {}) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom<Real>& a, const Atom<Real>& b) { return a.location < b.location; });
    std::vector<Atom<Real>> merged;
    for (auto& a : atoms) {
      if (a.mass == Real(0)) continue;
      if (!merged.empty() && merged.back().location == a.location)
        merged.back().mass += a.mass;
      else
        merged.push_back(a);
    }
    return AtomicMeasure(std::move(merged), std::move(tail_mass_bound), tail_degree,
                         std::move(tail_moment_bound), std::move(provenance));
  }

  static AtomicMeasure point_mass(Real location, Real mass = Real(1)) {
    return AtomicMeasure({{std::move(location), std::move(mass)}});
  }

  const std::vector<Atom<Real>>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Real& tail_mass_bound() const { return tail_mass_bound_; }
  long tail_degree() const { return tail_degree_; }
  const Real& tail_moment_bound() const { return tail_moment_bound_; }
  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  bool exact() const { return tail_mass_bound_ == Real(0); }

  Real inf_support() const {
    if (atoms_.empty()) throw EmptyMeasure("inf_support of empty measure");
    return atoms_.front().location;
  }

  Real total_mass() const {
    Real s(0);
    for (const auto& a : atoms_) s += a.mass;
    return s;
  }

  // Mass at an exactly matching stored location; 0 if absent.
  Real mass_at(const Real& location) const {
    for (const auto& a : atoms_) {
      if (a.location == location) return a.mass;
      if (a.location > location) break;
    }
    return Real(0);
  }

  // n-th power moment of the truncated atom list plus a bound on the
  // contribution of the omitted tail. The tail lives in [L, inf) with
  // L = last kept location; when L >= 1 every power moment of degree
  // <= tail_degree is bounded by tail_moment_bound, and when L < 1 the
  // tail mass bound scaled by L^n covers a compact-carried remainder.
  ValErr<Real> moment(long n) const {
    ValErr<Real> r;
    for (const auto& a : atoms_) r.value += a.mass * pow_int(a.location, n);
    if (exact()) return r;
    if (n > tail_degree_)
      throw TailDegreeExceeded("moment degree " + std::to_string(n) +
                               " exceeds tail degree " + std::to_string(tail_degree_));
    const Real last = atoms_.empty() ? Real(0) : atoms_.back().location;
    if (last >= Real(1)) {
      r.error = (n == 0) ? std::min(tail_mass_bound_, tail_moment_bound_) : tail_moment_bound_;
    } else {
      r.error = tail_mass_bound_ * pow_int(last, n);
    }
    return r;
  }

  ValErr<Real> total_mass_with_error() const {
    ValErr<Real> r{total_mass(), tail_mass_bound_};
    return r;
  }

  // Weighted integral of an arbitrary kernel over the kept atoms; the
  // caller supplies its own tail treatment.
  template <class F>
  Real integrate_atoms(F&& kernel) const {
    Real s(0);
    for (const auto& a : atoms_) s += a.mass * kernel(a.location);
    return s;
  }

 private:
  void validate() const {
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (!(atoms_[k].mass > Real(0))) throw Error("atom mass must be positive");
      if (atoms_[k].location < Real(0)) throw Error("atom location must be nonnegative");
      if (k > 0 && !(atoms_[k - 1].location < atoms_[k].location))
        throw Error("atom locations must be strictly increasing");
    }
    if (tail_mass_bound_ < Real(0) || tail_moment_bound_ < Real(0) || tail_degree_ < 0)
      throw Error("tail bounds must be nonnegative");
  }

  std::vector<Atom<Real>> atoms_;
  Real tail_mass_bound_{0};
  long tail_degree_{0};
  Real tail_moment_bound_{0};
  std::string provenance_;
};

// Image measure under an increasing homothety: atom (t, w) -> (psi(t), w).
// The result must again live on [0, inf). Tail bounds are carried over,
// with the moment bound inflated by the worst-case growth factor of psi on
// [L, inf).
template <class Real>
AtomicMeasure<Real> pushforward(const AtomicMeasure<Real>& m, const Homothety<Real>& h) {
  std::vector<Atom<Real>> out;
  out.reserve(m.size());
  for (const auto& a : m.atoms()) {
    Real loc = h(a.location);
    if (loc < Real(0)) throw NegativeSupport("pushforward maps an atom below 0");
    out.push_back({std::move(loc), a.mass});
  }
  Real tail_moment = m.tail_moment_bound();
  if (!m.exact() && !m.atoms().empty()) {
    const Real L = m.atoms().back().location;
    Real factor = h.scale;
    if (L > Real(0) && h.shift > Real(0)) factor = h.scale * (Real(1) + h.shift / L);
    // psi(t)^D <= factor^D * t^D on [L, inf)
    tail_moment *= pow_int(factor, m.tail_degree());
  }
  return AtomicMeasure<Real>(std::move(out), m.tail_mass_bound(), m.tail_degree(),
                             std::move(tail_moment), m.provenance());
}

template <class Real>
AtomicMeasure<Real> scale_mass(const AtomicMeasure<Real>& m, const Real& r) {
  if (!(r > Real(0))) throw Error("scale factor must be positive");
  std::vector<Atom<Real>> out = m.atoms();
  for (auto& a : out) a.mass *= r;
  return AtomicMeasure<Real>(std::move(out), m.tail_mass_bound() * r, m.tail_degree(),
                             m.tail_moment_bound() * r, m.provenance());
}

// Deletes atoms at exactly matching stored locations.
template <class Real>
AtomicMeasure<Real> remove_atoms(const AtomicMeasure<Real>& m, const std::vector<Real>& locations) {
  std::vector<Atom<Real>> out = m.atoms();
  for (const Real& loc : locations) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Atom<Real>& a) { return a.location == loc; });
    if (it == out.end())
      throw AtomNotFound("no atom stored at the requested location");
    out.erase(it);
  }
  return AtomicMeasure<Real>(std::move(out), m.tail_mass_bound(), m.tail_degree(),
                             m.tail_moment_bound(), m.provenance());
}

template <class Real>
Real inf_support(const AtomicMeasure<Real>& m) {
  return m.inf_support();
}

}  // namespace onecircuit

#endif
