#ifndef ONECIRCUIT_EXOTIC_HPP
#define ONECIRCUIT_EXOTIC_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "onecircuit/comp_op.hpp"
#include "onecircuit/errors.hpp"
#include "onecircuit/measures.hpp"
#include "onecircuit/moments.hpp"
#include "onecircuit/qspecial.hpp"
#include "onecircuit/scalar.hpp"

namespace onecircuit {

// Partition of the truncated atom list of a measure into disjoint blocks.
// tail_block names the block that owns the truncation tail (-1 when the
// tail is unassigned, e.g. all-singleton partitions of a truncation).
struct Partition {
  std::vector<std::vector<std::size_t>> blocks;
  int tail_block = -1;

  void validate(std::size_t atom_count) const {
    std::vector<bool> seen(atom_count, false);
    for (const auto& b : blocks) {
      if (b.empty()) throw EmptyBlock("partition blocks must be nonempty");
      for (auto idx : b) {
        if (idx >= atom_count || seen[idx]) throw Error("partition must be disjoint and in range");
        seen[idx] = true;
      }
    }
    for (bool s : seen)
      if (!s) throw Error("partition must cover all truncated atoms");
    if (tail_block >= static_cast<int>(blocks.size()))
      throw Error("tail_block out of range");
  }
};

template <class Real>
struct SeedPairReport {
  bool inf_supports_ok = false;  // inf supp nu = 1 < inf supp tau
  bool mass_identity_ok = false;          // nu(R+) = 1 + nu({1})
  bool power_condition_ok = false;         // 1 + int t^-kappa dtau > tau(R+)
  long moment_agreement_depth = -1;  // depth to which nu and tau moments agree
  bool nu_atom_at_one = false;
  bool pass(long required_depth) const {
    return inf_supports_ok && mass_identity_ok && power_condition_ok && nu_atom_at_one &&
           moment_agreement_depth >= required_depth;
  }
  std::string provenance;  // N-extremality of (nu, tau) is trusted metadata
};

// Checks of the seed-pair conditions. N-extremality itself is not
// numerically certifiable; what is checked is the moment agreement of nu
// and tau up to moment_depth within the combined error bounds.
template <class Real>
SeedPairReport<Real> validate_seed_pair(const AtomicMeasure<Real>& nu, const AtomicMeasure<Real>& tau,
                           long kappa, long moment_depth, const Real& tol = Real(1e-10)) {
  SeedPairReport<Real> rep;
  rep.provenance = nu.provenance() + " / " + tau.provenance();
  rep.inf_supports_ok = abs_val(nu.inf_support() - Real(1)) <= tol && tau.inf_support() > Real(1);
  const Real nu1 = nu.mass_at(Real(1));
  rep.nu_atom_at_one = nu1 > Real(0);
  {
    const auto mass = nu.total_mass_with_error();
    rep.mass_identity_ok = abs_val(mass.value - (Real(1) + nu1)) <= tol * (Real(1) + nu1) + mass.error;
  }
  if (kappa == 0) {
    rep.power_condition_ok = true;  // 1 + tau(R+) > tau(R+)
  } else {
    const Real inv = tau.integrate_atoms(
        [&](const Real& t) { return Real(1) / pow_int(t, kappa); });
    const auto mass = tau.total_mass_with_error();
    // the omitted tail adds at most tail_mass to the right side
    rep.power_condition_ok = Real(1) + inv > mass.value + mass.error;
  }
  long depth = -1;
  for (long n = 0; n <= moment_depth; ++n) {
    ValErr<Real> a, b;
    try {
      a = nu.moment(n);
      b = tau.moment(n);
    } catch (const TailDegreeExceeded&) {
      break;
    }
    const Real scale = abs_val(a.value) + abs_val(b.value) + Real(1);
    if (abs_val(a.value - b.value) > tol * scale + a.error + b.error) break;
    depth = n;
  }
  rep.moment_agreement_depth = depth;
  return rep;
}

template <class Real>
struct ExoticDiagnostics {
  std::vector<Real> c;  // block normalizers
  Real xi{0};
  SeedPairReport<Real> seed_checks;
  long loop_moment_agreement_depth = -1;  // moments of P(x_kappa) vs h_n(x_kappa)
  Real loop_test_left{0}, loop_test_right{0};
  Real lambda{0};
};

template <class Real>
struct ExoticBuild {
  WeightedGraphModel<Real> model;
  std::vector<AtomicMeasure<Real>> seeds;  // P(x_{i,1})
  AtomicMeasure<Real> p_xkappa;
  ExoticDiagnostics<Real> diagnostics;
};

// The partition functional Lambda together with its attainable bounds.
template <class Real>
struct LambdaResult {
  Real value{0};
  Real inf_bound{0};
  Real sup_bound{0};
};

template <class Real>
LambdaResult<Real> lambda_functional(const AtomicMeasure<Real>& tau, const Partition& part) {
  if (!(tau.inf_support() > Real(1)))
    throw ParameterOutOfRange("lambda functional needs inf supp tau > 1");
  part.validate(tau.size());
  const auto& atoms = tau.atoms();
  LambdaResult<Real> out;
  for (const auto& block : part.blocks) {
    Real lin(0), quad(0);
    for (auto idx : block) {
      const auto& a = atoms[idx];
      lin += (a.location - Real(1)) * a.mass;
      quad += a.location * (a.location - Real(1)) * a.mass;
    }
    if (!(quad > Real(0))) throw EmptyBlock("block carries no mass");
    out.value += lin * lin / quad;
  }
  Real lin(0), quad(0), ratio(0);
  for (const auto& a : atoms) {
    lin += (a.location - Real(1)) * a.mass;
    quad += a.location * (a.location - Real(1)) * a.mass;
    ratio += (a.location - Real(1)) / a.location * a.mass;
  }
  out.inf_bound = lin * lin / quad;
  out.sup_bound = ratio;
  return out;
}

// Canonical partitions: first block = the k smallest atoms, then
// singletons, then the tail block. k = 1 gives the eta-block variant with
// eta-1 leading singletons.
inline Partition canonical_partition(std::size_t atom_count, std::int64_t eta, std::int64_t k) {
  if (eta < 2) throw Error("canonical partitions need eta >= 2");
  if (k < 1) throw Error("k must be >= 1");
  Partition part;
  const std::size_t head = static_cast<std::size_t>(k);
  const std::size_t singles = static_cast<std::size_t>(eta - 2);
  if (head + singles + 1 > atom_count)
    throw Error("not enough truncated atoms for this partition");
  std::vector<std::size_t> first(head);
  for (std::size_t idx = 0; idx < head; ++idx) first[idx] = idx;
  part.blocks.push_back(std::move(first));
  std::size_t next = head;
  for (std::size_t s = 0; s < singles; ++s) part.blocks.push_back({next++});
  std::vector<std::size_t> tail;
  for (std::size_t idx = next; idx < atom_count; ++idx) tail.push_back(idx);
  part.blocks.push_back(std::move(tail));
  part.tail_block = static_cast<int>(part.blocks.size()) - 1;
  return part;
}

inline Partition all_singleton_partition(std::size_t atom_count) {
  Partition part;
  for (std::size_t idx = 0; idx < atom_count; ++idx) part.blocks.push_back({idx});
  part.tail_block = -1;
  return part;
}

inline Partition trivial_partition(std::size_t atom_count) {
  Partition part;
  std::vector<std::size_t> all(atom_count);
  for (std::size_t idx = 0; idx < atom_count; ++idx) all[idx] = idx;
  part.blocks.push_back(std::move(all));
  part.tail_block = 0;
  return part;
}

// Assembly of the weighted model and branch seeds from an N-extremal pair
// (nu, tau) and a partition of tau's support. One branch per block; the
// block owning the truncation tail carries tau's tail bounds.
template <class Real>
ExoticBuild<Real> build_exotic(const AtomicMeasure<Real>& nu, const AtomicMeasure<Real>& tau,
                               const Partition& part, long kappa, const Real& mu_xkappa,
                               long branch_depth = 16, bool eta_infinite = false,
                               long pair_moment_depth = 8) {
  auto checks = validate_seed_pair(nu, tau, kappa, pair_moment_depth);
  if (!checks.pass(pair_moment_depth))
    throw SeedPairViolated("seed pair fails its entry checks (agreement depth " +
                           std::to_string(checks.moment_agreement_depth) + ")");
  part.validate(tau.size());

  const long p = kappa + 1;
  const auto& atoms = tau.atoms();
  const std::size_t n_blocks = part.blocks.size();

  ExoticBuild<Real> out;
  out.diagnostics.seed_checks = checks;

  // seeds: P(x_{i,1}) = c_i * (t^{kappa+1}-1)/t^kappa restricted to block i
  std::vector<Real> block_integral(n_blocks, Real(0));
  for (std::size_t b = 0; b < n_blocks; ++b) {
    std::vector<Atom<Real>> seed_atoms;
    for (auto idx : part.blocks[b]) {
      const auto& a = atoms[idx];
      const Real weight = (pow_int(a.location, p) - Real(1)) / pow_int(a.location, kappa);
      seed_atoms.push_back({a.location, a.mass * weight});
      block_integral[b] += a.mass * weight;
    }
    Real tail_mass_b(0), tail_moment_b(0);
    long D = 0;
    if (static_cast<int>(b) == part.tail_block && !tau.exact()) {
      // (t^{kappa+1}-1)/t^kappa <= t, so the omitted block weight is
      // bounded by tau's degree-1 tail moment
      if (tau.tail_degree() < 1)
        throw TruncationExhausted("tau tail degree too small for the block integrals");
      tail_mass_b = tau.tail_moment_bound();
      D = tau.tail_degree() - 1;
      tail_moment_b = tau.tail_moment_bound();
    }
    const Real c_b = Real(1) / block_integral[b];
    out.diagnostics.c.push_back(c_b);
    std::vector<Atom<Real>> normalized;
    normalized.reserve(seed_atoms.size());
    for (auto& a : seed_atoms) normalized.push_back({a.location, c_b * a.mass});
    out.seeds.push_back(AtomicMeasure<Real>::from_unsorted(
        std::move(normalized), c_b * tail_mass_b, D, c_b * tail_moment_b,
        "block " + std::to_string(b + 1) + " of " + tau.provenance()));
  }

  // model weights
  WeightedGraphModel<Real> model;
  const auto eta = static_cast<std::int64_t>(n_blocks);
  model.shape = eta_infinite ? GraphShape::infinite(eta, kappa, branch_depth)
                             : GraphShape::finite(eta, kappa, branch_depth);
  model.circuit_mu.assign(static_cast<std::size_t>(kappa) + 1, Real(0));
  model.circuit_mu[static_cast<std::size_t>(kappa)] = mu_xkappa;
  const Real nu1 = nu.mass_at(Real(1));
  for (long r = 0; r < kappa; ++r) {
    const Real inv = tau.integrate_atoms(
        [&](const Real& t) { return Real(1) / pow_int(t, kappa - r); });
    model.circuit_mu[static_cast<std::size_t>(r)] = mu_xkappa * (inv - nu1);
  }
  for (std::size_t b = 0; b < n_blocks; ++b) {
    std::vector<Real> row(static_cast<std::size_t>(branch_depth));
    const Real w1 = mu_xkappa / out.diagnostics.c[b];
    row[0] = w1;
    for (long jj = 2; jj <= branch_depth; ++jj)
      row[static_cast<std::size_t>(jj - 1)] = w1 * out.seeds[b].moment(jj - 1).value;
    model.branch_mu.push_back(std::move(row));
    model.branch_seed.push_back(out.seeds[b]);
  }
  if (eta_infinite) {
    // Every omitted branch is a singleton block {theta} of tau's omitted
    // tail: mu(x_{i,1})/mu(x_kappa) <= theta tau({theta}) and
    // h_m(x_{i,1}) = theta^m, so the degree-(m+1) tail moment of tau
    // bounds the missing sums.
    if (tau.tail_degree() >= 1) {
      model.eta_mu_tail = tau.tail_moment_bound();
      model.eta_loop_tail = tau.tail_mass_bound();
      for (long mdeg = 0; mdeg + 1 <= tau.tail_degree(); ++mdeg)
        model.eta_h_tail.push_back(tau.tail_moment_bound());
    }
  }
  model.validate();
  out.model = std::move(model);

  out.p_xkappa = nu1 > Real(0) ? remove_atoms(nu, {Real(1)}) : nu;
  out.p_xkappa.set_provenance("P(x_kappa): " + nu.provenance() + " minus the atom at 1");

  // xi = mu(x_0)/mu(x_kappa) - sum_i (mu(x_{i,1})/mu(x_kappa)) J_i
  Real S(0);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    auto J = integral_power_over_shifted(out.seeds[b], 0, kappa);
    if (!J) throw TruncationExhausted("seed tail too short for the xi integral");
    S += out.model.branch_mu[b].front() / mu_xkappa * J->value;
  }
  out.diagnostics.xi = out.model.mu_x0() / mu_xkappa - S;

  // agreement of the P(x_kappa) moments with the h table at the loop
  {
    long depth = -1;
    const long probe = std::min<long>(pair_moment_depth + 2, 12);
    RnTable<Real> table(out.model, probe + kappa);
    for (long n = 0; n <= probe; ++n) {
      ValErr<Real> h, mnt;
      try {
        h = table.value(VertexId::circuit(kappa), n);
        mnt = out.p_xkappa.moment(n);
      } catch (const Error&) {
        break;
      }
      const Real scale = abs_val(mnt.value) + Real(1);
      if (abs_val(h.value - mnt.value) > Real(1e-9) * scale + h.error + mnt.error) break;
      depth = n;
    }
    out.diagnostics.loop_moment_agreement_depth = depth;
  }

  if (kappa == 0) {
    auto hyp = hyponormality(out.model);
    if (hyp.loop_test_left) out.diagnostics.loop_test_left = *hyp.loop_test_left;
    if (hyp.loop_test_right) out.diagnostics.loop_test_right = *hyp.loop_test_right;
    out.diagnostics.lambda = lambda_functional(tau, part).value;
  }
  return out;
}

template <class Real>
struct XiCheck {
  Real xi{0};
  Real nu_mass_at_one{0};
  Real max_identity_residual{0};  // h_n(x_kappa) against the xi moment identity
};

template <class Real>
XiCheck<Real> xi_check(const ExoticBuild<Real>& build, const AtomicMeasure<Real>& nu,
                       long max_n = 8) {
  XiCheck<Real> out;
  out.xi = build.diagnostics.xi;
  out.nu_mass_at_one = nu.mass_at(Real(1));
  const auto& model = build.model;
  RnTable<Real> table(model, max_n + model.shape.kappa);
  for (long n = 0; n <= max_n; ++n) {
    ValErr<Real> h;
    try {
      h = table.value(VertexId::circuit(model.shape.kappa), n);
    } catch (const Error&) {
      break;
    }
    Real rhs = out.xi;
    bool ok = true;
    for (std::size_t b = 0; b < build.seeds.size(); ++b) {
      auto I = integral_power_over_shifted(build.seeds[b], n + model.shape.kappa,
                                           model.shape.kappa);
      if (!I) {
        ok = false;
        break;
      }
      rhs += model.branch_mu[b].front() / model.mu_xkappa() * I->value;
    }
    if (!ok) break;
    const Real resid = abs_val(h.value - rhs) / (abs_val(h.value) + Real(1));
    out.max_identity_residual = std::max(out.max_identity_residual, resid);
  }
  return out;
}

enum class HomothetySearchMode { LeadingAtoms, FullSum, PowerCondition };

template <class Real>
struct HomothetySearchQuery {
  HomothetySearchMode mode = HomothetySearchMode::FullSum;
  long m = 1;      // LeadingAtoms: number of leading atoms
  long kappa = 1;  // PowerCondition exponent
};

template <class Real>
struct HomothetySearchGrid {
  Real lo{Real(1) / 10000};
  Real hi{10000};
  int points = 400;
  int bisection_steps = 60;
};

namespace detail {

// predicate evaluated directly on the transformed measure beta^(a)
template <class Real>
bool homothety_search_predicate(const AtomicMeasure<Real>& beta, const HomothetySearchQuery<Real>& query,
                      const Real& a) {
  const Homothety<Real> psi{Real(1) / a, a};  // t -> 1 + t/a
  const auto beta_a = pushforward(beta, psi);
  switch (query.mode) {
    case HomothetySearchMode::LeadingAtoms:
    case HomothetySearchMode::FullSum: {
      const long m = query.mode == HomothetySearchMode::FullSum
                         ? static_cast<long>(beta_a.size())
                         : std::min<long>(query.m, static_cast<long>(beta_a.size()));
      Real lhs(0);
      for (long idx = 0; idx < m; ++idx) {
        const auto& atom = beta_a.atoms()[static_cast<std::size_t>(idx)];
        lhs += (atom.location - Real(1)) / atom.location * atom.mass;
      }
      // the truncated lhs underestimates; overestimating t1 overestimates
      // the (increasing) right side, so the test stays conservative
      Real t1(0);
      for (const auto& atom : beta_a.atoms()) t1 += (atom.location - Real(1)) * atom.mass;
      if (!beta_a.exact()) {
        if (beta_a.tail_degree() < 1)
          throw TruncationExhausted("tail degree too small for the search right side");
        t1 += beta_a.tail_moment_bound();
      }
      return lhs > t1 / (Real(1) + t1);
    }
    case HomothetySearchMode::PowerCondition: {
      Real inv(0), mass(0);
      for (const auto& atom : beta_a.atoms()) {
        inv += atom.mass / pow_int(atom.location, query.kappa);
        mass += atom.mass;
      }
      return Real(1) + inv > mass + beta.tail_mass_bound();
    }
  }
  return false;
}

}  // namespace detail

// Homothety-parameter search of the transformed-measure inequalities.
// FiniteM / FullSum hold for small a and the scan returns the smallest
// passing grid point (refined by bisection when the grid edge fails);
// Kappa holds for large a and the scan returns the largest passing point.
template <class Real>
Real homothety_search(const AtomicMeasure<Real>& beta, const HomothetySearchQuery<Real>& query,
                   const HomothetySearchGrid<Real>& grid = {}) {
  using std::exp;
  using std::log;
  if (!(beta.total_mass() > Real(1)))
    throw ParameterOutOfRange("homothety search needs total mass > 1");
  if (!(beta.inf_support() > Real(0)))
    throw ParameterOutOfRange("homothety search needs inf support > 0");

  std::vector<Real> pts(static_cast<std::size_t>(grid.points));
  const Real step = (log(grid.hi) - log(grid.lo)) / (grid.points - 1);
  for (int i = 0; i < grid.points; ++i) pts[static_cast<std::size_t>(i)] = exp(log(grid.lo) + i * step);

  auto pred = [&](const Real& a) { return detail::homothety_search_predicate(beta, query, a); };

  if (query.mode == HomothetySearchMode::PowerCondition) {
    // scans upward; the inequality holds for large parameters, so the
    // last passing point is the answer
    int last_pass = -1;
    for (int i = 0; i < grid.points; ++i)
      if (pred(pts[static_cast<std::size_t>(i)])) last_pass = i;
    if (last_pass < 0)
      throw NotFound("no grid point satisfies the power inequality; widen the grid");
    return pts[static_cast<std::size_t>(last_pass)];
  }

  int first_pass = -1;
  for (int i = 0; i < grid.points; ++i) {
    if (pred(pts[static_cast<std::size_t>(i)])) {
      first_pass = i;
      break;
    }
  }
  if (first_pass < 0) throw NotFound("no grid point satisfies the inequality; widen the grid");
  if (first_pass == 0) return pts.front();
  // refine the bracket [fail, pass] to its boundary, keeping a passing point
  Real lo = pts[static_cast<std::size_t>(first_pass - 1)];
  Real hi = pts[static_cast<std::size_t>(first_pass)];
  for (int i = 0; i < grid.bisection_steps; ++i) {
    const Real mid = (lo + hi) / 2;
    (pred(mid) ? hi : lo) = mid;
  }
  if (!pred(hi)) throw NotFound("bisection lost the bracket");
  return hi;
}

enum class ExoticSourceKind { ASC, Quartic };

template <class Real>
struct ExoticSource {
  ExoticSourceKind kind = ExoticSourceKind::Quartic;
  Real a{2};  // ASC parameters
  Real q{Real(1) / 10};
};

template <class Real>
struct PipelineReport {
  ExoticBuild<Real> build;
  HyponormalityReport<Real> hyponormality;
  std::map<VertexId, HankelVerdict> hankel_evidence;
  Real id_defect{0};           // measured (i-d) violation, when it fails
  bool id_violated = false;
  Real homothety_parameter{0}; // the a used for the final transform
  Real scale_r{0};
  Real beta_min_atom_mass{0};         // mass of the smallest atom of the scaled pair
  std::string notes;
};

// Full construction pipeline: scaled seed pair -> homothety search ->
// partition -> model build -> hyponormality and Hankel evidence. kappa = 0
// is the non-hyponormal construction proper (the transform parameter comes
// from the leading-atom or full-sum inequality); kappa >= 1 builds the
// family-gap variant, with the parameter taken large enough for the power
// condition instead.
template <class Real>
PipelineReport<Real> exotic_pipeline(std::int64_t eta, bool eta_infinite,
                                      const ExoticSource<Real>& source, long atom_count,
                                      long branch_depth = 12, long hankel_max_order = 4,
                                      const Real& mu_xkappa = Real(1), long kappa = 0) {
  if (!eta_infinite && eta < 1) throw Error("eta must be >= 1");
  if (kappa < 0) throw Error("kappa must be >= 0");

  AtomicMeasure<Real> zeta, rho;
  std::string source_note;
  if (source.kind == ExoticSourceKind::ASC) {
    if (!(source.a > Real(1)) || !(source.q * source.a < Real(1)))
      throw ParameterOutOfRange("ASC source needs a > 1 and q < 1/a");
    const Real pred = q_pochhammer(source.q / source.a, source.q, kInfiniteProduct).value +
                      q_pochhammer(source.a * source.q, source.q, kInfiniteProduct).value;
    if (!(pred > Real(1)))
      throw EulerPredicateFailed("(q/a;q)_inf + (aq;q)_inf <= 1 at the requested (a,q)");
    const QPair<Real> p{source.a, source.q};
    const Homothety<Real> down{Real(1), Real(-1)};  // t -> t - 1
    zeta = pushforward(asc_beta_measure(p, atom_count), down);
    rho = pushforward(asc_gamma_measure(p, atom_count), down);
    source_note = "shifted ASC pair (Krein/Friedrichs)";
  } else {
    auto pair = quartic_pair<Real>(atom_count);
    zeta = std::move(pair.first);
    rho = std::move(pair.second);
    source_note = "quartic birth-and-death pair (Krein/Friedrichs)";
  }

  const Real zeta0 = zeta.mass_at(Real(0));
  if (!(zeta0 > Real(0)) || !(zeta0 < Real(1)))
    throw SeedPairViolated("the Krein-side measure must carry mass in (0,1) at 0");
  const Real r = Real(1) / (Real(1) - zeta0);
  const auto alpha = scale_mass(zeta, r);
  const auto beta = scale_mass(rho, r);
  const Real beta_min_atom_mass = beta.atoms().front().mass;
  if (!(beta_min_atom_mass > Real(1)))
    throw SeedPairViolated("scaled Friedrichs measure needs mass > 1 at its smallest atom");

  Real a_param;
  if (kappa >= 1) {
    a_param = homothety_search(beta, HomothetySearchQuery<Real>{HomothetySearchMode::PowerCondition, 0, kappa});
  } else if (eta_infinite) {
    a_param = homothety_search(beta, HomothetySearchQuery<Real>{HomothetySearchMode::FullSum, 0, 0});
  } else if (eta >= 2) {
    a_param = homothety_search(beta, HomothetySearchQuery<Real>{HomothetySearchMode::LeadingAtoms, eta - 1, 0});
  } else {
    a_param = Real(1);  // eta = 1 needs no inequality; any homothety works
  }

  const Homothety<Real> psi{Real(1) / a_param, a_param};
  const auto nu = pushforward(alpha, psi);
  const auto tau = pushforward(beta, psi);

  Partition part;
  if (eta_infinite) {
    part = all_singleton_partition(tau.size());
  } else if (eta == 1) {
    part = trivial_partition(tau.size());
  } else {
    part = canonical_partition(tau.size(), eta, 1);
  }

  PipelineReport<Real> rep{
      build_exotic(nu, tau, part, kappa, mu_xkappa, branch_depth, eta_infinite), {}, {}, Real(0),
      false,  a_param, r, beta_min_atom_mass, source_note};

  rep.hyponormality = hyponormality(rep.build.model, Real(1e-30));

  // Hankel evidence for h at x_0 and the first branch vertices
  {
    const long need = 2 * hankel_max_order + 1;
    RnTable<Real> table(rep.build.model, need);
    auto verdict_at = [&](const VertexId& v) {
      MomentSequence<Real> s;
      for (long n = 0; n <= need; ++n) {
        try {
          s.values.push_back(table.value(v, n).value);
        } catch (const Error&) {
          break;
        }
      }
      return hankel_report(s, Real(1e-30)).verdict;
    };
    rep.hankel_evidence[VertexId::circuit(0)] = verdict_at(VertexId::circuit(0));
    if (kappa >= 1)
      rep.hankel_evidence[VertexId::circuit(kappa)] = verdict_at(VertexId::circuit(kappa));
    for (std::int64_t i = 1; i <= rep.build.model.shape.branches(); ++i)
      rep.hankel_evidence[VertexId::branch_vertex(i, 1)] =
          verdict_at(VertexId::branch_vertex(i, 1));
  }

  try {
    extend_cc(rep.build.model, rep.build.seeds);
  } catch (const ConditionIDViolated& e) {
    rep.id_violated = true;
    rep.id_defect = Real(e.defect);
  }
  return rep;
}

}  // namespace onecircuit

#endif
