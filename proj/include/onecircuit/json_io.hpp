#ifndef ONECIRCUIT_JSON_IO_HPP
#define ONECIRCUIT_JSON_IO_HPP

#include <fstream>
#include <string>

#include "json.hpp"

#include "onecircuit/comp_op.hpp"
#include "onecircuit/errors.hpp"
#include "onecircuit/exotic.hpp"
#include "onecircuit/measures.hpp"
#include "onecircuit/moments.hpp"

// File schemas. Numeric fields are IEEE doubles regardless of the scalar
// used in memory; high-precision runs round at this boundary.

namespace onecircuit {

using Json = nlohmann::ordered_json;

template <class Real>
Json measure_to_json(const AtomicMeasure<Real>& m) {
  Json j;
  j["atoms"] = Json::array();
  for (const auto& a : m.atoms())
    j["atoms"].push_back({to_double(a.location), to_double(a.mass)});
  j["tail_mass_bound"] = to_double(m.tail_mass_bound());
  j["tail_degree"] = m.tail_degree();
  j["tail_moment_bound"] = to_double(m.tail_moment_bound());
  if (!m.provenance().empty()) j["provenance"] = m.provenance();
  return j;
}

template <class Real>
AtomicMeasure<Real> measure_from_json(const Json& j) {
  std::vector<Atom<Real>> atoms;
  for (const auto& a : j.at("atoms")) {
    const double mass = a.at(1).get<double>();
    // masses below the double underflow threshold serialize as 0; they
    // carry no information at this precision and are dropped on read
    if (mass == 0.0) continue;
    atoms.push_back({Real(a.at(0).get<double>()), Real(mass)});
  }
  return AtomicMeasure<Real>(
      std::move(atoms), Real(j.value("tail_mass_bound", 0.0)), j.value("tail_degree", 0L),
      Real(j.value("tail_moment_bound", 0.0)), j.value("provenance", std::string{}));
}

template <class Real>
Json sequence_to_json(const MomentSequence<Real>& s) {
  Json j;
  j["values"] = Json::array();
  for (const auto& v : s.values) j["values"].push_back(to_double(v));
  if (!s.error_bounds.empty()) {
    j["error_bounds"] = Json::array();
    for (const auto& e : s.error_bounds) j["error_bounds"].push_back(to_double(e));
  }
  return j;
}

template <class Real>
MomentSequence<Real> sequence_from_json(const Json& j) {
  MomentSequence<Real> s;
  for (const auto& v : j.at("values")) s.values.push_back(Real(v.get<double>()));
  if (j.contains("error_bounds"))
    for (const auto& e : j.at("error_bounds")) s.error_bounds.push_back(Real(e.get<double>()));
  return s;
}

inline Json shape_to_json(const GraphShape& sh) {
  Json j;
  if (sh.eta_infinite)
    j["eta"] = "inf";
  else
    j["eta"] = sh.eta;
  j["kappa"] = sh.kappa;
  j["branch_depth"] = sh.branch_depth;
  j["eta_cap"] = sh.eta_cap;
  return j;
}

inline GraphShape shape_from_json(const Json& j) {
  const auto kappa = j.at("kappa").get<std::int64_t>();
  const auto depth = j.at("branch_depth").get<std::int64_t>();
  if (j.at("eta").is_string()) {
    if (j.at("eta").get<std::string>() != "inf") throw Error("eta must be an integer or \"inf\"");
    return GraphShape::infinite(j.at("eta_cap").get<std::int64_t>(), kappa, depth);
  }
  return GraphShape::finite(j.at("eta").get<std::int64_t>(), kappa, depth);
}

template <class Real>
Json model_to_json(const WeightedGraphModel<Real>& m) {
  Json j;
  j["shape"] = shape_to_json(m.shape);
  j["mu"] = Json::array();
  for (const auto& v : m.shape.vertices())
    j["mu"].push_back({v.to_string(), to_double(m.mu(v))});
  bool any_seed = false;
  for (const auto& s : m.branch_seed) any_seed = any_seed || s.has_value();
  if (any_seed) {
    j["branch_tail"] = Json::array();
    for (std::size_t i = 0; i < m.branch_seed.size(); ++i)
      if (m.branch_seed[i])
        j["branch_tail"].push_back(
            {static_cast<std::int64_t>(i) + 1, measure_to_json(*m.branch_seed[i])});
  }
  if (m.eta_mu_tail) {
    Json t;
    t["mu"] = to_double(*m.eta_mu_tail);
    if (m.eta_loop_tail) t["loop"] = to_double(*m.eta_loop_tail);
    t["h"] = Json::array();
    for (const auto& b : m.eta_h_tail) t["h"].push_back(to_double(b));
    j["eta_tails"] = std::move(t);
  }
  return j;
}

template <class Real>
WeightedGraphModel<Real> model_from_json(const Json& j) {
  WeightedGraphModel<Real> m;
  m.shape = shape_from_json(j.at("shape"));
  m.circuit_mu.assign(static_cast<std::size_t>(m.shape.kappa) + 1, Real(0));
  m.branch_mu.assign(static_cast<std::size_t>(m.shape.branches()),
                     std::vector<Real>(static_cast<std::size_t>(m.shape.branch_depth), Real(0)));
  for (const auto& entry : j.at("mu")) {
    const VertexId v = parse_vertex(entry.at(0).get<std::string>());
    m.shape.require(v);
    const Real w(entry.at(1).get<double>());
    if (v.is_circuit())
      m.circuit_mu[static_cast<std::size_t>(v.index)] = w;
    else
      m.branch_mu[static_cast<std::size_t>(v.branch - 1)][static_cast<std::size_t>(v.index - 1)] =
          w;
  }
  m.branch_seed.assign(static_cast<std::size_t>(m.shape.branches()), std::nullopt);
  if (j.contains("branch_tail"))
    for (const auto& entry : j.at("branch_tail")) {
      const auto i = entry.at(0).get<std::int64_t>();
      if (i < 1 || i > m.shape.branches()) throw Error("branch_tail index out of range");
      m.branch_seed[static_cast<std::size_t>(i - 1)] = measure_from_json<Real>(entry.at(1));
    }
  if (j.contains("eta_tails")) {
    const auto& t = j.at("eta_tails");
    m.eta_mu_tail = Real(t.at("mu").get<double>());
    if (t.contains("loop")) m.eta_loop_tail = Real(t.at("loop").get<double>());
    if (t.contains("h"))
      for (const auto& b : t.at("h")) m.eta_h_tail.push_back(Real(b.get<double>()));
  }
  m.validate();
  return m;
}

template <class Real>
Json family_to_json(const CCFamily<Real>& f) {
  Json j;
  j["tol"] = to_double(f.tol);
  j["members"] = Json::array();
  for (const auto& [v, P] : f.members) j["members"].push_back({v.to_string(), measure_to_json(P)});
  return j;
}

template <class Real>
CCFamily<Real> family_from_json(const Json& j) {
  CCFamily<Real> f;
  f.tol = Real(j.value("tol", 1e-10));
  for (const auto& entry : j.at("members"))
    f.members.emplace(parse_vertex(entry.at(0).get<std::string>()),
                      measure_from_json<Real>(entry.at(1)));
  return f;
}

inline Json partition_to_json(const Partition& p) {
  Json j;
  j["blocks"] = p.blocks;
  j["tail_block"] = p.tail_block;
  return j;
}

inline Partition partition_from_json(const Json& j) {
  Partition p;
  for (const auto& b : j.at("blocks")) p.blocks.push_back(b.get<std::vector<std::size_t>>());
  p.tail_block = j.value("tail_block", -1);
  return p;
}

template <class Real>
Json hankel_report_to_json(const HankelReport<Real>& rep) {
  Json j;
  j["verdict"] = to_string(rep.verdict);
  j["failing_order"] = rep.failing_order;
  j["truncation_evidence_only"] = rep.truncation_evidence_only;
  j["orders"] = Json::array();
  for (const auto& e : rep.orders) {
    Json o;
    o["k"] = e.k;
    o["min_eig_base"] = to_double(e.min_eig_base);
    if (e.min_eig_shift) o["min_eig_shift"] = to_double(*e.min_eig_shift);
    j["orders"].push_back(std::move(o));
  }
  return j;
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace onecircuit

#endif
