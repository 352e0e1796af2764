#ifndef ONECIRCUIT_CIRCUIT_GRAPH_HPP
#define ONECIRCUIT_CIRCUIT_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "onecircuit/errors.hpp"

namespace onecircuit {

// Vertex of the one-circuit graph: either a circuit vertex x_r with
// 0 <= r <= kappa, or a branch vertex x_{i,j} with i >= 1, j >= 1. The
// conventions x_{-1} = x_kappa and x_{i,0} = x_kappa are resolved by the
// constructing code and never stored.
struct VertexId {
  std::int64_t branch = 0;  // 0 for circuit vertices, else branch index i >= 1
  std::int64_t index = 0;   // r for circuit vertices, j >= 1 for branch vertices

  static VertexId circuit(std::int64_t r) { return {0, r}; }
  static VertexId branch_vertex(std::int64_t i, std::int64_t j) { return {i, j}; }

  bool is_circuit() const { return branch == 0; }

  // circuit vertices precede branch vertices; within a class, lexicographic
  auto operator<=>(const VertexId&) const = default;

  std::string to_string() const {
    if (is_circuit()) return "x" + std::to_string(index);
    return "x" + std::to_string(branch) + "," + std::to_string(index);
  }
};

inline VertexId parse_vertex(const std::string& s) {
  if (s.size() < 2 || s[0] != 'x') throw InvalidVertex("cannot parse vertex '" + s + "'");
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return VertexId::circuit(std::stoll(s.substr(1)));
    return VertexId::branch_vertex(std::stoll(s.substr(1, comma - 1)),
                                   std::stoll(s.substr(comma + 1)));
  } catch (const std::exception&) {
    throw InvalidVertex("cannot parse vertex '" + s + "'");
  }
}

// Truncated model of the vertex set X_{eta,kappa}: eta branches (capped at
// eta_cap when eta is infinite) of depth branch_depth hanging off the
// circuit x_0 .. x_kappa.
struct GraphShape {
  std::int64_t eta = 1;  // ignored when eta_infinite
  bool eta_infinite = false;
  std::int64_t kappa = 0;
  std::int64_t branch_depth = 32;
  std::int64_t eta_cap = 1;  // = eta when finite

  static GraphShape finite(std::int64_t eta, std::int64_t kappa, std::int64_t branch_depth) {
    if (eta < 1 || kappa < 0 || branch_depth < 1) throw Error("invalid graph shape");
    return {eta, false, kappa, branch_depth, eta};
  }
  static GraphShape infinite(std::int64_t eta_cap, std::int64_t kappa,
                             std::int64_t branch_depth) {
    if (eta_cap < 1 || kappa < 0 || branch_depth < 1) throw Error("invalid graph shape");
    return {0, true, kappa, branch_depth, eta_cap};
  }

  std::int64_t branches() const { return eta_infinite ? eta_cap : eta; }

  bool contains(const VertexId& v) const {
    if (v.is_circuit()) return v.index >= 0 && v.index <= kappa;
    return v.branch >= 1 && v.branch <= branches() && v.index >= 1 && v.index <= branch_depth;
  }

  void require(const VertexId& v) const {
    if (!contains(v)) throw InvalidVertex("vertex " + v.to_string() + " outside shape");
  }

  // canonical enumeration: circuit first, then branches
  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out;
    for (std::int64_t r = 0; r <= kappa; ++r) out.push_back(VertexId::circuit(r));
    for (std::int64_t i = 1; i <= branches(); ++i)
      for (std::int64_t j = 1; j <= branch_depth; ++j)
        out.push_back(VertexId::branch_vertex(i, j));
    return out;
  }
};

// The self-map: x_{i,j} -> x_{i,j-1}, x_{i,1} -> x_kappa, x_0 -> x_kappa,
// x_r -> x_{r-1}.
inline VertexId phi(const GraphShape& shape, const VertexId& v) {
  shape.require(v);
  if (!v.is_circuit())
    return v.index >= 2 ? VertexId::branch_vertex(v.branch, v.index - 1)
                        : VertexId::circuit(shape.kappa);
  return v.index == 0 ? VertexId::circuit(shape.kappa) : VertexId::circuit(v.index - 1);
}

struct VertexSet {
  std::set<VertexId> vertices;
  bool truncated = false;  // some preimages fell beyond branch_depth
};

// Exact preimage under phi within the truncated shape. The preimage of the
// deepest branch level exists in the full graph but not in the truncation;
// such results carry the truncation flag.
inline VertexSet preimage(const GraphShape& shape, const VertexId& v) {
  shape.require(v);
  VertexSet out;
  if (!v.is_circuit()) {
    if (v.index + 1 <= shape.branch_depth)
      out.vertices.insert(VertexId::branch_vertex(v.branch, v.index + 1));
    else
      out.truncated = true;
    return out;
  }
  if (v.index == shape.kappa) {
    out.vertices.insert(VertexId::circuit(0));
    for (std::int64_t i = 1; i <= shape.branches(); ++i)
      out.vertices.insert(VertexId::branch_vertex(i, 1));
    if (shape.eta_infinite) out.truncated = true;  // branches beyond eta_cap
    return out;
  }
  out.vertices.insert(VertexId::circuit(v.index + 1));
  return out;
}

// n-fold preimage of an arbitrary vertex by repeated application of
// preimage(); the independent oracle for the closed form below.
inline VertexSet iterated_preimage_bfs(const GraphShape& shape, const VertexId& v, std::int64_t n) {
  VertexSet cur;
  cur.vertices.insert(v);
  for (std::int64_t step = 0; step < n; ++step) {
    VertexSet next;
    next.truncated = cur.truncated;
    for (const auto& u : cur.vertices) {
      auto p = preimage(shape, u);
      next.vertices.insert(p.vertices.begin(), p.vertices.end());
      next.truncated = next.truncated || p.truncated;
    }
    cur = std::move(next);
  }
  return cur;
}

// Closed form of the n-fold preimage of x_kappa: with n = j(kappa+1) + r,
// it is {x_{r-1}} together with x_{i, l(kappa+1)+r} for 0 <= l <= j, where
// x_{-1} and x_{i,0} both collapse to x_kappa.
inline VertexSet iterated_preimage_xkappa_closed(const GraphShape& shape, std::int64_t n) {
  if (n < 0) throw Error("n must be nonnegative");
  VertexSet out;
  const std::int64_t period = shape.kappa + 1;
  const std::int64_t j = n / period;
  const std::int64_t r = n % period;
  out.vertices.insert(r == 0 ? VertexId::circuit(shape.kappa) : VertexId::circuit(r - 1));
  for (std::int64_t i = 1; i <= shape.branches(); ++i) {
    for (std::int64_t l = 0; l <= j; ++l) {
      const std::int64_t depth = l * period + r;
      if (depth == 0) {
        out.vertices.insert(VertexId::circuit(shape.kappa));
        continue;
      }
      if (depth > shape.branch_depth) {
        out.truncated = true;
        continue;
      }
      out.vertices.insert(VertexId::branch_vertex(i, depth));
    }
  }
  if (shape.eta_infinite && n >= 1) out.truncated = true;
  return out;
}

}  // namespace onecircuit

#endif
