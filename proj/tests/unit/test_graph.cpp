#include "doctest.h"

#include "onecircuit/circuit_graph.hpp"

using namespace onecircuit;

TEST_CASE("phi on circuit and branches") {
  const auto sh = GraphShape::finite(2, 1, 8);
  CHECK(phi(sh, VertexId::circuit(1)) == VertexId::circuit(0));
  CHECK(phi(sh, VertexId::circuit(0)) == VertexId::circuit(1));  // x_0 -> x_kappa
  CHECK(phi(sh, VertexId::branch_vertex(2, 1)) == VertexId::circuit(1));
  CHECK(phi(sh, VertexId::branch_vertex(1, 5)) == VertexId::branch_vertex(1, 4));
  CHECK_THROWS_AS(phi(sh, VertexId::branch_vertex(3, 1)), InvalidVertex);
}

TEST_CASE("preimages") {
  SUBCASE("loop vertex with kappa = 0 collects itself and the branch roots") {
    const auto sh = GraphShape::finite(3, 0, 6);
    const auto p = preimage(sh, VertexId::circuit(0));
    CHECK(p.vertices == std::set<VertexId>{VertexId::circuit(0), VertexId::branch_vertex(1, 1),
                                           VertexId::branch_vertex(2, 1),
                                           VertexId::branch_vertex(3, 1)});
    CHECK_FALSE(p.truncated);
  }
  SUBCASE("chain structure") {
    const auto sh = GraphShape::finite(2, 1, 6);
    const auto p = preimage(sh, VertexId::branch_vertex(1, 3));
    CHECK(p.vertices == std::set<VertexId>{VertexId::branch_vertex(1, 4)});
  }
  SUBCASE("kappa = 1, eta = 2") {
    const auto sh = GraphShape::finite(2, 1, 6);
    const auto p = preimage(sh, VertexId::circuit(1));
    CHECK(p.vertices == std::set<VertexId>{VertexId::circuit(0), VertexId::branch_vertex(1, 1),
                                           VertexId::branch_vertex(2, 1)});
  }
  SUBCASE("deepest level is truncated") {
    const auto sh = GraphShape::finite(1, 0, 4);
    const auto p = preimage(sh, VertexId::branch_vertex(1, 4));
    CHECK(p.vertices.empty());
    CHECK(p.truncated);
  }
}

TEST_CASE("phi maps every preimage back onto its vertex") {
  const auto sh = GraphShape::finite(3, 2, 6);
  for (const auto& v : sh.vertices()) {
    const auto p = preimage(sh, v);
    for (const auto& y : p.vertices) CHECK(phi(sh, y) == v);
    if (v.is_circuit() && v.index == sh.kappa)
      CHECK(p.vertices.size() == std::size_t(sh.eta) + 1);
    else if (!p.truncated)
      CHECK(p.vertices.size() == 1);
  }
}

TEST_CASE("bfs iterated preimages on chains and circuits") {
  const auto sh = GraphShape::finite(2, 1, 8);
  CHECK(iterated_preimage_bfs(sh, VertexId::branch_vertex(1, 1), 2).vertices ==
        std::set<VertexId>{VertexId::branch_vertex(1, 3)});
  CHECK(iterated_preimage_bfs(sh, VertexId::circuit(0), 1).vertices ==
        std::set<VertexId>{VertexId::circuit(1)});
}

TEST_CASE("closed form matches the bfs oracle everywhere it is untruncated") {
  for (std::int64_t eta : {1, 2, 3}) {
    for (std::int64_t kappa : {0, 1, 2}) {
      const std::int64_t depth = 40;
      const auto sh = GraphShape::finite(eta, kappa, depth);
      for (std::int64_t n = 0; n <= 2 * depth; ++n) {
        const auto closed = iterated_preimage_xkappa_closed(sh, n);
        const auto bfs = iterated_preimage_bfs(sh, VertexId::circuit(kappa), n);
        CHECK(closed.vertices == bfs.vertices);
        CHECK(closed.truncated == bfs.truncated);
      }
    }
  }
}

TEST_CASE("closed form examples") {
  SUBCASE("n = 0 is the vertex itself") {
    const auto sh = GraphShape::finite(2, 1, 8);
    CHECK(iterated_preimage_xkappa_closed(sh, 0).vertices ==
          std::set<VertexId>{VertexId::circuit(1)});
  }
  SUBCASE("kappa = 1, eta = 2, n = 1") {
    const auto sh = GraphShape::finite(2, 1, 8);
    CHECK(iterated_preimage_xkappa_closed(sh, 1).vertices ==
          std::set<VertexId>{VertexId::circuit(0), VertexId::branch_vertex(1, 1),
                             VertexId::branch_vertex(2, 1)});
  }
  SUBCASE("kappa = 1, eta = 2, n = 3") {
    const auto sh = GraphShape::finite(2, 1, 8);
    CHECK(iterated_preimage_xkappa_closed(sh, 3).vertices ==
          std::set<VertexId>{VertexId::circuit(0), VertexId::branch_vertex(1, 1),
                             VertexId::branch_vertex(2, 1), VertexId::branch_vertex(1, 3),
                             VertexId::branch_vertex(2, 3)});
  }
}

TEST_CASE("vertex ordering and naming") {
  CHECK(VertexId::circuit(5) < VertexId::branch_vertex(1, 1));
  CHECK(VertexId::branch_vertex(1, 2) < VertexId::branch_vertex(2, 1));
  CHECK(VertexId::circuit(0).to_string() == "x0");
  CHECK(VertexId::branch_vertex(2, 7).to_string() == "x2,7");
  CHECK(parse_vertex("x3") == VertexId::circuit(3));
  CHECK(parse_vertex("x2,7") == VertexId::branch_vertex(2, 7));
  CHECK_THROWS_AS(parse_vertex("y1"), InvalidVertex);
}
