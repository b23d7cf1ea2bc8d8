#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "radbound/operator_norm.hpp"
#include "radbound/patterns.hpp"

using namespace radbound;

TEST_CASE("circulant matrix examples") {
  {
    std::vector<double> band(5, 0.0);
    band[0] = 3.0;
    const SparsePattern a = circulant_matrix(CirculantSpec(5, band));
    CHECK(a.nnz() == 5);
    for (int i = 0; i < 5; ++i) CHECK(a.at(i, i) == 3.0);
  }
  {
    std::vector<double> band(6, 0.0);
    band[1] = 1.0;  // cyclic shift permutation
    const SparsePattern a = circulant_matrix(CirculantSpec(6, band));
    CHECK(a.nnz() == 6);
    CHECK(operator_norm(a, 1e-10, 10000, 1).value == Catch::Approx(1.0).epsilon(1e-9));
  }
  {
    const SparsePattern a = circulant_matrix(CirculantSpec(4, {1, 1, 1, 1}));
    CHECK(a.nnz() == 16);
    CHECK(operator_norm(a, 1e-10, 10000, 1).value == Catch::Approx(4.0).epsilon(1e-9));
  }
}

TEST_CASE("circulant graph edge counts and degree") {
  const DirectedGraph g1 = circulant_graph(OffsetGraphSpec(8, {1, 4}));
  CHECK(g1.edge_count() == 24);  // p_d = n/2 drops one neighbor
  CHECK(g1.max_degree() == 3);

  const DirectedGraph g2 = circulant_graph(OffsetGraphSpec(6, {1}));
  CHECK(g2.edge_count() == 12);

  const DirectedGraph g3 = circulant_graph(OffsetGraphSpec(32, {1, 2}));
  CHECK(g3.edge_count() == 128);
  CHECK(g3.max_degree() == 4);

  CHECK_THROWS_AS(OffsetGraphSpec(8, {5}), std::invalid_argument);
  CHECK_THROWS_AS(OffsetGraphSpec(8, {0}), std::invalid_argument);
  CHECK_THROWS_AS(OffsetGraphSpec(8, {2, 2}), std::invalid_argument);
}

TEST_CASE("circulant graph adjacency equals the 0-1 band matrix") {
  for (const auto& spec : {OffsetGraphSpec(9, {1, 3}), OffsetGraphSpec(12, {2, 5, 6}),
                           OffsetGraphSpec(7, {1, 2, 3})}) {
    CHECK(circulant_graph(spec).adjacency() == circulant_matrix(adjacency_band(spec)));
  }
}

TEST_CASE("hypercube structure") {
  CHECK(hypercube(1).vertex_count() == 2);
  CHECK(hypercube(1).edge_count() == 2);
  CHECK(hypercube(3).edge_count() == 24);

  const int d = 5;
  const auto levels = hypercube_levels(d);
  const DirectedGraph g = hypercube(d);
  long binom = 1;
  for (int l = 0; l <= d; ++l) {
    CHECK(static_cast<long>(levels[l].size()) == binom);
    binom = binom * (d - l) / (l + 1);
  }
  for (int k = 1; k <= d; ++k) {
    long expected = static_cast<long>(levels[k].size()) * k;  // k * C(d, k)
    long count = 0;
    for (int u : levels[k])
      for (int v : levels[k - 1])
        if (g.has_edge(u, v)) ++count;
    CHECK(count == expected);
  }
}

TEST_CASE("torus structure and the m = 2 degeneration") {
  for (int d = 1; d <= 10; ++d) CHECK(torus(2, d) == hypercube(d));

  const DirectedGraph tri = torus(3, 1);
  CHECK(tri.vertex_count() == 3);
  CHECK(tri.edge_count() == 6);

  const DirectedGraph t42 = torus(4, 2);
  CHECK(t42.vertex_count() == 16);
  CHECK(t42.edge_count() == 64);
  CHECK(t42.max_degree() == 4);
}

TEST_CASE("generated graphs are symmetric and loop-free") {
  const DirectedGraph graphs[] = {hypercube(4), torus(3, 2), torus(4, 2),
                                  circulant_graph(OffsetGraphSpec(10, {1, 3, 5}))};
  for (const DirectedGraph& g : graphs) {
    for (auto [u, v] : g.edges()) {
      CHECK(u != v);
      CHECK(g.has_edge(v, u));
    }
  }
}

TEST_CASE("torus band embedding") {
  {
    const TorusBandEmbedding emb = torus_as_circulant_bands(3, 2);
    CHECK(emb.spec.n == 9);
    CHECK(emb.spec.offsets == std::vector<int>{1, 2, 3});
  }
  {
    const TorusBandEmbedding emb = torus_as_circulant_bands(2, 1);
    CHECK(emb.spec.n == 2);
    CHECK(emb.spec.offsets == std::vector<int>{1});
  }

  // identification is a bijection and maps torus edges into the band graph
  for (auto [m, d] : {std::pair{2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}, {5, 2}}) {
    const TorusBandEmbedding emb = torus_as_circulant_bands(m, d);
    const DirectedGraph band = circulant_graph(emb.spec);
    const DirectedGraph tor = torus(m, d);
    std::vector<char> seen(emb.spec.n, 0);
    for (int v = 0; v < emb.spec.n; ++v) {
      const auto coords = emb.coords(v);
      const int back = emb.label(coords);
      CHECK(back == v);
      seen[back] = 1;
    }
    for (char s : seen) CHECK(s == 1);
    for (auto [u, v] : tor.edges()) {
      INFO("m=" << m << " d=" << d << " edge " << u << "->" << v);
      CHECK(band.has_edge(u, v));
    }
  }
}
