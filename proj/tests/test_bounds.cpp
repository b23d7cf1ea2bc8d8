#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "radbound/bounds.hpp"
#include "radbound/patterns.hpp"

using namespace radbound;

namespace {

SparsePattern identity(int n) {
  std::vector<Entry> es;
  for (int i = 0; i < n; ++i) es.push_back({i, i, 1.0});
  return SparsePattern(n, n, es);
}

}  // namespace

TEST_CASE("row and column terms") {
  const auto [ir, ic] = row_col_terms(identity(7));
  CHECK(ir == 1.0);
  CHECK(ic == 1.0);

  std::vector<Entry> star;
  for (int j = 0; j < 9; ++j) star.push_back({0, j, 1.0});
  const auto [sr, sc] = row_col_terms(SparsePattern(1, 9, star));
  CHECK(sr == Catch::Approx(3.0));
  CHECK(sc == 1.0);

  std::vector<double> band{0.0, 2.0, 0.0, -1.0, 0.5, 0.0};
  const auto [cr, cc] = row_col_terms(circulant_matrix(CirculantSpec(6, band)));
  const double expect = std::sqrt(4.0 + 1.0 + 0.25);
  CHECK(cr == Catch::Approx(expect));
  CHECK(cc == Catch::Approx(expect));
}

TEST_CASE("seginer bound closed forms") {
  CHECK(seginer_bound(identity(1)) ==
        Catch::Approx(std::pow(std::log(2.0), 0.25) * 2.0));
  const int n = 9;
  const SparsePattern allones = circulant_matrix(CirculantSpec(n, std::vector<double>(n, 1.0)));
  CHECK(seginer_bound(allones) ==
        Catch::Approx(std::pow(std::log(n + 1.0), 0.25) * 2.0 * std::sqrt(9.0)));
  for (int m : {2, 5, 11}) {
    const auto [mr, mc] = row_col_terms(identity(m));
    CHECK(seginer_bound(identity(m)) >= mr + mc - 1e-12);
  }
}

TEST_CASE("gaussian reference bound") {
  CHECK(gaussian_reference_bound(SparsePattern(6, 6, {})) == Catch::Approx(std::sqrt(std::log(6.0))));
  CHECK(gaussian_reference_bound(identity(5)) == Catch::Approx(2.0 + std::sqrt(std::log(5.0))));
  const int d = 4;
  const SparsePattern cube = hypercube(d).adjacency();
  CHECK(gaussian_reference_bound(cube) ==
        Catch::Approx(2.0 * std::sqrt(4.0) + std::sqrt(d * std::log(2.0))));
  CHECK_THROWS_AS(gaussian_reference_bound(identity(3).scaled(1.5)), std::invalid_argument);
}

TEST_CASE("bound evaluators are monotone under entrywise domination") {
  Rng rng(4242);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 5 + static_cast<int>(rng.next_below(6));
    std::vector<Entry> ea, eb;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.next_unit() < 0.4) {
          const double w = 0.9 * rng.next_unit();
          const double extra = rng.next_unit() * 0.1;
          if (w > 0.0) ea.push_back({i, j, w});
          if (w + extra > 0.0) eb.push_back({i, j, w + extra});
        }
    const SparsePattern a(n, n, ea), b(n, n, eb);
    const auto [ar, ac] = row_col_terms(a);
    const auto [br, bc] = row_col_terms(b);
    CHECK(ar <= br + 1e-12);
    CHECK(ac <= bc + 1e-12);
    CHECK(seginer_bound(a) <= seginer_bound(b) + 1e-12);
    CHECK(gaussian_reference_bound(a) <= gaussian_reference_bound(b) + 1e-12);
  }
}

TEST_CASE("norm lower rhs on the identity") {
  for (int n : {4, 8, 12}) {
    const BoundBreakdown bb = norm_lower_rhs(identity(n));
    CHECK(bb.max_row_l2 == 1.0);
    CHECK(bb.max_col_l2 == 1.0);
    CHECK(bb.gamma == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(bb.k_used < n);
  }
}

TEST_CASE("norm lower rhs on a single entry") {
  const SparsePattern a(6, 6, {{2, 3, -1.5}});
  const BoundBreakdown bb = norm_lower_rhs(a);
  CHECK(bb.max_row_l2 == Catch::Approx(1.5));
  CHECK(bb.max_col_l2 == Catch::Approx(1.5));
  CHECK(bb.gamma <= 1.5 + 1e-12);
}

TEST_CASE("the removal-free grid endpoint recovers the plain rad-norm estimate") {
  const SparsePattern adj = hypercube(3).adjacency();
  LowerRhsConfig cfg;
  const BoundBreakdown bb = norm_lower_rhs(adj, cfg);
  const double direct = estimate_rad_norm(adj, std::log(adj.rows() + 1.0), cfg.rad).lower;
  CHECK(bb.full_sup_log_n == direct);
  CHECK(bb.gamma <= direct + 1e-12);
}

TEST_CASE("gamma is nonincreasing in the removal budget") {
  Rng rng(515151);
  LowerRhsConfig cfg;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 6 + static_cast<int>(rng.next_below(4));
    std::vector<Entry> es;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.next_unit() < 0.5) {
          const double w = rng.next_symmetric();
          if (w != 0.0) es.push_back({i, j, w});
        }
    const SparsePattern a(n, n, es);
    if (a.empty()) continue;
    // fixed moment order, growing removal budget, exact enumeration
    const double p = 2.0;
    auto min_over_budget = [&](int budget) {
      double best = std::numeric_limits<double>::infinity();
      std::vector<int> idx(budget);
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        best = std::min(best, detail::removal_sup(a, idx, p, cfg.rad));
        int pos = budget - 1;
        while (pos >= 0 && idx[pos] == n - budget + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < budget; ++i) idx[i] = idx[i - 1] + 1;
      }
      return best;
    };
    const double g1 = min_over_budget(1);
    const double g2 = min_over_budget(2);
    const double g3 = min_over_budget(3);
    CHECK(g2 <= g1 + 1e-7);
    CHECK(g3 <= g2 + 1e-7);
  }
}

TEST_CASE("circulant bounds sandwich") {
  {  // single nonzero band value: permutation structure
    const int n = 16;
    std::vector<double> band(n, 0.0);
    band[3] = 2.0;
    const CirculantBounds cb = circulant_bounds(CirculantSpec(n, band));
    CHECK(cb.band_l2 == Catch::Approx(2.0));
    CHECK(cb.rad_term == Catch::Approx(2.0).epsilon(1e-9));
    CHECK(cb.lower == Catch::Approx(4.0).epsilon(1e-9));
  }
  {  // 0-1 band: degree form without loglog factors
    const OffsetGraphSpec gs(32, {1, 2});
    const CirculantBounds cb = circulant_bounds(adjacency_band(gs));
    REQUIRE(!std::isnan(cb.degree_form_upper));
    CHECK(cb.degree_form_upper == Catch::Approx(std::sqrt(2.0) + cb.rad_term));
    CHECK(cb.lower <= cb.upper + 1e-12);
  }
}

TEST_CASE("graph Np bounds on the hypercube") {
  {
    const DirectedGraph g = hypercube(4);
    GraphNpConfig cfg;
    for (auto& lvl : hypercube_levels(4)) cfg.candidate_sets.push_back(lvl);
    const GraphNpBounds b3 = graph_Np_bounds(g, 3.0, cfg);
    CHECK(b3.lower >= std::sqrt(3.0 / 8.0) - 1e-12);
    CHECK(b3.upper <= std::sqrt(3.0) + 1e-12);
    CHECK(b3.lower <= b3.upper + 1e-12);

    const GraphNpBounds b4 = graph_Np_bounds(g, 4.0, cfg);
    CHECK(b4.expansion == Catch::Approx(2.0));  // levels V_0 x V_1
  }
  {  // p >= d^2 makes the upper bound the degree
    const DirectedGraph g = circulant_graph(OffsetGraphSpec(12, {1, 2}));
    const GraphNpBounds b = graph_Np_bounds(g, 17.0);
    CHECK(b.upper == 4.0);
  }
  {  // exhaustive sparsity on a tiny graph matches min{p, |E|}/|V| at V
    const DirectedGraph g = circulant_graph(OffsetGraphSpec(6, {1}));
    const GraphNpBounds b = graph_Np_bounds(g, 40.0);
    CHECK(b.sparsity >= 2.0 - 1e-12);  // I = V: 12 edges / 6 vertices
  }
}

TEST_CASE("hypercube Np regime dispatch") {
  {
    const GraphNpBounds b = hypercube_Np_bounds(3, 2.0);
    CHECK(b.lower == Catch::Approx(0.5));
    CHECK(b.upper == Catch::Approx(std::sqrt(2.0)));
  }
  {
    const GraphNpBounds b = hypercube_Np_bounds(3, 24.0);
    CHECK(b.lower == 3.0);
    CHECK(b.upper == 3.0);
  }
  {
    const GraphNpBounds b = hypercube_Np_bounds(8, 16.0);
    const double lp = std::log(16.0);
    CHECK(b.lower == Catch::Approx(std::sqrt(8.0 * lp / std::log(std::exp(1.0) * 8.0 / lp))));
    CHECK(b.upper == Catch::Approx(std::sqrt(8.0 * lp)));
  }
  for (int d = 1; d <= 10; ++d)
    for (double p : {1.0, 2.0, 5.0, 17.0, 300.0, 20000.0}) {
      const GraphNpBounds b = hypercube_Np_bounds(d, p);
      CHECK(b.lower <= b.upper + 1e-12);
    }
}

TEST_CASE("Harper edge-isoperimetry sampled") {
  for (int d : {4, 7, 10}) {
    const DirectedGraph g = hypercube(d);
    Rng rng(derive_seed(777, d));
    for (int trial = 0; trial < 200; ++trial) {
      const int size = 1 + static_cast<int>(rng.next_below(g.vertex_count()));
      std::vector<int> verts(g.vertex_count());
      std::iota(verts.begin(), verts.end(), 0);
      for (int i = 0; i < size; ++i)
        std::swap(verts[i], verts[i + rng.next_below(verts.size() - i)]);
      verts.resize(size);
      int k = 0;
      while ((1 << k) < size) ++k;
      REQUIRE(edges_within(g, verts) <= static_cast<long>(k) << k);
    }
  }
}

TEST_CASE("torus reduction factor and expected norm bounds") {
  CHECK(torus_reduction_factor(2) == 1.0);
  CHECK(torus_reduction_factor(6) == 2.0);
  CHECK(torus_reduction_factor(7) == 3.0);

  {  // m = 2 reduces to the hypercube bounds at p = d log 2
    const int d = 5;
    const auto [lo, hi] = torus_expected_norm_bounds(2, d);
    const GraphNpBounds np = hypercube_Np_bounds(d, d * std::log(2.0));
    CHECK(lo == Catch::Approx(std::sqrt(5.0) + np.lower));
    CHECK(hi == Catch::Approx(std::sqrt(5.0) + np.upper));
  }
  {  // middle regime shape sqrt(d log(d log m))
    const int d = 6, m = 8;
    const double p = d * std::log(static_cast<double>(m));
    REQUIRE(p > d);
    const auto [lo, hi] = torus_expected_norm_bounds(m, d);
    CHECK(hi == Catch::Approx(std::sqrt(6.0) + 2.0 * std::sqrt(d * std::log(p))));
    CHECK(lo <= hi);
  }
  {
    const auto [lo, hi] = torus_expected_norm_bounds(4, 3);
    CHECK(lo <= hi);
  }
}

TEST_CASE("subgraph monotonicity of the combinatorial surrogate") {
  const SparsePattern small = hypercube(2).adjacency();
  // embed the hypercube pattern inside the torus(4, 2) labeling
  const TorusBandEmbedding emb = torus_as_circulant_bands(4, 2);
  const DirectedGraph big = torus(4, 2);
  for (double p : {2.0, 4.0}) {
    const CombinatorialM m_small = combinatorial_M(small, p, SubsetMode::kExact);
    const CombinatorialM m_big = combinatorial_M(big.adjacency(), p, SubsetMode::kExact);
    CHECK(m_small.value <= m_big.value + 1e-9);
  }
}
