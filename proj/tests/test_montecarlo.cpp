#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "radbound/dense_eig.hpp"
#include "radbound/montecarlo.hpp"
#include "radbound/patterns.hpp"

using namespace radbound;

namespace {

SparsePattern identity(int n) {
  std::vector<Entry> es;
  for (int i = 0; i < n; ++i) es.push_back({i, i, 1.0});
  return SparsePattern(n, n, es);
}

const SparsePattern kOnes2(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});

}  // namespace

TEST_CASE("sign samples are reproducible and one bit per entry") {
  const SparsePattern a = kOnes2;
  const SignSample s1 = draw_signs(a, 42);
  const SignSample s2 = draw_signs(a, 42);
  CHECK(s1.signs == s2.signs);
  CHECK(static_cast<int>(s1.signs.size()) == a.nnz());
  for (int s : s1.signs) CHECK((s == 1 || s == -1));
  CHECK(draw_signs(a, 43).signs != s1.signs);
}

TEST_CASE("expected norm of trivial patterns") {
  {
    const SparsePattern a(1, 1, {{0, 0, -0.75}});
    const NormEstimate est = estimate_expected_norm(a, 16, 5);
    CHECK(est.mean == Catch::Approx(0.75).epsilon(1e-12));
    CHECK(est.stderr_ == Catch::Approx(0.0).margin(1e-13));
  }
  {
    const NormEstimate est = estimate_expected_norm(identity(6), 32, 5);
    CHECK(est.mean == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(est.stderr_ == Catch::Approx(0.0).margin(1e-13));
  }
}

TEST_CASE("2x2 all-ones expected norm matches the 16-case enumeration") {
  // all 16 sign matrices: 8 singular ones of norm 2, 8 of norm sqrt(2)
  double exact = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<Entry> es;
    int bit = 0;
    for (const Entry& e : kOnes2.entries())
      es.push_back({e.row, e.col, (mask >> bit++) & 1 ? 1.0 : -1.0});
    exact += operator_norm_oracle(SparsePattern(2, 2, es)) / 16.0;
  }
  CHECK(exact == Catch::Approx((2.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-12));

  const NormEstimate est = estimate_expected_norm(kOnes2, 10000, 2024, 1e-11);
  CHECK(std::fabs(est.mean - exact) <= 3.0 * est.stderr_);
}

TEST_CASE("per-realization norm floor") {
  const SparsePattern cube = hypercube(3).adjacency();
  const FloorCheckReport rep = check_norm_floor(cube, 64, 7);
  CHECK(rep.pass);
  CHECK(rep.floor == Catch::Approx(std::sqrt(3.0)));
  CHECK(rep.min_margin >= -1e-9);
}

TEST_CASE("bitwise reproducibility across thread counts") {
  const SparsePattern a = circulant_graph(OffsetGraphSpec(12, {1, 3})).adjacency();
  const NormEstimate t1 = estimate_expected_norm(a, 48, 99, 1e-10, 1);
  const NormEstimate t4 = estimate_expected_norm(a, 48, 99, 1e-10, 4);
  CHECK(t1.mean == t4.mean);
  CHECK(t1.stderr_ == t4.stderr_);
  const NormEstimate again = estimate_expected_norm(a, 48, 99, 1e-10, 4);
  CHECK(t4.mean == again.mean);
}

TEST_CASE("estimate is symmetric under negation and transpose, exactly") {
  Rng rng(8);
  std::vector<Entry> es;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (rng.next_unit() < 0.5) {
        const double w = rng.next_symmetric();
        if (w != 0.0) es.push_back({i, j, w});
      }
  const SparsePattern a(6, 6, es);
  const NormEstimate base = estimate_expected_norm(a, 40, 321);
  const NormEstimate neg = estimate_expected_norm(a.scaled(-1.0), 40, 321);
  const NormEstimate tr = estimate_expected_norm(a.transposed(), 40, 321);
  CHECK(base.mean == neg.mean);
  CHECK(base.stderr_ == neg.stderr_);
  CHECK(base.mean == tr.mean);
  CHECK(base.stderr_ == tr.stderr_);
}

TEST_CASE("contraction comparison") {
  {  // A = B/2: homogeneity makes the comparison exact
    const SparsePattern b = kOnes2;
    const ContractionReport rep = check_contraction(b.scaled(0.5), b, 64, 5);
    CHECK(rep.pass);
    CHECK(rep.small.mean == Catch::Approx(0.5 * rep.large.mean).epsilon(1e-12));
  }
  {  // A = B: equality
    const ContractionReport rep = check_contraction(kOnes2, kOnes2, 32, 6);
    CHECK(rep.pass);
    CHECK(rep.small.mean == rep.large.mean);
  }
  {  // hypercube embedded in {0,1}^d coordinates inside the torus pattern
    const int d = 2, m = 4;
    const SparsePattern big = torus(m, d).adjacency();
    auto embed = [&](int v) {  // hypercube label -> torus label
      int out = 0, stride = 1;
      for (int k = 0; k < d; ++k) {
        out += ((v >> k) & 1) * stride;
        stride *= m;
      }
      return out;
    };
    std::vector<Entry> es;
    const DirectedGraph cube = hypercube(d);
    for (auto [u, v] : cube.edges()) es.push_back({embed(u), embed(v), 1.0});
    const SparsePattern small(big.rows(), big.cols(), es);
    REQUIRE(entrywise_dominates(small, big, 1.0));
    REQUIRE(small.nnz() < big.nnz());
    const ContractionReport rep = check_contraction(small, big, 400, 9);
    CHECK(rep.pass);
  }
  CHECK_THROWS_AS(check_contraction(kOnes2, kOnes2.scaled(0.5), 16, 1), std::invalid_argument);
}

TEST_CASE("shift invariance of circulant sign sums") {
  {  // constant vectors are fixed by shifts: deviation identically zero
    const int n = 12;
    std::vector<double> band(n, 0.0);
    band[1] = band[n - 1] = 1.0;
    std::vector<double> s(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const ShiftInvarianceReport rep =
        check_shift_invariance(CirculantSpec(n, band), s, s, 2.5, 500, 11);
    CHECK(rep.pass);
    CHECK(rep.max_deviation == Catch::Approx(0.0).margin(1e-12));
  }
  {  // n = 4: exact enumeration replaces Monte Carlo
    const int n = 4;
    std::vector<double> band{0.0, 1.0, 0.5, 0.0};
    Rng rng(13);
    std::vector<double> s(n), t(n);
    detail::random_unit(rng, s);
    detail::random_unit(rng, t);
    const ShiftInvarianceReport rep =
        check_shift_invariance(CirculantSpec(n, band), s, t, 3.0, 10, 17);
    CHECK(rep.exact);
    CHECK(rep.pass);
    CHECK(rep.max_deviation <= 1e-9);
  }
  {  // Monte Carlo path on n = 16
    const int n = 16;
    std::vector<double> band(n, 0.0);
    band[1] = band[2] = band[n - 2] = band[n - 1] = 1.0;
    Rng rng(29);
    std::vector<double> s(n), t(n);
    detail::random_unit(rng, s);
    detail::random_unit(rng, t);
    const ShiftInvarianceReport rep =
        check_shift_invariance(CirculantSpec(n, band), s, t, std::log(17.0), 4000, 31);
    CHECK_FALSE(rep.exact);
    CHECK(rep.pass);
  }
}
