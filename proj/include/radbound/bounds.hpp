#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "radbound/patterns.hpp"
#include "radbound/rademacher.hpp"
#include "radbound/sparse.hpp"

namespace radbound {

// max row / max column Euclidean lengths of (a_ij)
inline std::pair<double, double> row_col_terms(const SparsePattern& a) {
  double mr = 0.0, mc = 0.0;
  for (double v : a.row_l2()) mr = std::max(mr, v);
  for (double v : a.col_l2()) mc = std::max(mc, v);
  return {mr, mc};
}

// (log(n+1))^{1/4} (max_i ||row_i|| + max_j ||col_j||), constant 1
inline double seginer_bound(const SparsePattern& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("seginer_bound: matrix must be square");
  const auto [mr, mc] = row_col_terms(a);
  return std::pow(std::log(a.rows() + 1.0), 0.25) * (mr + mc);
}

// max_i ||row_i|| + max_j ||col_j|| + sqrt(log n), constant 1; requires
// entries bounded by 1 (the caller rescales)
inline double gaussian_reference_bound(const SparsePattern& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("gaussian_reference_bound: matrix must be square");
  if (a.max_abs() > 1.0)
    throw std::invalid_argument("gaussian_reference_bound: entries must satisfy |a_ij| <= 1");
  const auto [mr, mc] = row_col_terms(a);
  const double logn = a.rows() >= 1 ? std::log(static_cast<double>(a.rows())) : 0.0;
  return mr + mc + std::sqrt(std::max(logn, 0.0));
}

struct BoundBreakdown {
  double max_row_l2 = 0.0;
  double max_col_l2 = 0.0;
  double gamma = 0.0;
  int k_used = 0;
  std::vector<int> removed_set;
  double full_sup_log_n = 0.0;  // the k = n grid point with nothing removed
  std::string formula;
};

struct LowerRhsConfig {
  RadNormConfig rad{.restarts = 2, .ascent_iters = 12, .seed = 1, .allow_mc = false, .star_cap = 6};
  int exact_enum_max_n = 12;  // exhaustive removal sets below this size
  int greedy_step_cap = 64;
  int greedy_candidates = 24;
};

namespace detail {

inline SparsePattern remove_indices(const SparsePattern& a, const std::vector<int>& removed) {
  std::vector<char> gone(std::max(a.rows(), a.cols()), 0);
  for (int i : removed) gone[i] = 1;
  std::vector<Entry> es;
  for (const Entry& e : a.entries())
    if (!gone[e.row] && !gone[e.col]) es.push_back(e);
  return SparsePattern(a.rows(), a.cols(), std::move(es));
}

inline double removal_sup(const SparsePattern& a, const std::vector<int>& removed, double p,
                          const RadNormConfig& rad) {
  const SparsePattern sub = remove_indices(a, removed);
  if (sub.empty()) return 0.0;
  return estimate_rad_norm(sub, p, rad).lower;
}

}  // namespace detail

// The max_k min_I sup term of the lower-bound formula. k runs over a
// dyadic grid; the inner min enumerates removal sets exactly for small n
// and otherwise peels indices greedily. The moment order log(k+1) is
// clamped below at 1.
inline BoundBreakdown norm_lower_rhs(const SparsePattern& a,
                                        const LowerRhsConfig& cfg = {}) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("norm_lower_rhs: matrix must be square");
  BoundBreakdown out;
  out.formula = "max_row + max_col + gamma";
  std::tie(out.max_row_l2, out.max_col_l2) = row_col_terms(a);
  const int n = a.rows();
  if (a.empty() || n == 0) return out;

  std::vector<int> grid;
  for (int k = 1; k < n; k *= 2) grid.push_back(k);
  grid.push_back(n);

  // the removal-free sup at the top grid order; the min at k = n itself
  // is identically zero since the whole index set may be removed
  out.full_sup_log_n =
      estimate_rad_norm(a, std::max(1.0, std::log(n + 1.0)), cfg.rad).lower;

  double best = -1.0;
  for (int k : grid) {
    const double p = std::max(1.0, std::log(k + 1.0));
    double gk = std::numeric_limits<double>::infinity();
    std::vector<int> gk_set;
    if (k >= n) {
      gk = 0.0;  // removing everything empties the sum
      gk_set.resize(n);
      std::iota(gk_set.begin(), gk_set.end(), 0);
    } else if (n <= cfg.exact_enum_max_n) {
      // exact: scan all subsets of size exactly k (removing more never
      // increases the sup, so smaller subsets are dominated)
      std::vector<int> idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        const double v = detail::removal_sup(a, idx, p, cfg.rad);
        if (v < gk) {
          gk = v;
          gk_set = idx;
        }
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
      }
    } else {
      // greedy peel: repeatedly drop the index whose removal decreases
      // the estimated sup the most, candidates ranked by row/col mass
      std::vector<int> removed;
      SparsePattern cur = a;
      double cur_val = detail::removal_sup(a, removed, p, cfg.rad);
      const int steps = std::min(k, cfg.greedy_step_cap);
      for (int step = 0; step < steps; ++step) {
        const std::vector<double> rl = cur.row_l2(), cl = cur.col_l2();
        std::vector<double> score(n, 0.0);
        for (int i = 0; i < n; ++i) score[i] = std::max(rl[i], cl[i]);
        for (int i : removed) score[i] = -1.0;
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int x, int y) { return score[x] > score[y]; });
        int best_i = -1;
        double best_v = cur_val;
        for (int c = 0; c < std::min(n, cfg.greedy_candidates); ++c) {
          const int i = order[c];
          if (score[i] < 0.0) break;
          std::vector<int> trial = removed;
          trial.push_back(i);
          const double v = detail::removal_sup(a, trial, p, cfg.rad);
          if (v < best_v) {
            best_v = v;
            best_i = i;
          }
        }
        if (best_i < 0) break;
        removed.push_back(best_i);
        std::sort(removed.begin(), removed.end());
        cur = detail::remove_indices(a, removed);
        cur_val = best_v;
        if (cur_val == 0.0) break;
      }
      gk = cur_val;
      gk_set = removed;
    }
    if (gk > best) {
      best = gk;
      out.gamma = gk;
      out.k_used = k;
      out.removed_set = gk_set;
    }
  }
  return out;
}

struct CirculantBounds {
  double lower = 0.0;   // sqrt(sum b^2) + R
  double upper = 0.0;   // sqrt(loglog(n+3)) sqrt(sum b^2) + loglog(n+3) R
  double band_l2 = 0.0;
  double rad_term = 0.0;             // R = estimated ||A||_{eps, log(n+1)}
  double rad_term_stderr = 0.0;
  double loglog = 0.0;               // log log (n+3)
  double degree_form_upper = std::numeric_limits<double>::quiet_NaN();  // sqrt(d) + R, 0-1 bands
  BoundBreakdown breakdown;
};

// Sandwich evaluation for circulant coefficient matrices; 0-1 bands also
// get the degree form without loglog factors.
inline CirculantBounds circulant_bounds(const CirculantSpec& spec,
                                        const RadNormConfig& cfg = {}) {
  CirculantBounds out;
  double b2 = 0.0;
  bool zero_one = true;
  int support = 0;
  for (double b : spec.band) {
    b2 += b * b;
    if (b != 0.0) {
      ++support;
      if (b != 1.0) zero_one = false;
    }
  }
  out.band_l2 = std::sqrt(b2);
  out.loglog = std::log(std::log(spec.n + 3.0));
  const SparsePattern a = circulant_matrix(spec);
  const RadNormEstimate est = estimate_rad_norm(a, std::log(spec.n + 1.0), cfg);
  out.rad_term = est.lower;
  out.rad_term_stderr = est.lower_stderr;
  out.lower = out.band_l2 + out.rad_term;
  out.upper = std::sqrt(out.loglog) * out.band_l2 + out.loglog * out.rad_term;
  if (zero_one && support > 0) {
    // band offsets come in +- pairs; d counts offset classes
    int d = spec.band[0] != 0.0 ? 1 : 0;
    for (int j = 1; 2 * j <= spec.n; ++j)
      if (spec.band[j] != 0.0 || spec.band[spec.n - j] != 0.0) ++d;
    out.degree_form_upper = std::sqrt(static_cast<double>(d)) + out.rad_term;
  }
  std::tie(out.breakdown.max_row_l2, out.breakdown.max_col_l2) = row_col_terms(a);
  out.breakdown.formula = "circulant sandwich";
  return out;
}

// directed edges inside I x I
inline long edges_within(const DirectedGraph& g, const std::vector<int>& iset) {
  std::vector<char> in(g.vertex_count(), 0);
  for (int v : iset) in[v] = 1;
  long c = 0;
  for (auto [u, v] : g.edges())
    if (in[u] && in[v]) ++c;
  return c;
}

// directed edges from I to J
inline long edges_between(const DirectedGraph& g, const std::vector<int>& iset,
                          const std::vector<int>& jset) {
  std::vector<char> in_i(g.vertex_count(), 0), in_j(g.vertex_count(), 0);
  for (int v : iset) in_i[v] = 1;
  for (int v : jset) in_j[v] = 1;
  long c = 0;
  for (auto [u, v] : g.edges())
    if (in_i[u] && in_j[v]) ++c;
  return c;
}

struct GraphNpBounds {
  double lower = 0.0;
  double upper = 0.0;
  // named components; NaN when a component does not apply
  double expansion = std::numeric_limits<double>::quiet_NaN();
  double sqrt_p_over_8 = std::numeric_limits<double>::quiet_NaN();
  double min_d_sqrt_p = std::numeric_limits<double>::quiet_NaN();
  double sparsity = std::numeric_limits<double>::quiet_NaN();        // M_s
  double sqrt_d_sparsity = std::numeric_limits<double>::quiet_NaN(); // sqrt(d M_s)
};

struct GraphNpConfig {
  std::vector<std::vector<int>> candidate_sets;  // e.g. Hamming levels
  int exact_sparsity_vcap = 16;  // exhaustive subsets below this |V|
  int exact_rect_vcap = 8;       // exhaustive rectangles below this |V|
};

namespace detail {

// greedy peeling suffixes: repeatedly drop a minimum-degree vertex
inline std::vector<std::vector<int>> peeling_suffixes(const DirectedGraph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : g.edges()) adj[u].push_back(v);
  std::vector<int> deg(n, 0);
  for (int v = 0; v < n; ++v) deg[v] = static_cast<int>(adj[v].size());
  std::vector<char> alive(n, 1);
  std::vector<int> removal;
  for (int round = 0; round < n; ++round) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (alive[v] && (pick < 0 || deg[v] < deg[pick])) pick = v;
    if (pick < 0) break;
    alive[pick] = 0;
    removal.push_back(pick);
    for (int w : adj[pick])
      if (alive[w]) --deg[w];
  }
  std::vector<std::vector<int>> out;
  std::vector<int> suffix;
  for (auto it = removal.rbegin(); it != removal.rend(); ++it) {
    suffix.push_back(*it);
    if (suffix.size() >= 2) out.push_back(suffix);
  }
  return out;
}

}  // namespace detail

// Bounds on N_{eps,p} from degree, sparsity and expansion: the upper is
// min{d, sqrt(p)} with the sqrt(d M_s) refinement as a reported
// component; the lower is the best of sqrt(p/8) (for p <= d) and the
// rectangle expansion value over an exhaustive (small |V|) or structured
// (stars, peel suffixes, supplied candidate sets) family.
inline GraphNpBounds graph_Np_bounds(const DirectedGraph& g, double p,
                                     const GraphNpConfig& cfg = {}) {
  if (p < 1.0) throw std::invalid_argument("graph_Np_bounds: p must be >= 1");
  GraphNpBounds out;
  const int n = g.vertex_count();
  const double d = static_cast<double>(g.max_degree());
  out.min_d_sqrt_p = std::min(d, std::sqrt(p));
  out.upper = out.min_d_sqrt_p;

  // sparsity value M_s = sup_I min{p, |E cap (I x I)|} / |I|
  double ms = 0.0;
  if (n <= cfg.exact_sparsity_vcap) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> iset;
      for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) iset.push_back(v);
      const double val =
          std::min(p, static_cast<double>(edges_within(g, iset))) / iset.size();
      ms = std::max(ms, val);
    }
  } else {
    std::vector<std::vector<int>> cands = detail::peeling_suffixes(g);
    for (const auto& s : cfg.candidate_sets)
      if (!s.empty()) cands.push_back(s);
    {
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      cands.push_back(std::move(all));
    }
    for (const auto& iset : cands) {
      const double val =
          std::min(p, static_cast<double>(edges_within(g, iset))) / iset.size();
      ms = std::max(ms, val);
    }
  }
  out.sparsity = ms;
  out.sqrt_d_sparsity = std::sqrt(d * ms);

  // expansion value over rectangles
  double exp_val = 0.0;
  auto rect = [&](const std::vector<int>& iset, const std::vector<int>& jset) {
    if (iset.empty() || jset.empty()) return;
    const double val = std::min(p, static_cast<double>(edges_between(g, iset, jset))) /
                       std::sqrt(static_cast<double>(iset.size()) * jset.size());
    exp_val = std::max(exp_val, val);
  };
  if (n <= cfg.exact_rect_vcap) {
    std::vector<std::vector<int>> subsets;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> s;
      for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) s.push_back(v);
      subsets.push_back(std::move(s));
    }
    for (const auto& iset : subsets)
      for (const auto& jset : subsets) rect(iset, jset);
  } else {
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : g.edges()) adj[u].push_back(v);
    for (int v = 0; v < n; ++v)
      if (!adj[v].empty()) rect({v}, adj[v]);
    std::vector<std::vector<int>> fam = detail::peeling_suffixes(g);
    for (const auto& s : cfg.candidate_sets)
      if (!s.empty()) fam.push_back(s);
    {
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      fam.push_back(std::move(all));
    }
    for (const auto& iset : fam) rect(iset, iset);
    // ordered pairs of supplied candidate sets (e.g. adjacent levels)
    for (const auto& iset : cfg.candidate_sets)
      for (const auto& jset : cfg.candidate_sets) rect(iset, jset);
  }
  out.expansion = exp_val;

  out.lower = exp_val;
  if (p <= d) {
    out.sqrt_p_over_8 = std::sqrt(p / 8.0);
    out.lower = std::max(out.lower, out.sqrt_p_over_8);
  }
  return out;
}

// Regime dispatch for the Hamming hypercube, as shape functions with
// constant 1: (sqrt(p/8), sqrt(p)) for p <= d, (d, d) for p >= d 2^d,
// and the log-interpolation in between.
inline GraphNpBounds hypercube_Np_bounds(int d, double p) {
  if (d < 1) throw std::invalid_argument("hypercube_Np_bounds: d must be >= 1");
  if (p < 1.0) throw std::invalid_argument("hypercube_Np_bounds: p must be >= 1");
  GraphNpBounds out;
  const double dd = static_cast<double>(d);
  out.min_d_sqrt_p = std::min(dd, std::sqrt(p));
  if (p <= dd) {
    out.sqrt_p_over_8 = std::sqrt(p / 8.0);
    out.lower = out.sqrt_p_over_8;
    out.upper = std::sqrt(p);
  } else if (p >= dd * std::pow(2.0, dd)) {
    out.lower = dd;
    out.upper = dd;
  } else {
    const double lp = std::log(p);
    out.lower = std::sqrt(dd * lp / std::log(std::exp(1.0) * dd / lp));
    out.upper = std::sqrt(dd * lp);
  }
  return out;
}

// factor F with N(Z_2^d) <= N(Z_m^d) <= F N(Z_2^d)
inline double torus_reduction_factor(int m) {
  if (m < 2) throw std::invalid_argument("torus_reduction_factor: m must be >= 2");
  if (m == 2) return 1.0;
  return m % 2 == 0 ? 2.0 : 3.0;
}

// sqrt(d) + N_{eps, d log m}(Z_2^d) shapes for the random torus norm
inline std::pair<double, double> torus_expected_norm_bounds(int m, int d) {
  if (m < 2 || d < 2)
    throw std::invalid_argument("torus_expected_norm_bounds: need m, d >= 2");
  const double p = d * std::log(static_cast<double>(m));
  const GraphNpBounds np = hypercube_Np_bounds(d, std::max(1.0, p));
  const double sd = std::sqrt(static_cast<double>(d));
  return {sd + np.lower, sd + torus_reduction_factor(m) * np.upper};
}

}  // namespace radbound
