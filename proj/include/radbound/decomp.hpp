#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "radbound/patterns.hpp"
#include "radbound/rademacher.hpp"
#include "radbound/sparse.hpp"

namespace radbound {

// Subset-sum neighborhoods of a circulant graph. D_k and U_k share one
// sorted list of distinct subset sums; every cube has the same size m.
class CubeFamily {
 public:
  explicit CubeFamily(OffsetGraphSpec spec) : spec_(std::move(spec)) {
    const int d = static_cast<int>(spec_.offsets.size());
    if (d > 20) throw std::invalid_argument("CubeFamily: more than 20 offsets");
    std::vector<int> sums;
    sums.reserve(1u << d);
    sums.push_back(0);
    for (int i = 0; i < d; ++i) {
      const std::size_t cur = sums.size();
      for (std::size_t j = 0; j < cur; ++j)
        sums.push_back((sums[j] + spec_.offsets[i]) % spec_.n);
    }
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
    sums_ = std::move(sums);
  }

  const OffsetGraphSpec& spec() const { return spec_; }
  int m() const { return static_cast<int>(sums_.size()); }
  const std::vector<int>& subset_sums() const { return sums_; }

  // D_k = { k - sum mod n }
  std::vector<int> lower_cube(int k) const {
    std::vector<int> out;
    out.reserve(sums_.size());
    for (int s : sums_) out.push_back(((k - s) % spec_.n + spec_.n) % spec_.n);
    std::sort(out.begin(), out.end());
    return out;
  }

  // U_k = { k + sum mod n }
  std::vector<int> upper_cube(int k) const {
    std::vector<int> out;
    out.reserve(sums_.size());
    for (int s : sums_) out.push_back((k + s) % spec_.n);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  OffsetGraphSpec spec_;
  std::vector<int> sums_;
};

inline std::vector<int> lower_cube(int k, const OffsetGraphSpec& spec) {
  return CubeFamily(spec).lower_cube(k);
}

inline std::vector<int> upper_cube(int k, const OffsetGraphSpec& spec) {
  return CubeFamily(spec).upper_cube(k);
}

// First k (ascending) whose lower cube avoids J well: |D_k \ J| >= (1-c) m.
// The averaging bound guarantees existence whenever |J| <= c n.
inline int exclusion_pick(const std::vector<char>& in_j, const CubeFamily& fam, double c) {
  const int n = fam.spec().n;
  if (static_cast<int>(in_j.size()) != n)
    throw std::invalid_argument("exclusion_pick: J mask has wrong length");
  long jsize = 0;
  for (char b : in_j) jsize += b ? 1 : 0;
  if (static_cast<double>(jsize) > c * n)
    throw std::invalid_argument("exclusion_pick: |J| exceeds c*n");
  const double need = (1.0 - c) * fam.m();
  for (int k = 0; k < n; ++k) {
    int outside = 0;
    for (int s : fam.subset_sums())
      if (!in_j[((k - s) % n + n) % n]) ++outside;
    if (static_cast<double>(outside) >= need) return k;
  }
  throw std::logic_error("exclusion_pick: no qualifying k (averaging bound violated)");
}

// directed edges of the circulant graph inside I x I
inline long edges_within_circulant(const OffsetGraphSpec& spec, const std::vector<char>& in_i) {
  long count = 0;
  const int n = spec.n;
  for (int x = 0; x < n; ++x) {
    if (!in_i[x]) continue;
    for (int p : spec.offsets) {
      if (in_i[(x + p) % n]) ++count;
      const int down = (x - p + n) % n;
      if (2 * p != n && in_i[down]) ++count;
    }
  }
  return count;
}

struct GoodSequence {
  OffsetGraphSpec spec;
  int m = 0;
  std::vector<int> centers;                // k_1 .. k_s
  std::vector<std::vector<int>> trimmed;   // I_l, sorted, pairwise disjoint
  long covered_edges = 0;                  // sum over l of |E cap (I_l x I_l)|

  int s() const { return static_cast<int>(centers.size()); }
};

// Inductive construction: round r+1 excludes the union of the earlier
// cubes with c = 1/8. All certificates are recomputed before returning;
// a failure indicates a bug, not bad input.
inline GoodSequence good_sequence(const OffsetGraphSpec& spec) {
  const CubeFamily fam(spec);
  const int n = spec.n;
  const int m = fam.m();
  const int d = static_cast<int>(spec.offsets.size());
  const int s_target = static_cast<int>((n + 8L * m - 1) / (8L * m));  // ceil(n / 8m)

  GoodSequence out;
  out.spec = spec;
  out.m = m;
  std::vector<char> taken(n, 0);
  for (int r = 0; r < s_target; ++r) {
    const int k = exclusion_pick(taken, fam, 1.0 / 8.0);
    std::vector<int> cube = fam.lower_cube(k);
    std::vector<int> trimmed;
    for (int v : cube)
      if (!taken[v]) trimmed.push_back(v);
    for (int v : cube) taken[v] = 1;
    out.centers.push_back(k);
    out.trimmed.push_back(std::move(trimmed));
  }

  // certificates, from scratch
  if (8L * out.s() * m < n) throw std::logic_error("good_sequence: s < n/(8m)");
  std::vector<char> seen(n, 0);
  long covered = 0;
  for (int l = 0; l < out.s(); ++l) {
    const auto& il = out.trimmed[l];
    if (8L * static_cast<long>(il.size()) < 7L * m)
      throw std::logic_error("good_sequence: |I_l| < 7m/8");
    const std::vector<int> cube = fam.lower_cube(out.centers[l]);
    for (int v : il) {
      if (seen[v]) throw std::logic_error("good_sequence: trimmed cubes not disjoint");
      if (!std::binary_search(cube.begin(), cube.end(), v))
        throw std::logic_error("good_sequence: I_l not inside D_{k_l}");
      seen[v] = 1;
    }
    std::vector<char> mask(n, 0);
    for (int v : il) mask[v] = 1;
    covered += edges_within_circulant(spec, mask);
  }
  out.covered_edges = covered;
  if (16L * covered < static_cast<long>(d) * n)
    throw std::logic_error("good_sequence: covered edges < dn/16");
  return out;
}

// Block-diagonal cover: B_k is the adjacency of the union of the shifted
// trimmed cubes, N = n of them. Blocks are the shifted I_l, so every
// block has at most m <= 2^d vertices. The matrices are generated on
// demand; materializing all N at once is quadratic in n.
struct BlockCover {
  OffsetGraphSpec spec;
  GoodSequence seq;
  int N = 0;
  int max_block = 0;
  long min_edge_multiplicity = 0;  // min over (i,j) in E of sum_k B_k[i][j]
  bool blocks_ok = false;
  bool entrywise_ok = false;  // (1/32) 1_E <= (1/N) sum_k B_k

  // B_k as a 0-1 pattern
  SparsePattern block(int k) const {
    const int n = spec.n;
    std::vector<Entry> es;
    for (const auto& il : seq.trimmed) {
      std::vector<char> mask(n, 0);
      for (int v : il) mask[(v + k) % n] = 1;
      for (int v : il) {
        const int x = (v + k) % n;
        for (int p : spec.offsets) {
          if (mask[(x + p) % n]) es.push_back({x, (x + p) % n, 1.0});
          const int down = (x - p + n) % n;
          if (2 * p != n && mask[down]) es.push_back({x, down, 1.0});
        }
      }
    }
    return SparsePattern(n, n, std::move(es));
  }
};

inline BlockCover block_cover(const OffsetGraphSpec& spec) {
  BlockCover out;
  out.spec = spec;
  out.seq = good_sequence(spec);
  const int n = spec.n;
  out.N = n;

  int max_block = 0;
  for (const auto& il : out.seq.trimmed)
    max_block = std::max(max_block, static_cast<int>(il.size()));
  out.max_block = max_block;
  const int d = static_cast<int>(spec.offsets.size());  // <= 20 via CubeFamily
  out.blocks_ok = max_block <= (1 << d);

  // For an edge (i, j) with offset delta = j - i, the number of k with
  // B_k[i][j] = 1 is sum_l |I_l cap (I_l - delta)|: shifting by k walks
  // the pair across every cyclic position exactly once. The count only
  // depends on delta, so the entrywise certificate reduces to one check
  // per offset class.
  long min_mult = -1;
  for (int p : spec.offsets) {
    for (int delta : {p, n - p}) {
      long mult = 0;
      for (const auto& il : out.seq.trimmed) {
        std::vector<char> mask(n, 0);
        for (int v : il) mask[v] = 1;
        for (int v : il)
          if (mask[(v + delta) % n]) ++mult;
      }
      if (min_mult < 0 || mult < min_mult) min_mult = mult;
      if (2 * p == n) break;  // delta and n-delta coincide as edge classes
    }
  }
  out.min_edge_multiplicity = std::max(min_mult, 0L);
  out.entrywise_ok = 32L * out.min_edge_multiplicity >= out.N;
  if (!out.blocks_ok) throw std::logic_error("block_cover: block larger than 2^d");
  if (!out.entrywise_ok) throw std::logic_error("block_cover: entrywise certificate failed");
  return out;
}

// Entrywise certificate by direct materialization; used to cross-check
// the offset-class argument on small instances.
inline bool block_cover_entrywise_naive(const BlockCover& cover) {
  const int n = cover.spec.n;
  std::vector<long> mult(static_cast<std::size_t>(n) * n, 0);
  for (int k = 0; k < cover.N; ++k) {
    const SparsePattern bk = cover.block(k);
    for (const Entry& e : bk.entries()) ++mult[static_cast<std::size_t>(e.row) * n + e.col];
  }
  const SparsePattern adj = circulant_graph(cover.spec).adjacency();
  for (const Entry& e : adj.entries())
    if (32L * mult[static_cast<std::size_t>(e.row) * n + e.col] < cover.N) return false;
  return true;
}

// Magnitude split of a circulant band: normalize to max |b| = 1, then
// level k >= 1 holds entries in (e^-k, e^-k+1] and level 0 the rest.
struct DyadicSplit {
  double scale = 1.0;  // original band = scale * sum of level bands
  int k0 = 0;          // floor(log log (n+3))
  std::vector<CirculantSpec> levels;  // levels[k], k = 0..k0, normalized

  CirculantSpec reassembled() const {
    CirculantSpec total(levels.front().n, std::vector<double>(levels.front().n, 0.0));
    for (const CirculantSpec& lvl : levels)
      for (int j = 0; j < total.n; ++j) total.band[j] += lvl.band[j];
    return total;
  }
};

inline DyadicSplit dyadic_split(const CirculantSpec& spec) {
  DyadicSplit out;
  double maxb = 0.0;
  for (double b : spec.band) maxb = std::max(maxb, std::fabs(b));
  if (maxb == 0.0) throw std::invalid_argument("dyadic_split: zero band");
  out.scale = maxb;
  out.k0 = static_cast<int>(std::floor(std::log(std::log(spec.n + 3.0))));
  out.k0 = std::max(out.k0, 0);
  out.levels.assign(out.k0 + 1, CirculantSpec(spec.n, std::vector<double>(spec.n, 0.0)));
  for (int j = 0; j < spec.n; ++j) {
    const double b = spec.band[j] / maxb;
    if (b == 0.0) continue;
    const double mag = std::fabs(b);
    // smallest k >= 1 with mag > e^-k puts mag in (e^-k, e^-k+1];
    // anything at or below e^-k0 falls to level 0
    int level = 0;
    for (int k = 1; k <= out.k0; ++k)
      if (mag > std::exp(-static_cast<double>(k))) {
        level = k;
        break;
      }
    out.levels[level].band[j] = b;
  }
  return out;
}

struct ComposedUpperBound {
  double total = 0.0;        // in original (unnormalized) units
  double scale = 1.0;
  int k0 = 0;
  double level0_term = 0.0;  // Gaussian-shape contribution, normalized units
  std::vector<double> level_terms;  // k >= 1, normalized units
};

// The assembled per-level upper bound from the dyadic split: Gaussian
// shape for level 0, band-norm-plus-radnorm shape for each level k >= 1.
inline ComposedUpperBound composed_upper_bound(const CirculantSpec& spec,
                                               const RadNormConfig& cfg = {}) {
  const DyadicSplit split = dyadic_split(spec);
  ComposedUpperBound out;
  out.scale = split.scale;
  out.k0 = split.k0;
  const double n = spec.n;
  double total = 0.0;
  {
    const CirculantSpec& lvl = split.levels[0];
    double b2 = 0.0;
    for (double b : lvl.band) b2 += b * b;
    if (b2 > 0.0) {
      out.level0_term = 2.0 * std::sqrt(b2) +
                        std::exp(-static_cast<double>(split.k0)) * std::sqrt(std::log(n));
      total += out.level0_term;
    }
  }
  for (int k = 1; k <= split.k0; ++k) {
    const CirculantSpec& lvl = split.levels[k];
    double b2 = 0.0;
    bool any = false;
    for (double b : lvl.band) {
      b2 += b * b;
      any |= b != 0.0;
    }
    double term = 0.0;
    if (any) {
      const double r =
          estimate_rad_norm(circulant_matrix(lvl), std::log(n + 1.0), cfg).lower;
      term = std::exp(1.0) * std::sqrt(b2) + r;
    }
    out.level_terms.push_back(term);
    total += term;
  }
  out.total = split.scale * total;
  return out;
}

}  // namespace radbound
