#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "radbound/sparse.hpp"

namespace radbound {

// Circulant matrix a_ij = band[(i - j) mod n].
struct CirculantSpec {
  int n = 0;
  std::vector<double> band;  // b_0 .. b_{n-1}

  CirculantSpec() = default;
  CirculantSpec(int n_, std::vector<double> band_) : n(n_), band(std::move(band_)) {
    if (n <= 0 || static_cast<int>(band.size()) != n)
      throw std::invalid_argument("CirculantSpec: band length must equal n");
  }
};

// Circulant graph on [n]: (i,j) is an edge iff i-j = +-p_k mod n.
struct OffsetGraphSpec {
  int n = 0;
  std::vector<int> offsets;  // strictly increasing, 1 <= p_1 < ... < p_d <= n/2

  OffsetGraphSpec() = default;
  OffsetGraphSpec(int n_, std::vector<int> offsets_) : n(n_), offsets(std::move(offsets_)) {
    if (n < 2) throw std::invalid_argument("OffsetGraphSpec: n must be >= 2");
    int prev = 0;
    for (int p : offsets) {
      if (p <= prev || 2 * p > n)
        throw std::invalid_argument("OffsetGraphSpec: offsets must satisfy 1 <= p_1 < ... <= n/2");
      prev = p;
    }
    if (offsets.empty()) throw std::invalid_argument("OffsetGraphSpec: no offsets");
  }

  int degree() const {
    const int d = static_cast<int>(offsets.size());
    return 2 * offsets.back() == n ? 2 * d - 1 : 2 * d;
  }
};

class DirectedGraph {
 public:
  DirectedGraph() = default;
  DirectedGraph(int vertex_count, std::vector<std::pair<int, int>> edges)
      : n_(vertex_count), edges_(std::move(edges)) {
    for (auto [u, v] : edges_)
      if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw std::invalid_argument("DirectedGraph: edge endpoint out of range");
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  int vertex_count() const { return n_; }
  long edge_count() const { return static_cast<long>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool has_edge(int u, int v) const {
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(u, v));
  }

  int max_degree() const {  // out-degree; graphs here are symmetric
    std::vector<int> deg(n_, 0);
    for (auto [u, v] : edges_) ++deg[u];
    int m = 0;
    for (int d : deg) m = std::max(m, d);
    return m;
  }

  SparsePattern adjacency() const {
    std::vector<Entry> es;
    es.reserve(edges_.size());
    for (auto [u, v] : edges_) es.push_back({u, v, 1.0});
    return SparsePattern(n_, n_, std::move(es));
  }

  friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
};

inline SparsePattern circulant_matrix(const CirculantSpec& spec) {
  std::vector<Entry> es;
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.n; ++j) {
      const double w = spec.band[((i - j) % spec.n + spec.n) % spec.n];
      if (w != 0.0) es.push_back({i, j, w});
    }
  return SparsePattern(spec.n, spec.n, std::move(es));
}

inline DirectedGraph circulant_graph(const OffsetGraphSpec& spec) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < spec.n; ++i)
    for (int p : spec.offsets) {
      edges.emplace_back(i, (i + p) % spec.n);
      edges.emplace_back(i, (i - p + spec.n) % spec.n);
    }
  return DirectedGraph(spec.n, std::move(edges));
}

// 0-1 band with ones exactly at offsets +-p_k mod n.
inline CirculantSpec adjacency_band(const OffsetGraphSpec& spec) {
  std::vector<double> band(spec.n, 0.0);
  for (int p : spec.offsets) {
    band[p] = 1.0;
    band[spec.n - p] = 1.0;
  }
  return CirculantSpec(spec.n, std::move(band));
}

inline DirectedGraph hypercube(int d) {
  if (d < 1 || d > 24) throw std::invalid_argument("hypercube: d out of range");
  const int n = 1 << d;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int b = 0; b < d; ++b) edges.emplace_back(v, v ^ (1 << b));
  return DirectedGraph(n, std::move(edges));
}

// Hamming level sets V_l = {v : popcount(v) == l}.
inline std::vector<std::vector<int>> hypercube_levels(int d) {
  std::vector<std::vector<int>> levels(d + 1);
  for (int v = 0; v < (1 << d); ++v) levels[__builtin_popcount(static_cast<unsigned>(v))].push_back(v);
  return levels;
}

namespace detail {

inline long ipow_checked(int base, int exp) {
  long r = 1;
  for (int k = 0; k < exp; ++k) {
    r *= base;
    if (r > (1L << 24)) throw std::invalid_argument("torus: m^d too large");
  }
  return r;
}

}  // namespace detail

// Z_m^d: vertices differ by +-1 mod m in exactly one coordinate.
// For m = 2 this coincides with hypercube(d).
inline DirectedGraph torus(int m, int d) {
  if (m < 2) throw std::invalid_argument("torus: m must be >= 2");
  if (d < 1) throw std::invalid_argument("torus: d must be >= 1");
  const long n = detail::ipow_checked(m, d);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> coord(d);
  for (long v = 0; v < n; ++v) {
    long rest = v;
    for (int k = 0; k < d; ++k) {
      coord[k] = static_cast<int>(rest % m);
      rest /= m;
    }
    long stride = 1;
    for (int k = 0; k < d; ++k) {
      for (int delta : {1, m - 1}) {
        const int nk = (coord[k] + delta) % m;
        if (nk == coord[k]) continue;  // m = 1 never happens; m = 2 merges +-1
        const long w = v + (static_cast<long>(nk) - coord[k]) * stride;
        edges.emplace_back(static_cast<int>(v), static_cast<int>(w));
      }
      stride *= m;
    }
  }
  return DirectedGraph(static_cast<int>(n), std::move(edges));
}

// Identification (i_1..i_d) -> sum i_k m^{k-1} turning Z_m^d into a
// subgraph of a circulant graph with bands +-m^{k-1}, +-(m-1)m^{k-1}.
struct TorusBandEmbedding {
  int m = 0;
  int d = 0;
  OffsetGraphSpec spec;

  int label(std::span<const int> coords) const {
    long v = 0, stride = 1;
    for (int k = 0; k < d; ++k) {
      v += static_cast<long>(coords[k]) * stride;
      stride *= m;
    }
    return static_cast<int>(v);
  }

  std::vector<int> coords(int label) const {
    std::vector<int> c(d);
    long rest = label;
    for (int k = 0; k < d; ++k) {
      c[k] = static_cast<int>(rest % m);
      rest /= m;
    }
    return c;
  }
};

inline TorusBandEmbedding torus_as_circulant_bands(int m, int d) {
  if (m < 2) throw std::invalid_argument("torus_as_circulant_bands: m must be >= 2");
  if (d < 1) throw std::invalid_argument("torus_as_circulant_bands: d must be >= 1");
  const long n = detail::ipow_checked(m, d);
  std::vector<int> offsets;
  long stride = 1;
  for (int k = 0; k < d; ++k) {
    for (long raw : {stride, (m - 1) * stride}) {
      const long r = raw % n;
      if (r == 0) continue;
      offsets.push_back(static_cast<int>(std::min(r, n - r)));
    }
    stride *= m;
  }
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  return TorusBandEmbedding{m, d, OffsetGraphSpec(static_cast<int>(n), std::move(offsets))};
}

}  // namespace radbound
