#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "radbound/operator_norm.hpp"
#include "radbound/patterns.hpp"
#include "radbound/radsum.hpp"
#include "radbound/rng.hpp"
#include "radbound/sparse.hpp"

namespace radbound {

// One sign realization, one bit per stored entry in canonical entry order.
struct SignSample {
  std::uint64_t key = 0;
  std::vector<int> signs;
};

inline SignSample draw_signs(const SparsePattern& a, std::uint64_t key) {
  SignSample out;
  out.key = key;
  out.signs.resize(a.nnz());
  SignStream stream(key);
  for (int& s : out.signs) s = stream.next_sign();
  return out;
}

inline SparsePattern apply_signs(const SparsePattern& a, const SignSample& sample) {
  if (static_cast<int>(sample.signs.size()) != a.nnz())
    throw std::invalid_argument("apply_signs: sample size mismatch");
  std::vector<Entry> es = a.entries();
  for (std::size_t i = 0; i < es.size(); ++i) es[i].weight *= sample.signs[i];
  return SparsePattern(a.rows(), a.cols(), std::move(es));
}

struct NormEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Orientation-canonical form: the estimate runs on A or A^T, whichever
// compares lower by (positions, |weights|, leading-sign-normalized
// weights). ||eps . A|| and ||eps . A^T|| agree in law, and fixing the
// orientation makes the estimate on A and on A^T (and on -A) bitwise
// identical under shared seeds.
inline SparsePattern transpose_canonical(const SparsePattern& a) {
  const SparsePattern t = a.transposed();
  const auto& ea = a.entries();
  const auto& et = t.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].row != et[i].row) return ea[i].row < et[i].row ? a : t;
    if (ea[i].col != et[i].col) return ea[i].col < et[i].col ? a : t;
  }
  for (std::size_t i = 0; i < ea.size(); ++i) {
    const double wa = std::fabs(ea[i].weight), wt = std::fabs(et[i].weight);
    if (wa != wt) return wa < wt ? a : t;
  }
  if (!ea.empty()) {
    const double fa = ea.front().weight > 0 ? 1.0 : -1.0;
    const double ft = et.front().weight > 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      const double wa = fa * ea[i].weight, wt = ft * et[i].weight;
      if (wa != wt) return wa < wt ? a : t;
    }
  }
  return a;
}

// samples indexed by counter; reduction is sequential in index order so
// the result is independent of the worker count
inline NormEstimate reduce_norms(const std::vector<double>& norms, std::uint64_t seed) {
  NormEstimate out;
  out.samples = static_cast<long>(norms.size());
  out.seed = seed;
  double sum = 0.0;
  for (double v : norms) sum += v;
  out.mean = sum / static_cast<double>(norms.size());
  if (norms.size() > 1) {
    double ss = 0.0;
    for (double v : norms) ss += (v - out.mean) * (v - out.mean);
    const double sd = std::sqrt(ss / static_cast<double>(norms.size() - 1));
    out.stderr_ = sd / std::sqrt(static_cast<double>(norms.size()));
  }
  return out;
}

template <typename Fn>
inline void parallel_for_samples(long samples, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (long k = 0; k < samples; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (long k = t; k < samples; k += threads) fn(k);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Mean operator norm over independent sign realizations of A. Per-sample
// seeds are counter-split from the root seed; the result is a pure
// function of (A, samples, seed, tol) regardless of thread count.
inline NormEstimate estimate_expected_norm(const SparsePattern& a, long samples,
                                           std::uint64_t seed, double tol = 1e-10,
                                           int threads = 1, int norm_max_iter = 20000) {
  if (samples < 2) throw std::invalid_argument("estimate_expected_norm: samples must be >= 2");
  const SparsePattern canon = detail::transpose_canonical(a);
  std::vector<double> norms(samples, 0.0);
  detail::parallel_for_samples(samples, threads, [&](long k) {
    const SignSample sample = draw_signs(canon, derive_seed(seed, 0x736eu, static_cast<std::uint64_t>(k)));
    const SparsePattern x = apply_signs(canon, sample);
    norms[k] = operator_norm(x, tol, norm_max_iter, derive_seed(seed, 0x706fu, static_cast<std::uint64_t>(k))).value;
  });
  return detail::reduce_norms(norms, seed);
}

struct FloorCheckReport {
  bool pass = true;
  double floor = 0.0;        // max(max_i ||row_i||, max_j ||col_j||) of A
  double min_margin = 0.0;   // min over realizations of norm - floor
  long samples = 0;
};

// Per-realization deterministic floor: eps^2 = 1 leaves every row and
// column length of eps . A equal to that of A, so each realization's
// norm is at least the largest of them.
inline FloorCheckReport check_norm_floor(const SparsePattern& a, long samples,
                                         std::uint64_t seed, double tol = 1e-11,
                                         int threads = 1) {
  FloorCheckReport rep;
  rep.samples = samples;
  double mr = 0.0;
  for (double v : a.row_l2()) mr = std::max(mr, v);
  for (double v : a.col_l2()) mr = std::max(mr, v);
  rep.floor = mr;
  std::vector<double> margins(samples, 0.0);
  detail::parallel_for_samples(samples, threads, [&](long k) {
    const SignSample sample = draw_signs(a, derive_seed(seed, 0x736eu, static_cast<std::uint64_t>(k)));
    const SparsePattern x = apply_signs(a, sample);
    margins[k] = operator_norm(x, tol, 50000, derive_seed(seed, 0x706fu, static_cast<std::uint64_t>(k))).value - rep.floor;
  });
  rep.min_margin = margins.empty() ? 0.0 : *std::min_element(margins.begin(), margins.end());
  rep.pass = rep.min_margin >= -1e-9;
  return rep;
}

struct ContractionReport {
  NormEstimate small;  // E||eps . A||
  NormEstimate large;  // E||eps . B||
  double slack = 0.0;  // 3 (stderr_A + stderr_B)
  bool pass = false;
};

// Contraction comparison: requires |a_ij| <= |b_ij| entrywise and shares
// one sign stream, drawn over B's entries and looked up by position for
// A's (a's support is contained in b's).
inline ContractionReport check_contraction(const SparsePattern& a, const SparsePattern& b,
                                           long samples, std::uint64_t seed,
                                           double tol = 1e-10, int threads = 1) {
  if (!entrywise_dominates(a.abs(), b.abs(), 1.0))
    throw std::invalid_argument("check_contraction: |A| <= |B| fails entrywise");
  if (samples < 2) throw std::invalid_argument("check_contraction: samples must be >= 2");

  // position of each a-entry inside b's canonical entry list
  std::vector<std::size_t> pos(a.nnz());
  {
    const auto& eb = b.entries();
    for (int i = 0; i < a.nnz(); ++i) {
      const Entry& e = a.entries()[i];
      const Entry probe{e.row, e.col, 0.0};
      const auto it = std::lower_bound(eb.begin(), eb.end(), probe, entry_pos_less);
      if (it == eb.end() || it->row != e.row || it->col != e.col)
        throw std::logic_error("check_contraction: support containment violated");
      pos[i] = static_cast<std::size_t>(it - eb.begin());
    }
  }

  std::vector<double> na(samples, 0.0), nb(samples, 0.0);
  detail::parallel_for_samples(samples, threads, [&](long k) {
    const SignSample sb = draw_signs(b, derive_seed(seed, 0x736eu, static_cast<std::uint64_t>(k)));
    SignSample sa;
    sa.key = sb.key;
    sa.signs.resize(a.nnz());
    for (int i = 0; i < a.nnz(); ++i) sa.signs[i] = sb.signs[pos[i]];
    const std::uint64_t nseed = derive_seed(seed, 0x706fu, static_cast<std::uint64_t>(k));
    na[k] = operator_norm(apply_signs(a, sa), tol, 20000, nseed).value;
    nb[k] = operator_norm(apply_signs(b, sb), tol, 20000, nseed).value;
  });
  ContractionReport rep;
  rep.small = detail::reduce_norms(na, seed);
  rep.large = detail::reduce_norms(nb, seed);
  rep.slack = 3.0 * (rep.small.stderr_ + rep.large.stderr_);
  rep.pass = rep.small.mean <= rep.large.mean + rep.slack;
  return rep;
}

struct ShiftInvarianceReport {
  std::vector<int> shifts;
  std::vector<double> values;   // L_p estimate per shift
  std::vector<double> stderrs;
  double max_deviation = 0.0;   // max pairwise |value_i - value_j|
  double slack = 0.0;           // 3 max stderr pair sum, or exactness tolerance
  bool exact = false;
  bool pass = false;
};

// Shift invariance of circulant bilinear sign sums: the law of
// sum a_ij eps_ij s_{i+k} t_{j+k} does not depend on k. Small instances
// are checked by full sign enumeration, larger ones by Monte Carlo with
// one sample stream shared across shifts.
inline ShiftInvarianceReport check_shift_invariance(const CirculantSpec& spec,
                                                    const std::vector<double>& s,
                                                    const std::vector<double>& t, double p,
                                                    long samples, std::uint64_t seed,
                                                    int max_shifts = 8) {
  const int n = spec.n;
  if (static_cast<int>(s.size()) != n || static_cast<int>(t.size()) != n)
    throw std::invalid_argument("check_shift_invariance: vector length mismatch");
  const SparsePattern a = circulant_matrix(spec);

  ShiftInvarianceReport rep;
  const int count = std::min(max_shifts, n);
  for (int j = 0; j < count; ++j) rep.shifts.push_back(j * n / count);

  const auto& es = a.entries();
  const int nnz = a.nnz();
  // coefficient list per shift
  std::vector<std::vector<double>> coef(rep.shifts.size(), std::vector<double>(nnz));
  for (std::size_t si = 0; si < rep.shifts.size(); ++si) {
    const int k = rep.shifts[si];
    for (int e = 0; e < nnz; ++e)
      coef[si][e] = es[e].weight * s[(es[e].row + k) % n] * t[(es[e].col + k) % n];
  }

  if (nnz <= kExactRadsumCap) {
    rep.exact = true;
    for (std::size_t si = 0; si < rep.shifts.size(); ++si) {
      std::vector<double> c = coef[si];
      std::sort(c.begin(), c.end());  // fixed summation order across shifts
      rep.values.push_back(exact_lp_radsum(c, p));
      rep.stderrs.push_back(0.0);
    }
    rep.slack = 1e-9;
  } else {
    std::vector<double> acc(rep.shifts.size(), 0.0), accsq(rep.shifts.size(), 0.0);
    for (long m = 0; m < samples; ++m) {
      SignStream stream(derive_seed(seed, 0x7368u, static_cast<std::uint64_t>(m)));
      std::vector<int> signs(nnz);
      for (int& sg : signs) sg = stream.next_sign();
      for (std::size_t si = 0; si < rep.shifts.size(); ++si) {
        double sum = 0.0;
        for (int e = 0; e < nnz; ++e) sum += signs[e] * coef[si][e];
        const double z = detail::abs_pow(sum, p);
        acc[si] += z;
        accsq[si] += z * z;
      }
    }
    for (std::size_t si = 0; si < rep.shifts.size(); ++si) {
      const double mean = acc[si] / static_cast<double>(samples);
      const double value = std::pow(mean, 1.0 / p);
      double se = 0.0;
      if (samples > 1 && mean > 0.0) {
        const double var =
            std::max(0.0, (accsq[si] - acc[si] * mean) / static_cast<double>(samples - 1));
        se = value / (p * mean) * std::sqrt(var / static_cast<double>(samples));
      }
      rep.values.push_back(value);
      rep.stderrs.push_back(se);
    }
  }

  double lo = rep.values[0], hi = rep.values[0];
  double max_se = 0.0;
  for (std::size_t si = 0; si < rep.values.size(); ++si) {
    lo = std::min(lo, rep.values[si]);
    hi = std::max(hi, rep.values[si]);
    max_se = std::max(max_se, rep.stderrs[si]);
  }
  rep.max_deviation = hi - lo;
  if (!rep.exact) rep.slack = 3.0 * 2.0 * max_se;
  rep.pass = rep.max_deviation <= rep.slack;
  return rep;
}

}  // namespace radbound
