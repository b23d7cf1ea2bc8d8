#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "radbound/rng.hpp"

namespace radbound {

inline constexpr int kExactRadsumCap = 20;

namespace detail {

inline double abs_pow(double x, double p) {
  x = std::fabs(x);
  const double pr = std::round(p);
  if (pr == p && pr >= 1.0 && pr <= 64.0) {  // integer exponent: cheap and exact-ish
    double acc = 1.0, base = x;
    auto e = static_cast<unsigned>(pr);
    while (e) {
      if (e & 1u) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }
  return std::pow(x, p);
}

inline double l2(std::span<const double> c) {
  double s = 0.0;
  for (double x : c) s += x * x;
  return std::sqrt(s);
}

}  // namespace detail

// Head-plus-tail proxy for the L_p norm of a Rademacher sum:
// sum of the floor(p) largest |c_k| plus sqrt(p) times the l2 norm of the rest.
inline double hitczenko_lp(std::span<const double> c, double p) {
  if (p < 1.0) throw std::invalid_argument("hitczenko_lp: p must be >= 1");
  std::vector<double> a(c.begin(), c.end());
  for (double& x : a) x = std::fabs(x);
  std::sort(a.begin(), a.end(), std::greater<>());
  const std::size_t head = std::min<std::size_t>(a.size(), static_cast<std::size_t>(std::floor(p)));
  double sum = 0.0;
  for (std::size_t k = 0; k < head; ++k) sum += a[k];
  double tail2 = 0.0;
  for (std::size_t k = head; k < a.size(); ++k) tail2 += a[k] * a[k];
  return sum + std::sqrt(p) * std::sqrt(tail2);
}

// Exact (E|sum c_k eps_k|^p)^(1/p) by full sign enumeration, len <= 20.
// Gray-code stepping with periodic resummation to hold rounding drift down.
inline double exact_lp_radsum(std::span<const double> c, double p) {
  if (p < 1.0) throw std::invalid_argument("exact_lp_radsum: p must be >= 1");
  const int m = static_cast<int>(c.size());
  if (m > kExactRadsumCap) throw std::invalid_argument("exact_lp_radsum: len exceeds 20");
  if (m == 0) return 0.0;

  // By symmetry fix the last sign to +1 and enumerate the rest.
  std::vector<int> sign(m, 1);
  double s = 0.0;
  for (double x : c) s += x;
  const std::uint64_t half = 1ull << (m - 1);
  double acc = detail::abs_pow(s, p);
  for (std::uint64_t idx = 1; idx < half; ++idx) {
    const int b = std::countr_zero(idx);
    sign[b] = -sign[b];
    s += 2.0 * sign[b] * c[b];
    if ((idx & 0xfffu) == 0) {  // resum to cancel accumulated drift
      s = 0.0;
      for (int k = 0; k < m; ++k) s += sign[k] * c[k];
    }
    acc += detail::abs_pow(s, p);
  }
  return std::pow(acc / static_cast<double>(half), 1.0 / p);
}

// Exact P(|sum c_k eps_k| >= threshold) by the same enumeration.
inline double exact_tail_prob(std::span<const double> c, double threshold) {
  const int m = static_cast<int>(c.size());
  if (m > kExactRadsumCap) throw std::invalid_argument("exact_tail_prob: len exceeds 20");
  if (m == 0) return threshold <= 0.0 ? 1.0 : 0.0;
  std::vector<int> sign(m, 1);
  double s = 0.0;
  for (double x : c) s += x;
  const std::uint64_t half = 1ull << (m - 1);
  std::uint64_t hits = std::fabs(s) >= threshold ? 1 : 0;
  for (std::uint64_t idx = 1; idx < half; ++idx) {
    const int b = std::countr_zero(idx);
    sign[b] = -sign[b];
    s += 2.0 * sign[b] * c[b];
    if ((idx & 0xfffu) == 0) {
      s = 0.0;
      for (int k = 0; k < m; ++k) s += sign[k] * c[k];
    }
    if (std::fabs(s) >= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(half);
}

struct McMoment {
  double value = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

// Monte Carlo estimate of (E|sum c_k eps_k|^p)^(1/p); the standard error
// of the p-th-root estimate follows by the delta method.
inline McMoment mc_lp_radsum(std::span<const double> c, double p, long samples,
                             std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("mc_lp_radsum: samples must be >= 1");
  if (p < 1.0) throw std::invalid_argument("mc_lp_radsum: p must be >= 1");
  const int m = static_cast<int>(c.size());
  double sum = 0.0, sumsq = 0.0;
  for (long k = 0; k < samples; ++k) {
    SignStream signs(derive_seed(seed, 0x6d63u, static_cast<std::uint64_t>(k)));
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += signs.next_sign() * c[i];
    const double z = detail::abs_pow(s, p);
    sum += z;
    sumsq += z * z;
  }
  McMoment out;
  out.samples = samples;
  const double mean = sum / static_cast<double>(samples);
  out.value = std::pow(mean, 1.0 / p);
  if (samples > 1 && mean > 0.0) {
    const double var = std::max(0.0, (sumsq - sum * mean) / static_cast<double>(samples - 1));
    const double se_mean = std::sqrt(var / static_cast<double>(samples));
    out.stderr_ = out.value / (p * mean) * se_mean;
  }
  return out;
}

}  // namespace radbound
