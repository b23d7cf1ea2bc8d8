#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "radbound/rng.hpp"
#include "radbound/sparse.hpp"

namespace radbound {

struct NormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

namespace detail {

inline double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline void random_unit(Rng& rng, std::vector<double>& v) {
  double nrm = 0.0;
  while (nrm == 0.0) {
    for (double& x : v) x = rng.next_symmetric();
    nrm = vec_norm(v);
  }
  for (double& x : v) x /= nrm;
}

}  // namespace detail

// Largest singular value by power iteration on the Gram operator A^T A.
// Three independently seeded runs, max taken; a run reseeds its vector
// when the Rayleigh quotient stagnates without meeting tol.
// Deterministic given (A, tol, max_iter, seed).
inline NormResult operator_norm(const SparsePattern& a, double tol = 1e-10,
                                int max_iter = 20000, std::uint64_t seed = 1) {
  if (tol <= 0.0) throw std::invalid_argument("operator_norm: tol must be positive");
  NormResult best;
  if (a.empty()) {
    best.converged = true;
    return best;
  }

  const int nr = a.rows(), nc = a.cols();
  std::vector<double> v(nc), w(nr), u(nc), r(nc);
  bool have_best = false;

  for (int run = 0; run < 3; ++run) {
    Rng rng(derive_seed(seed, 0x6f70u, run));
    detail::random_unit(rng, v);

    double rho = 0.0;
    double resid = std::numeric_limits<double>::infinity();
    double stagnant_rho = -1.0;
    int stagnant_for = 0;
    bool converged = false;
    int it = 0;

    for (; it < max_iter; ++it) {
      a.apply(v, w);
      a.apply_transposed(w, u);  // u = A^T A v
      double uv = 0.0;
      for (int i = 0; i < nc; ++i) uv += u[i] * v[i];
      rho = uv;
      if (rho <= 0.0) {
        detail::random_unit(rng, v);  // fell into the kernel
        continue;
      }
      double rn = 0.0;
      for (int i = 0; i < nc; ++i) {
        r[i] = u[i] - rho * v[i];
        rn += r[i] * r[i];
      }
      resid = std::sqrt(rn) / rho;
      const double un = detail::vec_norm(u);
      for (int i = 0; i < nc; ++i) v[i] = u[i] / un;
      if (resid <= tol) {
        converged = true;
        ++it;
        break;
      }
      if (rho <= stagnant_rho * (1.0 + 1e-15)) {
        if (++stagnant_for >= 64) {
          detail::random_unit(rng, v);
          stagnant_for = 0;
          stagnant_rho = -1.0;
        }
      } else {
        stagnant_rho = rho;
        stagnant_for = 0;
      }
    }

    const double sigma = std::sqrt(std::max(rho, 0.0));
    best.iterations += it;
    if (!have_best || sigma > best.value) {
      best.value = sigma;
      best.residual = resid;
      best.converged = converged;
      have_best = true;
    }
  }
  return best;
}

}  // namespace radbound
