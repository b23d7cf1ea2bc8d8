#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "radbound/sparse.hpp"

namespace radbound {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static DenseMatrix from_pattern(const SparsePattern& p) {
    DenseMatrix m(p.rows(), p.cols());
    for (const Entry& e : p.entries()) m.at(e.row, e.col) = e.weight;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  DenseMatrix gram() const {  // A^T A
    DenseMatrix g(cols_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        const double aij = at(i, j);
        if (aij == 0.0) continue;
        for (int k = 0; k < cols_; ++k) g.at(j, k) += aij * at(i, k);
      }
    return g;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

struct SymmetricEigen {
  std::vector<double> values;           // unordered
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]
};

// Cyclic Jacobi rotations on a symmetric matrix. Small n only; sweeps
// until the off-diagonal mass is at rounding level.
inline SymmetricEigen jacobi_symmetric_eigen(DenseMatrix s, int max_sweeps = 64) {
  const int n = s.rows();
  if (n != s.cols()) throw std::invalid_argument("jacobi: matrix not square");
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) v[i][i] = 1.0;

  double diag_scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) diag_scale = std::max(diag_scale, std::fabs(s.at(i, j)));
  const double stop = diag_scale * 1e-15 * n;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::fabs(s.at(p, q));
    if (off <= stop || off == 0.0) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = s.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (s.at(q, q) - s.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < n; ++k) {
          const double skp = s.at(k, p), skq = s.at(k, q);
          s.at(k, p) = c * skp - sn * skq;
          s.at(k, q) = sn * skp + c * skq;
        }
        for (int k = 0; k < n; ++k) {
          const double spk = s.at(p, k), sqk = s.at(q, k);
          s.at(p, k) = c * spk - sn * sqk;
          s.at(q, k) = sn * spk + c * sqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - sn * vkq;
          v[k][q] = sn * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n, 0.0));
  for (int k = 0; k < n; ++k) {
    out.values[k] = s.at(k, k);
    for (int i = 0; i < n; ++i) out.vectors[k][i] = v[i][k];
  }
  return out;
}

inline constexpr int kOracleDimCap = 32;

// Exact largest singular value via full eigen-decomposition of the Gram
// matrix of the smaller side. Deliberately capped at desk scale.
inline double operator_norm_oracle(const DenseMatrix& a) {
  if (a.rows() > kOracleDimCap || a.cols() > kOracleDimCap)
    throw std::invalid_argument("operator_norm_oracle: dimension exceeds 32");
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const DenseMatrix g = a.rows() < a.cols() ? a.transposed().gram() : a.gram();
  const SymmetricEigen eig = jacobi_symmetric_eigen(g);
  double lmax = 0.0;
  for (double lam : eig.values) lmax = std::max(lmax, lam);
  return std::sqrt(std::max(lmax, 0.0));
}

inline double operator_norm_oracle(const SparsePattern& a) {
  return operator_norm_oracle(DenseMatrix::from_pattern(a));
}

struct SingularTriple {
  double sigma = 0.0;
  std::vector<double> left;   // length rows
  std::vector<double> right;  // length cols
};

// Top singular triple of a small dense matrix (Gram + Jacobi). For
// entrywise-nonnegative input the returned vectors are nonnegative.
inline SingularTriple top_singular_triple(const DenseMatrix& a) {
  if (a.rows() > 64 || a.cols() > 64)
    throw std::invalid_argument("top_singular_triple: matrix too large");
  SingularTriple out;
  out.left.assign(a.rows(), 0.0);
  out.right.assign(a.cols(), 0.0);
  if (a.rows() == 0 || a.cols() == 0) return out;

  const bool use_cols = a.cols() <= a.rows();
  const DenseMatrix g = use_cols ? a.gram() : a.transposed().gram();
  const SymmetricEigen eig = jacobi_symmetric_eigen(g);
  int best = 0;
  for (int k = 1; k < static_cast<int>(eig.values.size()); ++k)
    if (eig.values[k] > eig.values[best]) best = k;
  out.sigma = std::sqrt(std::max(eig.values[best], 0.0));

  std::vector<double>& small_side = use_cols ? out.right : out.left;
  small_side = eig.vectors[best];
  double sum = 0.0;
  for (double x : small_side) sum += x;
  if (sum < 0.0)
    for (double& x : small_side) x = -x;

  std::vector<double>& other = use_cols ? out.left : out.right;
  const int odim = static_cast<int>(other.size());
  double nrm = 0.0;
  for (int i = 0; i < odim; ++i) {
    double acc = 0.0;
    for (int j = 0; j < static_cast<int>(small_side.size()); ++j)
      acc += (use_cols ? a.at(i, j) : a.at(j, i)) * small_side[j];
    other[i] = acc;
    nrm += acc * acc;
  }
  nrm = std::sqrt(nrm);
  if (nrm > 0.0)
    for (double& x : other) x /= nrm;
  return out;
}

}  // namespace radbound
