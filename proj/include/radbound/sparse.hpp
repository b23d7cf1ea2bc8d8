#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace radbound {

struct Entry {
  int row = 0;
  int col = 0;
  double weight = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

inline bool entry_pos_less(const Entry& a, const Entry& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

// Coordinate-listed real matrix in canonical form: entries sorted
// row-major, one entry per position, explicit zeros dropped.
class SparsePattern {
 public:
  SparsePattern() = default;

  SparsePattern(int rows, int cols, std::vector<Entry> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ < 0 || cols_ < 0) throw std::invalid_argument("negative shape");
    canonicalize();
  }

  static SparsePattern from_dense(int rows, int cols, std::span<const double> a) {
    if (static_cast<std::size_t>(rows) * cols != a.size())
      throw std::invalid_argument("dense size mismatch");
    std::vector<Entry> es;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (a[static_cast<std::size_t>(i) * cols + j] != 0.0)
          es.push_back({i, j, a[static_cast<std::size_t>(i) * cols + j]});
    return SparsePattern(rows, cols, std::move(es));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }

  double at(int i, int j) const {
    const Entry probe{i, j, 0.0};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), probe, entry_pos_less);
    if (it != entries_.end() && it->row == i && it->col == j) return it->weight;
    return 0.0;
  }

  SparsePattern transposed() const {
    std::vector<Entry> es;
    es.reserve(entries_.size());
    for (const Entry& e : entries_) es.push_back({e.col, e.row, e.weight});
    return SparsePattern(cols_, rows_, std::move(es));
  }

  SparsePattern abs() const {
    std::vector<Entry> es = entries_;
    for (Entry& e : es) e.weight = std::fabs(e.weight);
    return SparsePattern(rows_, cols_, std::move(es));
  }

  SparsePattern scaled(double factor) const {
    std::vector<Entry> es = entries_;
    for (Entry& e : es) e.weight *= factor;
    return SparsePattern(rows_, cols_, std::move(es));
  }

  // 0-1 support indicator
  SparsePattern indicator() const {
    std::vector<Entry> es = entries_;
    for (Entry& e : es) e.weight = 1.0;
    return SparsePattern(rows_, cols_, std::move(es));
  }

  double max_abs() const {
    double m = 0.0;
    for (const Entry& e : entries_) m = std::max(m, std::fabs(e.weight));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (const Entry& e : entries_) s += e.weight * e.weight;
    return std::sqrt(s);
  }

  std::vector<double> row_l2() const {
    std::vector<double> s(rows_, 0.0);
    for (const Entry& e : entries_) s[e.row] += e.weight * e.weight;
    for (double& v : s) v = std::sqrt(v);
    return s;
  }

  std::vector<double> col_l2() const {
    std::vector<double> s(cols_, 0.0);
    for (const Entry& e : entries_) s[e.col] += e.weight * e.weight;
    for (double& v : s) v = std::sqrt(v);
    return s;
  }

  // y = A x
  void apply(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (const Entry& e : entries_) y[e.row] += e.weight * x[e.col];
  }

  // y = A^T x
  void apply_transposed(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (const Entry& e : entries_) y[e.col] += e.weight * x[e.row];
  }

  friend bool operator==(const SparsePattern&, const SparsePattern&) = default;

  // Text form: header "rows cols nnz", then one "i j w" line per entry.
  void write_text(std::ostream& os) const {
    os << rows_ << ' ' << cols_ << ' ' << entries_.size() << '\n';
    os.precision(17);
    for (const Entry& e : entries_) os << e.row << ' ' << e.col << ' ' << e.weight << '\n';
  }

  std::string to_text() const {
    std::ostringstream os;
    write_text(os);
    return os.str();
  }

  static SparsePattern read_text(std::istream& is) {
    int rows = 0, cols = 0;
    long nnz = 0;
    if (!(is >> rows >> cols >> nnz)) throw std::invalid_argument("bad pattern header");
    std::vector<Entry> es;
    es.reserve(static_cast<std::size_t>(nnz));
    for (long k = 0; k < nnz; ++k) {
      Entry e;
      if (!(is >> e.row >> e.col >> e.weight)) throw std::invalid_argument("truncated pattern");
      es.push_back(e);
    }
    return SparsePattern(rows, cols, std::move(es));
  }

  static SparsePattern from_text(const std::string& text) {
    std::istringstream is(text);
    return read_text(is);
  }

 private:
  void canonicalize() {
    for (const Entry& e : entries_)
      if (e.row < 0 || e.row >= rows_ || e.col < 0 || e.col >= cols_)
        throw std::invalid_argument("entry index out of range");
    std::sort(entries_.begin(), entries_.end(), entry_pos_less);
    std::vector<Entry> out;
    out.reserve(entries_.size());
    for (const Entry& e : entries_) {
      if (!out.empty() && out.back().row == e.row && out.back().col == e.col)
        out.back().weight += e.weight;  // coalesce duplicate coordinates
      else
        out.push_back(e);
    }
    std::erase_if(out, [](const Entry& e) { return e.weight == 0.0; });
    entries_ = std::move(out);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Entry> entries_;
};

inline SparsePattern hadamard(const SparsePattern& a, const SparsePattern& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hadamard: shape mismatch");
  std::vector<Entry> es;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (entry_pos_less(*ia, *ib)) {
      ++ia;
    } else if (entry_pos_less(*ib, *ia)) {
      ++ib;
    } else {
      es.push_back({ia->row, ia->col, ia->weight * ib->weight});
      ++ia;
      ++ib;
    }
  }
  return SparsePattern(a.rows(), a.cols(), std::move(es));
}

// true iff scale*a <= b holds at every coordinate
inline bool entrywise_dominates(const SparsePattern& a, const SparsePattern& b,
                                double scale) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("entrywise_dominates: shape mismatch");
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() || ib != b.entries().end()) {
    if (ib == b.entries().end() || (ia != a.entries().end() && entry_pos_less(*ia, *ib))) {
      if (scale * ia->weight > 0.0) return false;
      ++ia;
    } else if (ia == a.entries().end() || entry_pos_less(*ib, *ia)) {
      if (0.0 > ib->weight) return false;
      ++ib;
    } else {
      if (scale * ia->weight > ib->weight) return false;
      ++ia;
      ++ib;
    }
  }
  return true;
}

}  // namespace radbound
