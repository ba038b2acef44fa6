#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mfsing/coefficient.hpp"

namespace mfsing {

/// Dense row-major matrix over Q(i).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Coefficient& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Coefficient& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Coefficient> data_;
};

struct Echelon {
  DenseMatrix reduced;               // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

/// Gauss-Jordan elimination with exact arithmetic.
inline Echelon rref(DenseMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
    Coefficient inv = m(row, col).inverse();
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      Coefficient factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (!m(row, c).is_zero()) m(r, c) -= factor * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const DenseMatrix& m) { return rref(m).pivots.size(); }

/// Basis of {x : m x = 0}.
inline std::vector<std::vector<Coefficient>> nullspace(const DenseMatrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<Coefficient>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Coefficient> v(m.cols());
    v[free] = Coefficient(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// One solution of m x = rhs, or nullopt if the system is inconsistent.
inline std::optional<std::vector<Coefficient>> solve(const DenseMatrix& m,
                                                     const std::vector<Coefficient>& rhs) {
  DenseMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = rhs[r];
  }
  Echelon e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  std::vector<Coefficient> x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
  return x;
}

using SparseVector = std::map<std::size_t, Coefficient>;

/// Incrementally maintained row-echelon basis of a subspace, for rank and
/// membership queries over many sparse vectors.
class EchelonSpace {
 public:
  /// Reduces v against the stored rows; returns the residue (empty iff v is in the span).
  SparseVector reduce(SparseVector v) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto row = rows_.find(it->first);
      if (row == rows_.end()) {
        ++it;
        continue;
      }
      Coefficient factor = it->second;
      std::size_t key = it->first;
      for (const auto& [c, val] : row->second) {
        auto& slot = v[c];
        slot -= factor * val;
      }
      // drop zeros created at or after the pivot
      for (auto jt = v.lower_bound(key); jt != v.end();) {
        if (jt->second.is_zero())
          jt = v.erase(jt);
        else
          ++jt;
      }
      it = v.lower_bound(key);
    }
    return v;
  }

  /// Adds v to the space; returns true if the dimension grew.
  bool insert(SparseVector v) {
    SparseVector r = reduce(std::move(v));
    if (r.empty()) return false;
    Coefficient inv = r.begin()->second.inverse();
    for (auto& [c, val] : r) val *= inv;
    rows_.emplace(r.begin()->first, std::move(r));
    return true;
  }

  bool contains(const SparseVector& v) const { return reduce(v).empty(); }
  std::size_t dimension() const { return rows_.size(); }

 private:
  std::map<std::size_t, SparseVector> rows_;  // keyed by pivot index
};

}  // namespace mfsing
