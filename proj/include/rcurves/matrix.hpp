// Copyright 2026 the rcurves authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RCURVES_MATRIX_HPP
#define RCURVES_MATRIX_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "rcurves/errors.hpp"
#include "rcurves/field.hpp"

namespace rcurves {

/// Dense matrix over an exact field, row-major. Gaussian elimination with
/// exact pivoting everywhere; no floating point anywhere in the project.
template <class F>
class Matrix {
 public:
  using Elem = typename F::Elem;

  Matrix(const F& field, std::size_t rows, std::size_t cols)
      : K_(field), rows_(rows), cols_(cols), a_(rows * cols, field.zero()) {}

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field.one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const F& field() const { return K_; }

  Elem& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Elem& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  void append_row(const std::vector<Elem>& row) {
    if (row.size() != cols_) throw Error("append_row: wrong width");
    a_.insert(a_.end(), row.begin(), row.end());
    ++rows_;
  }

  std::vector<Elem> apply(const std::vector<Elem>& v) const {
    std::vector<Elem> out(rows_, K_.zero());
    for (std::size_t r = 0; r < rows_; ++r) {
      Elem acc = K_.zero();
      for (std::size_t c = 0; c < cols_; ++c) acc = K_.add(acc, K_.mul(at(r, c), v[c]));
      out[r] = acc;
    }
    return out;
  }

  /// Reduced row echelon form together with the pivot column list.
  std::pair<Matrix, std::vector<std::size_t>> rref() const {
    Matrix m = *this;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t pr = row;
      while (pr < rows_ && K_.is_zero(m.at(pr, col))) ++pr;
      if (pr == rows_) continue;
      if (pr != row)
        for (std::size_t c = 0; c < cols_; ++c) std::swap(m.at(pr, c), m.at(row, c));
      const Elem inv = K_.inv(m.at(row, col));
      for (std::size_t c = col; c < cols_; ++c) m.at(row, c) = K_.mul(inv, m.at(row, c));
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == row || K_.is_zero(m.at(r, col))) continue;
        const Elem f = m.at(r, col);
        for (std::size_t c = col; c < cols_; ++c)
          m.at(r, c) = K_.sub(m.at(r, c), K_.mul(f, m.at(row, c)));
      }
      pivots.push_back(col);
      ++row;
    }
    return {std::move(m), std::move(pivots)};
  }

  std::size_t rank() const { return rref().second.size(); }

  /// Basis of the right kernel; empty exactly when rank == cols.
  std::vector<std::vector<Elem>> kernel_basis() const {
    auto [m, pivots] = rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Elem>> basis;
    for (std::size_t fc = 0; fc < cols_; ++fc) {
      if (is_pivot[fc]) continue;
      std::vector<Elem> v(cols_, K_.zero());
      v[fc] = K_.one();
      for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = K_.neg(m.at(r, fc));
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  F K_;
  std::size_t rows_, cols_;
  std::vector<Elem> a_;
};

/// Exact equality of the row spans of two matrices (used for kernel-space
/// comparison: pass kernels as rows).
template <class F>
bool same_row_space(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() != b.cols()) return false;
  auto ra = a.rref();
  auto rb = b.rref();
  if (ra.second != rb.second) return false;
  const F& K = a.field();
  const std::size_t n = ra.second.size();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!K.eq(ra.first.at(r, c), rb.first.at(r, c))) return false;
  return true;
}

}  // namespace rcurves

#endif  // RCURVES_MATRIX_HPP
