#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fqr/error.hpp"
#include "fqr/field.hpp"

namespace fqr {

/// Dense row-major matrix over an exact field. The field descriptor is part
/// of the value; every binary operation checks that descriptors agree.
template <ExactField F>
class Matrix {
 public:
  using value_type = typename F::value_type;

  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  Matrix(F field, std::size_t rows, std::size_t cols, std::vector<value_type> entries)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::ShapeMismatch, "entry count " + std::to_string(data_.size()) + " for " +
                                                std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  /// Builds from small integer literals, handy for fixtures.
  static Matrix from_ints(const F& field, std::initializer_list<std::initializer_list<long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(field, r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw Error(ErrorCode::ShapeMismatch, "ragged literal");
      std::size_t j = 0;
      for (long v : row) m(i, j++) = field.from_int(v);
      ++i;
    }
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<value_type> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const value_type> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<value_type>& entries() const { return data_; }

  bool is_zero_matrix() const {
    return std::all_of(data_.begin(), data_.end(), [](const value_type& v) { return is_zero(v); });
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (!(a.field_ == b.field_)) throw Error(ErrorCode::FieldMismatch, "comparing matrices over different fields");
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  F field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<value_type> data_;
};

namespace detail {

template <ExactField F>
void require_same_field(const Matrix<F>& a, const Matrix<F>& b) {
  if (!(a.field() == b.field())) throw Error(ErrorCode::FieldMismatch, "matrices over different fields");
}

}  // namespace detail

template <ExactField F>
Matrix<F> operator*(const Matrix<F>& a, const Matrix<F>& b) {
  detail::require_same_field(a, b);
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                              " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix<F> out(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto& aik = a(i, k);
      if (is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

template <ExactField F>
Matrix<F> operator+(const Matrix<F>& a, const Matrix<F>& b) {
  detail::require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::ShapeMismatch, "sum of unequal shapes");
  Matrix<F> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

template <ExactField F>
Matrix<F> transpose(const Matrix<F>& m) {
  Matrix<F> out(m.field(), m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

template <ExactField F>
Matrix<F> select_rows(const Matrix<F>& m, std::span<const std::size_t> rows) {
  Matrix<F> out(m.field(), rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= m.rows()) throw Error(ErrorCode::ShapeMismatch, "row index out of range");
    std::copy(m.row(rows[i]).begin(), m.row(rows[i]).end(), out.row(i).begin());
  }
  return out;
}

/// Stacks b below a; both must have the same column count.
template <ExactField F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
  detail::require_same_field(a, b);
  if (a.cols() != b.cols()) throw Error(ErrorCode::ShapeMismatch, "vstack of unequal widths");
  Matrix<F> out(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
  for (std::size_t i = 0; i < b.rows(); ++i) std::copy(b.row(i).begin(), b.row(i).end(), out.row(a.rows() + i).begin());
  return out;
}

template <ExactField F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
  return transpose(vstack(transpose(a), transpose(b)));
}

template <ExactField F>
struct RrefResult {
  Matrix<F> reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form by plain Gauss-Jordan elimination.
template <ExactField F>
RrefResult<F> rref_rank(Matrix<F> m) {
  using V = typename F::value_type;
  const F& field = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    V inv = field.one() / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      V factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= factor * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), r, std::move(pivots)};
}

template <ExactField F>
std::size_t rank(const Matrix<F>& m) {
  return rref_rank(m).rank;
}

/// Determinant by elimination with a sign/pivot-product ledger.
template <ExactField F>
typename F::value_type determinant(Matrix<F> m) {
  using V = typename F::value_type;
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "determinant of a non-square matrix");
  const F& field = m.field();
  V det = field.one();
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(m(p, c))) ++p;
    if (p == n) return field.zero();
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    V inv = field.one() / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(m(i, c))) continue;
      V factor = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
    }
  }
  return det;
}

/// Determinant of the square submatrix on the given rows (all columns).
template <ExactField F>
typename F::value_type minor_det(const Matrix<F>& m, std::span<const std::size_t> rows) {
  if (rows.size() != m.cols()) {
    throw Error(ErrorCode::SubsetSizeMismatch, std::to_string(rows.size()) + " rows for " +
                                                   std::to_string(m.cols()) + " columns");
  }
  return determinant(select_rows(m, rows));
}

template <ExactField F>
Matrix<F> invert(const Matrix<F>& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  auto r = rref_rank(hstack(m, Matrix<F>::identity(m.field(), n)));
  if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1)) {
    throw Error(ErrorCode::Singular, "matrix of size " + std::to_string(n) + " is singular");
  }
  Matrix<F> out(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = r.reduced(i, n + j);
  return out;
}

/// Basis of the right null space, returned as the columns of a cols x k matrix.
template <ExactField F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
  auto r = rref_rank(m);
  const F& field = m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : r.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix<F> basis(field, m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    basis(free_cols[k], k) = field.one();
    for (std::size_t i = 0; i < r.rank; ++i) basis(r.pivots[i], k) = -r.reduced(i, free_cols[k]);
  }
  return basis;
}

/// Rows spanning the annihilator of the column space of `columns` (left null space).
template <ExactField F>
Matrix<F> annihilator_rows(const Matrix<F>& columns) {
  return transpose(kernel_basis(transpose(columns)));
}

/// Independent rows spanning the row space, in reduced echelon form.
template <ExactField F>
Matrix<F> row_space_basis(const Matrix<F>& m) {
  auto r = rref_rank(m);
  std::vector<std::size_t> keep(r.rank);
  for (std::size_t i = 0; i < r.rank; ++i) keep[i] = i;
  return select_rows(r.reduced, keep);
}

}  // namespace fqr
