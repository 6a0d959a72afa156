#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcoh/fields.hpp"

namespace dcoh {

using Vec = std::vector<Elem>;

/// Dense matrix over one of the field carriers.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const Elem& zero);
  static Matrix identity(std::size_t n, const Elem& one);
  /// Matrix with the given columns.
  static Matrix from_columns(const std::vector<Vec>& cols, const Elem& zero);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Elem& zero() const { return zero_; }
  Elem& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Elem& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  Vec row(std::size_t i) const;
  Vec col(std::size_t j) const;

  Matrix operator*(const Matrix& o) const;
  Vec operator*(const Vec& v) const;
  friend bool operator==(const Matrix& a, const Matrix& b) { return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_; }
  Matrix transpose() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  Elem zero_;
  std::vector<Elem> a_;
};

struct RowReduced {
  Matrix r;                         // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form. Rational function matrices are first brought to
/// echelon form fraction-free on cleared polynomial rows.
RowReduced rref(const Matrix& m);
std::size_t rank(const Matrix& m);
/// Basis of {x : m x = 0}.
std::vector<Vec> kernel(const Matrix& m);
/// Some x with m x = b, or nothing.
std::optional<Vec> solve(const Matrix& m, const Vec& b);
std::optional<Matrix> inverse(const Matrix& m);

}  // namespace dcoh
