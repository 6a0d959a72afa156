#include "dcoh/linalg.hpp"

#include <utility>

namespace dcoh {

Matrix::Matrix(std::size_t rows, std::size_t cols, const Elem& zero)
    : rows_(rows), cols_(cols), zero_(zero), a_(rows * cols, zero) {}

Matrix Matrix::identity(std::size_t n, const Elem& one) {
  Matrix m(n, n, one.zero_like());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, const Elem& zero) {
  std::size_t r = cols.empty() ? 0 : cols[0].size();
  Matrix m(r, cols.size(), zero);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != r) throw InvalidInput("ragged column list");
    for (std::size_t i = 0; i < r; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vec Matrix::row(std::size_t i) const { return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }

Vec Matrix::col(std::size_t j) const {
  Vec v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw MismatchError("matrix shapes do not match");
  Matrix r(rows_, o.cols_, zero_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Elem& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (!o(k, j).is_zero()) r(i, j) += x * o(k, j);
    }
  return r;
}

Vec Matrix::operator*(const Vec& v) const {
  if (cols_ != v.size()) throw MismatchError("matrix and vector sizes do not match");
  Vec r(rows_, zero_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if (!v[k].is_zero() && !(*this)(i, k).is_zero()) r[i] += (*this)(i, k) * v[k];
  return r;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, zero_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

namespace {

// Fraction-free forward elimination over Q[t]. Returns the echelon rows as
// rational functions together with pivot columns.
RowReduced bareiss_echelon(const Matrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<QPoly>> a(R, std::vector<QPoly>(C));
  for (std::size_t i = 0; i < R; ++i) {
    QPoly den(1);
    for (std::size_t j = 0; j < C; ++j) den = lcm(den, m(i, j).ratfunc().den());
    for (std::size_t j = 0; j < C; ++j) {
      const RatFunc& f = m(i, j).ratfunc();
      if (f.is_zero()) continue;
      a[i][j] = f.num() * den.exact_div(f.den());
    }
  }
  QPoly prev(1);
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    // prefer the lowest degree pivot
    for (std::size_t i = r; i < R; ++i)
      if (!a[i][c].is_zero() && (a[p][c].is_zero() || a[i][c].degree() < a[p][c].degree())) p = i;
    if (a[p][c].is_zero()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < R; ++i) {
      const bool lead_zero = a[i][c].is_zero();
      for (std::size_t j = c + 1; j < C; ++j) {
        QPoly v = a[r][c] * a[i][j];
        if (!lead_zero && !a[r][j].is_zero()) v -= a[i][c] * a[r][j];
        a[i][j] = prev.degree() == 0 && prev.lc() == 1 ? v : v.exact_div(prev);
      }
      a[i][c] = QPoly();
    }
    prev = a[r][c];
    pivots.push_back(c);
    ++r;
  }
  Matrix e(r, C, m.zero());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < C; ++j)
      if (!a[i][j].is_zero()) e(i, j) = Elem(RatFunc(a[i][j]));
  return {std::move(e), std::move(pivots)};
}

}  // namespace

RowReduced rref(const Matrix& m) {
  const std::size_t C = m.cols();
  if (m.rows() > 0 && m.zero().is_ratfunc()) {
    RowReduced e = bareiss_echelon(m);
    Matrix& a = e.r;
    for (std::size_t k = e.pivots.size(); k-- > 0;) {
      const std::size_t c = e.pivots[k];
      Elem inv = a(k, c).inverse();
      for (std::size_t j = c; j < C; ++j)
        if (!a(k, j).is_zero()) a(k, j) = a(k, j) * inv;
      for (std::size_t i = 0; i < k; ++i) {
        if (a(i, c).is_zero()) continue;
        Elem f = a(i, c);
        for (std::size_t j = c; j < C; ++j)
          if (!a(k, j).is_zero()) a(i, j) -= f * a(k, j);
      }
    }
    return e;
  }
  Matrix a = m;
  const std::size_t R = m.rows();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    while (p < R && a(p, c).is_zero()) ++p;
    if (p == R) continue;
    if (p != r)
      for (std::size_t j = 0; j < C; ++j) std::swap(a(p, j), a(r, j));
    Elem inv = a(r, c).inverse();
    for (std::size_t j = c; j < C; ++j)
      if (!a(r, j).is_zero()) a(r, j) = a(r, j) * inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      Elem f = a(i, c);
      for (std::size_t j = c; j < C; ++j)
        if (!a(r, j).is_zero()) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix out(r, C, m.zero());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < C; ++j) out(i, j) = a(i, j);
  return {std::move(out), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::vector<Vec> kernel(const Matrix& m) {
  RowReduced rr = rref(m);
  const std::size_t C = m.cols();
  std::vector<bool> is_pivot(C, false);
  for (auto c : rr.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    Vec v(C, m.zero());
    v[f] = m.zero().one_like();
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.r(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  if (b.size() != m.rows()) throw MismatchError("right-hand side has the wrong length");
  Matrix aug(m.rows(), m.cols() + 1, m.zero());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  RowReduced rr = rref(aug);
  if (!rr.pivots.empty() && rr.pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols(), m.zero());
  for (std::size_t i = 0; i < rr.pivots.size(); ++i) x[rr.pivots[i]] = rr.r(i, m.cols());
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n, m.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = m.zero().one_like();
  }
  RowReduced rr = rref(aug);
  if (rr.pivots.size() < n || rr.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n, m.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = rr.r(i, n + j);
  return inv;
}

}  // namespace dcoh
