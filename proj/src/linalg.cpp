#include "troplift/linalg.hpp"

namespace troplift {

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error("row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_));
}

std::vector<Vector> Matrix::row_vectors() const {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<std::size_t> Matrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t p = r;
    while (p < rows_ && (*this)(p, c) == 0) ++p;
    if (p == rows_) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
    Rational inv = 1 / (*this)(r, c);
    for (std::size_t j = c; j < cols_; ++j) (*this)(r, j) *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || (*this)(i, c) == 0) continue;
      Rational f = (*this)(i, c);
      for (std::size_t j = c; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  a_.resize(r * cols_);
  rows_ = r;
  return pivots;
}

std::size_t rank(Matrix m) { return m.rref().size(); }

std::vector<Vector> kernel(Matrix m) {
  const std::size_t n = m.cols();
  auto pivots = m.rref();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vector x(n, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -m(i, f);
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Vector> span_basis(const std::vector<Vector>& vectors, std::size_t dim) {
  auto m = Matrix::from_rows(vectors, dim);
  m.rref();
  return m.row_vectors();
}

}  // namespace troplift
