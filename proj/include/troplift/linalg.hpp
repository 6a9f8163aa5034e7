#pragma once

#include <cstddef>
#include <vector>

#include "troplift/rational.hpp"

namespace troplift {

using Vector = std::vector<Rational>;

/// Dense exact matrix, row major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  Vector row(std::size_t i) const;
  std::vector<Vector> row_vectors() const;
  Matrix transpose() const;

  /// Reduced row echelon form in place; returns pivot columns. Zero rows are dropped.
  std::vector<std::size_t> rref();

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

std::size_t rank(Matrix m);
/// Basis of {x : M x = 0}, one vector per free column.
std::vector<Vector> kernel(Matrix m);
/// Row-reduced basis of the span of the given vectors.
std::vector<Vector> span_basis(const std::vector<Vector>& vectors, std::size_t dim);

}  // namespace troplift
