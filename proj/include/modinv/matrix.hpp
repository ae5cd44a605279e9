#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modinv/field.hpp"

namespace modinv {

using Vec = std::vector<Scalar>;

/// Dense row-major matrix over F_p.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Scalar p);
  /// Entries are taken mod p; negative inputs are allowed.
  static Matrix from_rows(const std::vector<std::vector<long long>>& rows, Scalar p);
  static Matrix identity(std::size_t n, Scalar p);
  static Matrix zero(std::size_t rows, std::size_t cols, Scalar p) { return Matrix(rows, cols, p); }
  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<Vec>& cols, std::size_t rows, Scalar p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar p() const { return field_.p(); }
  const PrimeField& field() const { return field_; }

  Scalar operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const Scalar> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Scalar> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  Vec column(std::size_t j) const;
  const std::vector<Scalar>& data() const { return data_; }

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(Scalar s) const;
  Vec apply(std::span<const Scalar> v) const;

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  Matrix select_columns(const std::vector<std::size_t>& idx) const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && p() == o.p() && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  PrimeField field_;
  std::vector<Scalar> data_;
};

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

/// Unique reduced row-echelon form; the pivot in each column is the first
/// nonzero entry at or below the current row.
RrefResult rref(const Matrix& a);
std::size_t rank(const Matrix& a);
/// Basis of ker(a) as column vectors, one per free column, in column order.
std::vector<Vec> nullspace(const Matrix& a);
/// One solution of a*x = b, or nullopt when the system is inconsistent.
std::optional<Vec> solve(const Matrix& a, std::span<const Scalar> b);
/// Solves a*X = b column by column; nullopt if any column is inconsistent.
std::optional<Matrix> solve_matrix(const Matrix& a, const Matrix& b);
std::optional<Matrix> inverse(const Matrix& a);
Scalar determinant(const Matrix& a);

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix kronecker(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix power(const Matrix& a, std::uint64_t e);

/// Basis (as matrix columns) of the column space, chosen among the input columns.
Matrix column_space(const Matrix& a);
/// Columns of a basis of span(a) ∩ span(b); both inputs given by spanning columns.
Matrix intersect_spaces(const Matrix& a, const Matrix& b);
/// True when every column of b lies in the column span of a.
bool span_contains(const Matrix& a, const Matrix& b);

/// Precomputed coordinate map for a fixed subspace basis: given the basis as
/// independent columns, maps any vector in its span to its coordinates.
class CoordinateMap {
 public:
  CoordinateMap() = default;
  explicit CoordinateMap(const Matrix& basis);
  std::size_t dim() const { return pivot_rows_.size(); }
  /// Coordinates of v, assuming v lies in the span (not checked).
  Vec coordinates(std::span<const Scalar> v) const;
  /// Coordinates with membership check; nullopt when v is outside the span.
  std::optional<Vec> try_coordinates(std::span<const Scalar> v) const;
  const std::vector<std::size_t>& pivot_rows() const { return pivot_rows_; }
  const Matrix& pivot_inverse() const { return inv_; }

 private:
  Matrix basis_;
  std::vector<std::size_t> pivot_rows_;
  Matrix inv_;
};

}  // namespace modinv
