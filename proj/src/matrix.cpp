#include "modinv/matrix.hpp"

#include <sstream>
#include <utility>

namespace modinv {

namespace {

void require_same_modulus(const Matrix& a, const Matrix& b) {
  if (a.p() != b.p())
    throw Error(ErrorCode::ModulusMismatch,
                "moduli " + std::to_string(a.p()) + " and " + std::to_string(b.p()));
}

// In-place Gauss-Jordan elimination. Returns pivot columns.
std::vector<std::size_t> eliminate(std::vector<Scalar>& d, std::size_t rows, std::size_t cols,
                                   const PrimeField& f, std::size_t col_limit) {
  const std::uint64_t p = f.p();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < col_limit && r < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (d[i * cols + c] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == rows) continue;
    if (sel != r) {
      for (std::size_t j = c; j < cols; ++j) std::swap(d[sel * cols + j], d[r * cols + j]);
    }
    Scalar* pr = d.data() + r * cols;
    Scalar iv = f.inv(pr[c]);
    if (iv != 1)
      for (std::size_t j = c; j < cols; ++j) pr[j] = f.mul(pr[j], iv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      Scalar* qi = d.data() + i * cols;
      Scalar factor = qi[c];
      if (factor == 0) continue;
      std::uint64_t nf = p - factor;
      for (std::size_t j = c; j < cols; ++j) {
        if (pr[j] != 0) qi[j] = static_cast<Scalar>((qi[j] + nf * pr[j]) % p);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, Scalar p)
    : rows_(rows), cols_(cols), field_(p), data_(rows * cols, 0) {}

Matrix Matrix::from_rows(const std::vector<std::vector<long long>>& rows, Scalar p) {
  std::size_t nc = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), nc, p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nc) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = m.field_.reduce(rows[i][j]);
  }
  return m;
}

Matrix Matrix::identity(std::size_t n, Scalar p) {
  Matrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1 % p;
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, std::size_t rows, Scalar p) {
  Matrix m(rows, cols.size(), p);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error(ErrorCode::DimensionMismatch, "column length");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vec Matrix::column(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

bool Matrix::is_zero() const {
  for (Scalar x : data_)
    if (x) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, p());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  require_same_modulus(*this, o);
  if (cols_ != o.rows_)
    throw Error(ErrorCode::DimensionMismatch, "product of " + std::to_string(rows_) + "x" +
                                                  std::to_string(cols_) + " and " +
                                                  std::to_string(o.rows_) + "x" +
                                                  std::to_string(o.cols_));
  Matrix r(rows_, o.cols_, p());
  const std::uint64_t pp = p();
  // Accumulate in 64 bits and reduce only when the sum could overflow.
  const std::uint64_t sq = (pp - 1) * (pp - 1);
  const std::uint64_t budget = sq == 0 ? ~0ull : (~0ull - pp) / sq;
  std::vector<std::uint64_t> acc(o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    std::uint64_t used = 0;
    for (std::size_t k = 0; k < cols_; ++k) {
      std::uint64_t a = (*this)(i, k);
      if (a == 0) continue;
      const Scalar* orow = o.data_.data() + k * o.cols_;
      for (std::size_t j = 0; j < o.cols_; ++j) acc[j] += a * orow[j];
      if (++used >= budget) {
        for (auto& x : acc) x %= pp;
        used = 1;
      }
    }
    for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) = static_cast<Scalar>(acc[j] % pp);
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  require_same_modulus(*this, o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "sum");
  Matrix r(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_.add(data_[i], o.data_[i]);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_same_modulus(*this, o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "difference");
  Matrix r(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_.sub(data_[i], o.data_[i]);
  return r;
}

Matrix Matrix::scaled(Scalar s) const {
  Matrix r(*this);
  s %= p();
  for (auto& x : r.data_) x = field_.mul(x, s);
  return r;
}

Vec Matrix::apply(std::span<const Scalar> v) const {
  if (v.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  Vec out(rows_);
  const std::uint64_t pp = p();
  const std::uint64_t sq = (pp - 1) * (pp - 1);
  const std::uint64_t budget = sq == 0 ? ~0ull : (~0ull - pp) / sq;
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0, used = 0;
    const Scalar* r = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) {
      acc += static_cast<std::uint64_t>(r[j]) * v[j];
      if (++used >= budget) {
        acc %= pp;
        used = 1;
      }
    }
    out[i] = static_cast<Scalar>(acc % pp);
  }
  return out;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorCode::DimensionMismatch, "block");
  Matrix b(nr, nc, p());
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  require_same_modulus(*this, b);
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
    throw Error(ErrorCode::DimensionMismatch, "set_block");
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
  Matrix m(rows_, idx.size(), p());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
  return m;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix m(idx.size(), cols_, p());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
  return m;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

RrefResult rref(const Matrix& a) {
  RrefResult out{a, {}};
  auto data = a.data();
  out.pivots = eliminate(data, a.rows(), a.cols(), a.field(), a.cols());
  Matrix r(a.rows(), a.cols(), a.p());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = data[i * a.cols() + j];
  out.reduced = std::move(r);
  return out;
}

std::size_t rank(const Matrix& a) {
  // Eliminate on the shorter side.
  if (a.rows() > a.cols()) return rank(a.transpose());
  auto data = a.data();
  return eliminate(data, a.rows(), a.cols(), a.field(), a.cols()).size();
}

std::vector<Vec> nullspace(const Matrix& a) {
  RrefResult r = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  const PrimeField& f = a.field();
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(a.cols(), 0);
    v[free] = 1;
    for (std::size_t k = 0; k < r.pivots.size(); ++k) v[r.pivots[k]] = f.neg(r.reduced(k, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(const Matrix& a, std::span<const Scalar> b) {
  if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "solve right-hand side");
  const std::size_t cols = a.cols() + 1;
  std::vector<Scalar> d(a.rows() * cols);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) d[i * cols + j] = a(i, j);
    d[i * cols + a.cols()] = b[i] % a.p();
  }
  auto piv = eliminate(d, a.rows(), cols, a.field(), a.cols());
  for (std::size_t i = piv.size(); i < a.rows(); ++i)
    if (d[i * cols + a.cols()] != 0) return std::nullopt;
  Vec x(a.cols(), 0);
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = d[k * cols + a.cols()];
  return x;
}

std::optional<Matrix> solve_matrix(const Matrix& a, const Matrix& b) {
  require_same_modulus(a, b);
  if (b.rows() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "solve_matrix");
  const std::size_t cols = a.cols() + b.cols();
  std::vector<Scalar> d(a.rows() * cols);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) d[i * cols + j] = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) d[i * cols + a.cols() + j] = b(i, j);
  }
  auto piv = eliminate(d, a.rows(), cols, a.field(), a.cols());
  for (std::size_t i = piv.size(); i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (d[i * cols + a.cols() + j] != 0) return std::nullopt;
  Matrix x(a.cols(), b.cols(), a.p());
  for (std::size_t k = 0; k < piv.size(); ++k)
    for (std::size_t j = 0; j < b.cols(); ++j) x(piv[k], j) = d[k * cols + a.cols() + j];
  return x;
}

std::optional<Matrix> inverse(const Matrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  auto x = solve_matrix(a, Matrix::identity(a.rows(), a.p()));
  if (!x || rank(a) != a.rows()) return std::nullopt;
  return x;
}

Scalar determinant(const Matrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::DimensionMismatch, "determinant");
  const PrimeField& f = a.field();
  std::size_t n = a.rows();
  auto d = a.data();
  Scalar det = 1 % a.p();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = n;
    for (std::size_t i = c; i < n; ++i)
      if (d[i * n + c]) {
        sel = i;
        break;
      }
    if (sel == n) return 0;
    if (sel != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(d[sel * n + j], d[c * n + j]);
      det = f.neg(det);
    }
    det = f.mul(det, d[c * n + c]);
    Scalar iv = f.inv(d[c * n + c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      Scalar fac = f.mul(d[i * n + c], iv);
      if (!fac) continue;
      for (std::size_t j = c; j < n; ++j) d[i * n + j] = f.sub(d[i * n + j], f.mul(fac, d[c * n + j]));
    }
  }
  return det;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  require_same_modulus(a, b);
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "hstack");
  Matrix m(a.rows(), a.cols() + b.cols(), a.p());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  require_same_modulus(a, b);
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "vstack");
  Matrix m(a.rows() + b.rows(), a.cols(), a.p());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  require_same_modulus(a, b);
  const PrimeField& f = a.field();
  Matrix m(a.rows() * b.rows(), a.cols() * b.cols(), a.p());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Scalar s = a(i, j);
      if (!s) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          m(i * b.rows() + k, j * b.cols() + l) = f.mul(s, b(k, l));
    }
  return m;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  require_same_modulus(a, b);
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols(), a.p());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

Matrix power(const Matrix& a, std::uint64_t e) {
  Matrix result = Matrix::identity(a.rows(), a.p());
  Matrix base = a;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Matrix column_space(const Matrix& a) {
  // Pivot columns of rref(a) index independent columns of a itself.
  auto r = rref(a);
  return a.select_columns(r.pivots);
}

Matrix intersect_spaces(const Matrix& a, const Matrix& b) {
  require_same_modulus(a, b);
  Matrix ab = column_space(a);
  Matrix bb = column_space(b);
  // Solve ab*x = bb*y: kernel of [ab | -bb].
  Matrix sys = hstack(ab, bb.scaled(a.p() - 1));
  auto ker = nullspace(sys);
  std::vector<Vec> cols;
  for (auto& v : ker) {
    Vec x(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(ab.cols()));
    cols.push_back(ab.apply(x));
  }
  return column_space(Matrix::from_columns(cols, a.rows(), a.p()));
}

bool span_contains(const Matrix& a, const Matrix& b) {
  if (b.cols() == 0) return true;
  return rank(hstack(a, b)) == rank(a);
}

CoordinateMap::CoordinateMap(const Matrix& basis) : basis_(basis) {
  auto r = rref(basis.transpose());
  if (r.rank() != basis.cols())
    throw Error(ErrorCode::InvalidInput, "coordinate basis has dependent columns");
  pivot_rows_ = r.pivots;
  auto inv = inverse(basis.select_rows(pivot_rows_));
  if (!inv) throw Error(ErrorCode::InternalError, "pivot block not invertible");
  inv_ = *inv;
}

Vec CoordinateMap::coordinates(std::span<const Scalar> v) const {
  Vec sub(pivot_rows_.size());
  for (std::size_t i = 0; i < pivot_rows_.size(); ++i) sub[i] = v[pivot_rows_[i]];
  return inv_.apply(sub);
}

std::optional<Vec> CoordinateMap::try_coordinates(std::span<const Scalar> v) const {
  Vec c = coordinates(v);
  if (basis_.apply(c) != Vec(v.begin(), v.end())) return std::nullopt;
  return c;
}

}  // namespace modinv
