#pragma once
// Shared fixtures: example groups and conversion to the oracle's plain matrices.

#include "modinv/module.hpp"
#include "oracle/elim.hpp"

namespace fixtures {

using namespace modinv;

inline GroupPtr c2_swap() { return GroupTable::enumerate({Matrix::from_rows({{0, 1}, {1, 0}}, 2)}); }
inline GroupPtr c3_j2() { return GroupTable::enumerate({Matrix::from_rows({{1, 1}, {0, 1}}, 3)}); }
inline GroupPtr s3_f3() {
  return GroupTable::enumerate({Matrix::from_rows({{1, 1}, {0, 1}}, 3), Matrix::from_rows({{2, 0}, {0, 1}}, 3)});
}
inline GroupPtr klein() {
  return GroupTable::enumerate({Matrix::from_rows({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 2),
                                Matrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}, 2)});
}
/// One generator acting diagonally on `copies` copies of a 2 x 2 block.
inline GroupPtr copies_of(const std::vector<std::vector<long long>>& block, Scalar p, std::size_t copies) {
  const std::size_t b = block.size();
  std::vector<std::vector<long long>> rows(b * copies, std::vector<long long>(b * copies, 0));
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) rows[c * b + i][c * b + j] = block[i][j];
  return GroupTable::enumerate({Matrix::from_rows(rows, p)});
}

inline GModule jordan(const GroupPtr& g, std::size_t n) {
  Matrix j = Matrix::identity(n, g->p());
  for (std::size_t i = 0; i + 1 < n; ++i) j(i, i + 1) = 1;
  return GModule(g, std::vector<Matrix>(g->num_generators(), j));
}

inline oracle::Mat to_oracle(const Matrix& m) {
  oracle::Mat out(m.rows(), oracle::Row(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline std::vector<oracle::Mat> to_oracle(const std::vector<Matrix>& ms) {
  std::vector<oracle::Mat> out;
  for (const auto& m : ms) out.push_back(to_oracle(m));
  return out;
}

}  // namespace fixtures
