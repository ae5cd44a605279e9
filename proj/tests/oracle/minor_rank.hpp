#pragma once
// Rank by exhaustive minor expansion. Shares nothing with the engine.

#include <cstdint>
#include <vector>

namespace oracle {

using IntMat = std::vector<std::vector<std::int64_t>>;

inline std::int64_t mod(std::int64_t a, std::int64_t p) { return ((a % p) + p) % p; }

inline std::int64_t laplace_det(const IntMat& a, std::int64_t p) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return mod(a[0][0], p);
  std::int64_t acc = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (mod(a[0][c], p) == 0) continue;
    IntMat sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::int64_t> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      sub.push_back(row);
    }
    std::int64_t term = mod(a[0][c], p) * laplace_det(sub, p) % p;
    acc = mod(c % 2 ? acc - term : acc + term, p);
  }
  return acc;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline std::size_t minor_rank(const IntMat& a, std::int64_t p) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t best = 0;
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(rows, k, 0, cur, rs);
    subsets(cols, k, 0, cur, cs);
    bool found = false;
    for (const auto& r : rs) {
      for (const auto& c : cs) {
        IntMat m(k, std::vector<std::int64_t>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m[i][j] = a[r[i]][c[j]];
        if (laplace_det(m, p) != 0) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) break;
    best = k;
  }
  return best;
}

}  // namespace oracle
