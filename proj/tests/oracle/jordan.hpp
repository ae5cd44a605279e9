#pragma once
// Jordan type of a unipotent matrix: block sizes of (g - 1).

#include <map>

#include "oracle/elim.hpp"

namespace oracle {

/// Block size -> number of blocks.
inline std::map<std::size_t, std::size_t> jordan_type(const Mat& g, std::int64_t p) {
  std::size_t n = g.size();
  Mat nil = sub(g, eye(n), p);
  std::vector<std::size_t> rk{n};
  Mat cur = eye(n);
  for (std::size_t j = 1; j <= n + 1; ++j) {
    cur = mul(cur, nil, p);
    rk.push_back(rank(cur, p));
    if (rk.back() == 0) break;
  }
  while (rk.size() < n + 3) rk.push_back(0);
  // #blocks of size >= j is rk[j-1] - rk[j]
  std::map<std::size_t, std::size_t> out;
  for (std::size_t j = 1; j <= n; ++j) {
    std::size_t ge_j = rk[j - 1] - rk[j];
    std::size_t ge_j1 = rk[j] - rk[j + 1];
    if (ge_j > ge_j1) out[j] = ge_j - ge_j1;
  }
  return out;
}

}  // namespace oracle
