#pragma once
// Ext^i_{kC}(k, N) for a cyclic p-group C = <g> from the periodic resolution
//   ... -> kC --(sum g^j)--> kC --(g-1)--> kC -> k.
// Hom_kC(kC, N) is N itself and the coboundaries act by the ring elements.

#include "oracle/elim.hpp"

namespace oracle {

inline std::size_t cyclic_ext(int i, const Mat& gn, std::size_t order, std::int64_t p) {
  std::size_t n = gn.size();
  Mat minus = sub(gn, eye(n), p);
  Mat norm = zeros(n, n);
  Mat pw = eye(n);
  for (std::size_t j = 0; j < order; ++j) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) norm[r][c] = (norm[r][c] + pw[r][c]) % p;
    pw = mul(pw, gn, p);
  }
  // delta_i : C^i -> C^{i+1} is the element attached to d_{i+1}
  auto delta = [&](int k) -> const Mat& { return (k % 2 == 0) ? minus : norm; };
  std::size_t ker = n - rank(delta(i), p);
  std::size_t im = i == 0 ? 0 : rank(delta(i - 1), p);
  return ker - im;
}

/// The regular representation generator of C_m.
inline Mat cyclic_regular(std::size_t m) {
  Mat g = zeros(m, m);
  for (std::size_t j = 0; j < m; ++j) g[(j + 1) % m][j] = 1;
  return g;
}

}  // namespace oracle
