#pragma once
// Dickson coefficients by multiplying out X + v over every linear form v.

#include <map>

#include "oracle/elim.hpp"

namespace oracle {

/// Exponent vector over (x_0..x_{n-1}, X) -> coefficient mod p.
using SparsePoly = std::map<std::vector<int>, std::int64_t>;

inline SparsePoly sparse_mul(const SparsePoly& a, const SparsePoly& b, std::int64_t p) {
  SparsePoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto& c = out[e];
      c = md(c + ca * cb, p);
    }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

/// Coefficient of X^{p^i} in prod_v (X + v), as a polynomial in x_0..x_{n-1}.
inline std::vector<SparsePoly> dickson_coefficients(int n, std::int64_t p) {
  SparsePoly prod{{std::vector<int>(n + 1, 0), 1}};
  std::int64_t count = 1;
  for (int i = 0; i < n; ++i) count *= p;
  for (std::int64_t code = 0; code < count; ++code) {
    SparsePoly lin;
    std::vector<int> ex(n + 1, 0);
    ex[n] = 1;
    lin[ex] = 1;
    std::int64_t c = code;
    for (int i = 0; i < n; ++i, c /= p) {
      if (c % p == 0) continue;
      std::vector<int> e(n + 1, 0);
      e[i] = 1;
      lin[e] = c % p;
    }
    prod = sparse_mul(prod, lin, p);
  }
  std::vector<SparsePoly> out(n);
  std::int64_t q = 1;
  for (int i = 0; i < n; ++i, q *= p)
    for (const auto& [e, coef] : prod)
      if (e[n] == q) out[i][std::vector<int>(e.begin(), e.end() - 1)] = coef;
  return out;
}

}  // namespace oracle
