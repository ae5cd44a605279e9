#pragma once
// Symmetric powers by expanding products of linear forms on dense
// coefficient arrays indexed by exponent tuples.

#include <map>

#include "oracle/elim.hpp"

namespace oracle {

using Mono = std::vector<int>;

inline void monos(int n, int d, Mono& cur, std::vector<Mono>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(d);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = d; a >= 0; --a) {
    cur.push_back(a);
    monos(n, d - a, cur, out);
    cur.pop_back();
  }
}

/// All degree-d monomials in n variables, lexicographically descending.
inline std::vector<Mono> monomials(int n, int d) {
  std::vector<Mono> out;
  Mono cur;
  if (n == 0) {
    if (d == 0) out.push_back({});
    return out;
  }
  monos(n, d, cur, out);
  return out;
}

/// Symmetric power of a substitution given by columns (column j = image of x_j).
inline Mat sym_power(const Mat& a, int d, std::int64_t p) {
  int n = static_cast<int>(a.size());
  auto basis = monomials(n, d);
  std::map<Mono, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
  Mat out = zeros(basis.size(), basis.size());
  for (std::size_t col = 0; col < basis.size(); ++col) {
    std::map<Mono, std::int64_t> poly{{Mono(n, 0), 1}};
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < basis[col][j]; ++t) {
        std::map<Mono, std::int64_t> next;
        for (const auto& [m, c] : poly)
          for (int i = 0; i < n; ++i) {
            if (!a[i][j]) continue;
            Mono mm = m;
            ++mm[i];
            next[mm] = (next[mm] + c * a[i][j]) % p;
          }
        poly = std::move(next);
      }
    for (const auto& [m, c] : poly)
      if (c % p) out[index.at(m)][col] = md(c, p);
  }
  return out;
}

/// Action on the span of the given monomials, which must be stable.
inline Mat restricted_sym_power(const Mat& a, const std::vector<Mono>& basis, std::int64_t p) {
  int n = static_cast<int>(a.size());
  std::map<Mono, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
  Mat out = zeros(basis.size(), basis.size());
  for (std::size_t col = 0; col < basis.size(); ++col) {
    std::map<Mono, std::int64_t> poly{{Mono(n, 0), 1}};
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < basis[col][j]; ++t) {
        std::map<Mono, std::int64_t> next;
        for (const auto& [m, c] : poly)
          for (int i = 0; i < n; ++i) {
            if (!a[i][j]) continue;
            Mono mm = m;
            ++mm[i];
            next[mm] = (next[mm] + c * a[i][j]) % p;
          }
        poly = std::move(next);
      }
    for (const auto& [m, c] : poly)
      if (c % p) out[index.at(m)][col] = md(c, p);
  }
  return out;
}

/// dim of the common fixed space of the given matrices.
inline std::size_t fixed_dim(const std::vector<Mat>& gens, std::int64_t p) {
  if (gens.empty()) return 0;
  std::size_t n = gens[0].size();
  Mat stacked;
  for (const auto& g : gens) {
    Mat d = sub(g, eye(n), p);
    for (auto& r : d) stacked.push_back(r);
  }
  return n - rank(stacked, p);
}

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
