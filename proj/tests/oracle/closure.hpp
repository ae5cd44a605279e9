#pragma once
// Brute-force matrix group closure on plain integer arrays.

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using Flat = std::vector<std::int64_t>;

inline Flat mat_mul(const Flat& a, const Flat& b, std::size_t n, std::int64_t p) {
  Flat c(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] = (c[i * n + j] + a[i * n + k] * b[k * n + j]) % p;
  return c;
}

inline std::set<Flat> closure(const std::vector<Flat>& gens, std::size_t n, std::int64_t p) {
  Flat id(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) id[i * n + i] = 1;
  std::set<Flat> all{id};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Flat> cur(all.begin(), all.end());
    for (const auto& a : cur)
      for (const auto& g : gens)
        if (all.insert(mat_mul(a, g, n, p)).second) grew = true;
  }
  return all;
}

}  // namespace oracle
