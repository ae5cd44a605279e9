#pragma once
// Exhaustive decomposition of tiny modules: enumerate every endomorphism,
// split along a nontrivial idempotent, and classify the indecomposables by
// searching Hom for an invertible map.

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "oracle/elim.hpp"

namespace oracle {

struct Tiny {
  std::vector<Mat> gens;
  std::size_t dim() const { return gens.empty() ? 0 : gens[0].size(); }
};

/// Basis of {X : X A_s = B_s X} as flattened rows (X is rows(B) x rows(A)).
inline Mat hom_basis(const Tiny& a, const Tiny& b, std::int64_t p) {
  std::size_t m = a.dim(), n = b.dim();
  Mat eqs;
  for (std::size_t s = 0; s < a.gens.size(); ++s)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Row r(n * m, 0);
        for (std::size_t k = 0; k < m; ++k) r[i * m + k] = md(r[i * m + k] + a.gens[s][k][j], p);
        for (std::size_t k = 0; k < n; ++k) r[k * m + j] = md(r[k * m + j] - b.gens[s][i][k], p);
        eqs.push_back(r);
      }
  if (eqs.empty()) eqs.push_back(Row(n * m, 0));
  return kernel(eqs, n * m, p);
}

inline Mat unflatten(const Row& v, std::size_t rows, std::size_t cols) {
  Mat m = zeros(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = v[i * cols + j];
  return m;
}

template <class F>
inline bool for_each_combination(const Mat& basis, std::int64_t p, std::size_t cap, F&& f) {
  std::size_t e = basis.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < e; ++i) {
    total *= static_cast<std::size_t>(p);
    if (total > cap) throw std::runtime_error("oracle cap exceeded");
  }
  std::size_t len = basis.empty() ? 0 : basis[0].size();
  std::vector<std::int64_t> c(e, 0);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t x = t;
    for (std::size_t i = 0; i < e; ++i) {
      c[i] = static_cast<std::int64_t>(x % p);
      x /= p;
    }
    Row v(len, 0);
    for (std::size_t i = 0; i < e; ++i)
      if (c[i])
        for (std::size_t k = 0; k < len; ++k) v[k] = (v[k] + c[i] * basis[i][k]) % p;
    if (f(v)) return true;
  }
  return false;
}

/// Submodule spanned by the columns of an idempotent's image.
inline Tiny image_module(const Tiny& m, const Mat& e, std::int64_t p) {
  std::size_t n = m.dim();
  Mat cols;  // columns of e as rows
  for (std::size_t j = 0; j < n; ++j) {
    Row c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = e[i][j];
    cols.push_back(c);
  }
  Mat red = cols;
  auto piv = reduce(red, p);
  Mat basis(red.begin(), red.begin() + static_cast<std::ptrdiff_t>(piv.size()));  // rows = basis vectors
  std::size_t k = basis.size();
  Tiny out;
  for (const auto& g : m.gens) {
    Mat act = zeros(k, k);
    for (std::size_t b = 0; b < k; ++b) {
      Row img(n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) img[i] = (img[i] + g[i][j] * basis[b][j]) % p;
      // reduced basis: coordinates read at pivot columns
      for (std::size_t t = 0; t < k; ++t) act[t][b] = img[piv[t]];
    }
    out.gens.push_back(act);
  }
  return out;
}

inline std::vector<Tiny> split_all(const Tiny& m, std::int64_t p, std::size_t cap) {
  if (m.dim() == 0) return {};
  std::size_t n = m.dim();
  Mat end = hom_basis(m, m, p);
  std::optional<Mat> idem;
  for_each_combination(end, p, cap, [&](const Row& v) {
    Mat e = unflatten(v, n, n);
    if (e == zeros(n, n) || e == eye(n)) return false;
    if (mul(e, e, p) != e) return false;
    idem = e;
    return true;
  });
  if (!idem) return {m};
  auto a = split_all(image_module(m, *idem, p), p, cap);
  auto b = split_all(image_module(m, sub(eye(n), *idem, p), p), p, cap);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline bool isomorphic(const Tiny& a, const Tiny& b, std::int64_t p, std::size_t cap) {
  if (a.dim() != b.dim()) return false;
  Mat h = hom_basis(a, b, p);
  std::size_t n = a.dim();
  return for_each_combination(h, p, cap, [&](const Row& v) { return rank(unflatten(v, n, n), p) == n; });
}

/// Multiset of classes as (dim, multiplicity), one entry per class.
inline std::vector<std::pair<std::size_t, std::size_t>> decompose(const Tiny& m, std::int64_t p,
                                                                  std::size_t cap = 1u << 16) {
  auto parts = split_all(m, p, cap);
  std::vector<Tiny> reps;
  std::vector<std::size_t> mult;
  for (const auto& x : parts) {
    bool found = false;
    for (std::size_t r = 0; r < reps.size() && !found; ++r)
      if (isomorphic(reps[r], x, p, cap)) {
        ++mult[r];
        found = true;
      }
    if (!found) {
      reps.push_back(x);
      mult.push_back(1);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t r = 0; r < reps.size(); ++r) out.emplace_back(reps[r].dim(), mult[r]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
