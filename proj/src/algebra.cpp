#include "modinv/algebra.hpp"

#include <random>

namespace modinv {

namespace upoly {

void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

UPoly mul(const UPoly& a, const UPoly& b, const PrimeField& f) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  trim(r);
  return r;
}

UPoly sub(const UPoly& a, const UPoly& b, const PrimeField& f) {
  UPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.sub(r[i], b[i]);
  trim(r);
  return r;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b, const PrimeField& f) {
  if (b.empty()) throw Error(ErrorCode::InvalidInput, "polynomial division by zero");
  UPoly r = a;
  trim(r);
  if (r.size() < b.size()) return {{}, r};
  UPoly q(r.size() - b.size() + 1, 0);
  Scalar lead_inv = f.inv(b.back());
  while (r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    Scalar c = f.mul(r.back(), lead_inv);
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = f.sub(r[shift + i], f.mul(c, b[i]));
    trim(r);
    if (r.empty()) break;
  }
  trim(q);
  return {q, r};
}

UPoly gcd(UPoly a, UPoly b, const PrimeField& f) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = divmod(a, b, f).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Scalar iv = f.inv(a.back());
    for (auto& x : a) x = f.mul(x, iv);
  }
  return a;
}

UPoly powmod(const UPoly& base, std::uint64_t e, const UPoly& m, const PrimeField& f) {
  UPoly r{1};
  r = divmod(r, m, f).second;
  UPoly b = divmod(base, m, f).second;
  while (e) {
    if (e & 1) r = divmod(mul(r, b, f), m, f).second;
    e >>= 1;
    if (e) b = divmod(mul(b, b, f), m, f).second;
  }
  return r;
}

bool is_irreducible(const UPoly& a, const PrimeField& f) {
  UPoly m = a;
  trim(m);
  if (m.size() < 2) return false;
  const std::size_t n = m.size() - 1;
  if (n == 1) return true;
  std::vector<std::size_t> primes;
  for (std::size_t q = 2, k = n; q <= k; ++q)
    if (k % q == 0) {
      primes.push_back(q);
      while (k % q == 0) k /= q;
    }
  // frob[k] = x^(p^k) mod m
  std::vector<UPoly> frob{divmod(UPoly{0, 1}, m, f).second};
  for (std::size_t k = 1; k <= n; ++k) frob.push_back(powmod(frob.back(), f.p(), m, f));
  UPoly x = divmod(UPoly{0, 1}, m, f).second;
  if (sub(frob[n], x, f).size() != 0) return false;
  for (auto q : primes) {
    UPoly g = gcd(m, sub(frob[n / q], x, f), f);
    if (g.size() != 1) return false;
  }
  return true;
}

UPoly inverse_mod(const UPoly& a, const UPoly& m, const PrimeField& f) {
  // extended Euclid on (a, m)
  UPoly r0 = divmod(a, m, f).second, r1 = m;
  UPoly s0{1}, s1{};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, f);
    UPoly s = sub(s0, mul(q, s1, f), f);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.size() != 1) throw Error(ErrorCode::InvalidInput, "polynomials not coprime");
  Scalar iv = f.inv(r0[0]);
  for (auto& x : s0) x = f.mul(x, iv);
  return divmod(s0, m, f).second;
}

}  // namespace upoly

namespace {

Matrix flatten_columns(const std::vector<Matrix>& basis, Scalar p) {
  std::size_t len = basis.empty() ? 0 : basis.front().data().size();
  Matrix m(len, basis.size(), p);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& d = basis[j].data();
    for (std::size_t i = 0; i < len; ++i) m(i, j) = d[i];
  }
  return m;
}

// Tr(x^(p^i)) of the canonical integer lift, mod p^(i+1).
std::uint64_t lifted_power_trace(const Matrix& x, std::uint64_t pi, std::uint64_t q) {
  const std::size_t n = x.rows();
  std::vector<std::uint64_t> base(x.data().begin(), x.data().end());
  auto mulq = [&](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::vector<std::uint64_t> c(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        std::uint64_t aik = a[i * n + k];
        if (!aik) continue;
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] = (c[i * n + j] + aik * b[k * n + j]) % q;
      }
    return c;
  };
  std::vector<std::uint64_t> r(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) r[i * n + i] = 1;
  std::uint64_t e = pi;
  while (e) {
    if (e & 1) r = mulq(r, base);
    e >>= 1;
    if (e) base = mulq(base, base);
  }
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < n; ++i) t = (t + r[i * n + i]) % q;
  return t;
}

Matrix combine(const std::vector<Matrix>& basis, std::span<const Scalar> c, std::size_t n, Scalar p) {
  Matrix m(n, n, p);
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (c[k]) m = m + basis[k].scaled(c[k]);
  return m;
}

}  // namespace

MatrixAlgebra::MatrixAlgebra(std::vector<Matrix> basis) : basis_(std::move(basis)) {
  if (basis_.empty()) throw Error(ErrorCode::InvalidInput, "empty algebra basis");
  n_ = basis_.front().rows();
  p_ = basis_.front().p();
  for (const auto& b : basis_)
    if (!b.is_square() || b.rows() != n_) throw Error(ErrorCode::DimensionMismatch, "algebra basis shapes");
  coords_ = CoordinateMap(flatten_columns(basis_, p_));
}

Vec MatrixAlgebra::coords(const Matrix& x) const { return coords_.coordinates(x.data()); }

std::optional<Vec> MatrixAlgebra::try_coords(const Matrix& x) const { return coords_.try_coordinates(x.data()); }

Vec MatrixAlgebra::coords_of_product(const Matrix& a, const Matrix& b) const {
  if (a.cols() != b.rows() || a.rows() != n_ || b.cols() != n_)
    throw Error(ErrorCode::DimensionMismatch, "product outside the algebra's matrix size");
  const PrimeField& f = a.field();
  const auto& piv = coords_.pivot_rows();
  Vec sub(piv.size());
  for (std::size_t t = 0; t < piv.size(); ++t) {
    std::size_t r = piv[t] / n_, c = piv[t] % n_;
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < a.cols(); ++k) acc = (acc + static_cast<std::uint64_t>(a(r, k)) * b(k, c)) % f.p();
    sub[t] = static_cast<Scalar>(acc % f.p());
  }
  return coords_.pivot_inverse().apply(sub);
}

Matrix MatrixAlgebra::element(std::span<const Scalar> c) const { return combine(basis_, c, n_, p_); }

Vec MatrixAlgebra::unit() const {
  auto c = try_coords(Matrix::identity(n_, p_));
  if (!c) throw Error(ErrorCode::InvalidInput, "algebra does not contain the identity");
  return *c;
}

std::vector<Vec> radical_of_span(const std::vector<Matrix>& basis) {
  if (basis.empty()) return {};
  const std::size_t e = basis.size();
  const std::size_t n = basis.front().rows();
  const Scalar p = basis.front().p();
  std::size_t levels = 0;  // largest i with p^i <= n
  for (std::uint64_t pw = p; pw <= n; pw *= p) ++levels;

  Matrix ideal = Matrix::identity(e, p);  // columns: current ideal in coordinates
  std::vector<Matrix> mats = basis;
  std::uint64_t pi = 1;
  for (std::size_t i = 0; i <= levels && ideal.cols() > 0; ++i) {
    const std::uint64_t q = pi * p;
    Matrix sys(e, ideal.cols(), p);
    for (std::size_t k = 0; k < mats.size(); ++k) {
      for (std::size_t l = 0; l < e; ++l) {
        std::uint64_t val;
        if (i == 0) {
          // Tr(a b) directly
          const Matrix& a = mats[k];
          const Matrix& b = basis[l];
          std::uint64_t t = 0;
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) t += static_cast<std::uint64_t>(a(r, c)) * b(c, r) % p;
          val = t % p;
        } else {
          std::uint64_t t = lifted_power_trace(mats[k] * basis[l], pi, q);
          if (t % pi != 0) throw Error(ErrorCode::InternalError, "p-power trace not divisible");
          val = t / pi;
        }
        sys(l, k) = static_cast<Scalar>(val % p);
      }
    }
    auto ns = nullspace(sys);
    Matrix next(e, ns.size(), p);
    Matrix comb = Matrix::from_columns(ns, ideal.cols(), p);
    next = ideal * comb;
    ideal = next;
    mats.clear();
    for (std::size_t k = 0; k < ideal.cols(); ++k) mats.push_back(combine(basis, ideal.column(k), n, p));
    pi *= p;
  }
  std::vector<Vec> out;
  for (std::size_t k = 0; k < ideal.cols(); ++k) out.push_back(ideal.column(k));
  return out;
}

std::vector<Vec> radical_coords(const MatrixAlgebra& a) { return radical_of_span(a.basis()); }

RadicalData radical(const MatrixAlgebra& a) {
  const std::size_t e = a.dim();
  const std::size_t n = a.degree();
  const Scalar p = a.p();
  auto rc = radical_coords(a);
  RadicalData out;
  out.rad = rc.empty() ? Matrix(e, 0, p) : Matrix::from_columns(rc, e, p);

  // nilpotence: rad^k reaches zero within dim A steps
  if (!rc.empty()) {
    std::vector<Matrix> r;
    for (const auto& c : rc) r.push_back(a.element(c));
    std::vector<Matrix> cur = r;
    std::size_t steps = 0;
    while (!cur.empty()) {
      if (++steps > e + 1) throw Error(ErrorCode::InternalError, "radical certification: not nilpotent");
      std::vector<Vec> prods;
      for (const auto& x : cur)
        for (const auto& y : r) {
          Matrix z = x * y;
          if (!z.is_zero()) prods.push_back(z.data());
        }
      cur.clear();
      if (prods.empty()) break;
      Matrix span = column_space(Matrix::from_columns(prods, n * n, p));
      for (std::size_t j = 0; j < span.cols(); ++j) {
        Vec v = span.column(j);
        Matrix m(n, n, p);
        for (std::size_t t = 0; t < n * n; ++t) m(t / n, t % n) = v[t];
        cur.push_back(std::move(m));
      }
    }
  }

  auto rr = rref(hstack(out.rad, Matrix::identity(e, p)));
  std::vector<std::size_t> extra;
  for (auto piv : rr.pivots)
    if (piv >= out.rad.cols()) extra.push_back(piv - out.rad.cols());
  const std::size_t s = extra.size();
  out.lift = Matrix(e, s, p);
  for (std::size_t j = 0; j < s; ++j) out.lift(extra[j], j) = 1;
  auto inv = inverse(hstack(out.rad, out.lift));
  if (!inv) throw Error(ErrorCode::InternalError, "radical complement");
  out.to_quotient = inv->block(out.rad.cols(), 0, s, e);

  for (std::size_t i = 0; i < s; ++i) {
    Matrix l(s, s, p);
    for (std::size_t j = 0; j < s; ++j) {
      Vec c = out.to_quotient.apply(a.coords(a[extra[i]] * a[extra[j]]));
      for (std::size_t t = 0; t < s; ++t) l(t, j) = c[t];
    }
    out.left_mult.push_back(std::move(l));
  }
  if (!radical_of_span(out.left_mult).empty())
    throw Error(ErrorCode::InternalError, "radical certification: quotient not semisimple");
  return out;
}

Matrix quotient_left_mult(const RadicalData& r, std::span<const Scalar> c) {
  const std::size_t s = r.quotient_dim();
  Scalar p = r.to_quotient.p();
  Matrix m(s, s, p);
  for (std::size_t i = 0; i < s; ++i)
    if (c[i]) m = m + r.left_mult[i].scaled(c[i]);
  return m;
}

UPoly minimal_polynomial(const Matrix& x) {
  const std::size_t n = x.rows();
  const Scalar p = x.p();
  const PrimeField f(p);
  std::vector<Vec> powers;
  Matrix cur = Matrix::identity(n, p);
  for (std::size_t k = 0; k <= n; ++k) {
    Vec v = cur.data();
    if (!powers.empty()) {
      Matrix a = Matrix::from_columns(powers, n * n, p);
      if (auto c = solve(a, v)) {
        UPoly m(k + 1, 0);
        for (std::size_t i = 0; i < k; ++i) m[i] = f.neg((*c)[i]);
        m[k] = 1;
        return m;
      }
    }
    powers.push_back(std::move(v));
    cur = cur * x;
  }
  throw Error(ErrorCode::InternalError, "minimal polynomial degree exceeds size");
}

Matrix evaluate(const UPoly& f, const Matrix& x) {
  Matrix r(x.rows(), x.cols(), x.p());
  for (std::size_t i = f.size(); i-- > 0;) {
    r = r * x;
    if (f[i])
      for (std::size_t d = 0; d < x.rows(); ++d) r(d, d) = x.field().add(r(d, d), f[i]);
  }
  return r;
}

QuotientStructure analyse_quotient(const RadicalData& r, std::uint64_t seed) {
  QuotientStructure q;
  const std::size_t s = r.quotient_dim();
  const Scalar p = r.to_quotient.p();
  const PrimeField f(p);
  q.commutative = true;
  for (std::size_t i = 0; i < s && q.commutative; ++i)
    for (std::size_t j = i + 1; j < s && q.commutative; ++j)
      if (r.left_mult[i].column(j) != r.left_mult[j].column(i)) q.commutative = false;
  if (!q.commutative) return q;

  // unit in quotient coordinates: the column u with L_i u = e_i
  Matrix stack(s * s, s, p);
  Vec rhs(s * s, 0);
  for (std::size_t i = 0; i < s; ++i) {
    stack.set_block(i * s, 0, r.left_mult[i]);
    rhs[i * s + i] = 1;
  }
  auto unit = solve(stack, rhs);
  if (!unit) throw Error(ErrorCode::InternalError, "quotient has no unit");

  // Frobenius x -> x^p is linear on a commutative algebra in characteristic p
  Matrix frob(s, s, p);
  for (std::size_t j = 0; j < s; ++j) {
    Vec ej(s, 0);
    ej[j] = 1;
    Vec v = power(r.left_mult[j], p - 1).apply(ej);
    for (std::size_t t = 0; t < s; ++t) frob(t, j) = v[t];
  }
  Matrix fixed = frob - Matrix::identity(s, p);
  auto ker = nullspace(fixed);
  q.factors = ker.size();
  if (q.factors > 1) {
    Matrix ub = Matrix::from_columns({*unit}, s, p);
    for (const auto& z : ker)
      if (!span_contains(ub, Matrix::from_columns({z}, s, p))) {
        q.splitting = z;
        break;
      }
    return q;
  }

  auto try_primitive = [&](const Vec& c) {
    UPoly m = minimal_polynomial(quotient_left_mult(r, c));
    if (m.size() == s + 1 && upoly::is_irreducible(m, f)) {
      q.primitive = c;
      q.primitive_minpoly = m;
      return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < s; ++i) {
    Vec c(s, 0);
    c[i] = 1;
    if (try_primitive(c)) return q;
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 256; ++t) {
    Vec c(s);
    for (auto& x : c) x = static_cast<Scalar>(rng() % p);
    if (try_primitive(c)) return q;
  }
  return q;
}

}  // namespace modinv
