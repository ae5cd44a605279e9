#include "modinv/polynomial.hpp"

#include <sstream>

namespace modinv {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

void gen_monomials(std::size_t pos, std::size_t remaining, Exponent& e, std::vector<Exponent>& out) {
  if (pos + 1 == e.size()) {
    e[pos] = static_cast<std::uint16_t>(remaining);
    out.push_back(e);
    return;
  }
  for (std::size_t a = remaining + 1; a-- > 0;) {
    e[pos] = static_cast<std::uint16_t>(a);
    gen_monomials(pos + 1, remaining - a, e, out);
  }
}

}  // namespace

MonomialBasis::MonomialBasis(std::size_t n, std::size_t d) : n_(n), d_(d) {
  if (d > 65535) throw Error(ErrorCode::InvalidInput, "degree too large");
  if (n == 0) {
    if (d == 0) monomials_.emplace_back();
  } else {
    Exponent e(n, 0);
    gen_monomials(0, d, e, monomials_);
  }
  index_.reserve(monomials_.size());
  for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
}

std::size_t MonomialBasis::index(const Exponent& e) const {
  auto it = index_.find(e);
  return it == index_.end() ? monomials_.size() : it->second;
}

Matrix sym_power(const Matrix& forms, std::size_t d) {
  if (!forms.is_square()) throw Error(ErrorCode::DimensionMismatch, "forms action must be square");
  const std::size_t n = forms.rows();
  const Scalar p = forms.p();
  const PrimeField& f = forms.field();
  MonomialBasis prev(n, 0);
  std::vector<Vec> images{Vec{1}};
  for (std::size_t k = 1; k <= d; ++k) {
    MonomialBasis cur(n, k);
    std::vector<Vec> next(cur.size(), Vec(cur.size(), 0));
    for (std::size_t m = 0; m < cur.size(); ++m) {
      Exponent e = cur[m];
      std::size_t j = 0;
      while (e[j] == 0) ++j;
      --e[j];
      const Vec& v = images[prev.index(e)];
      Vec& w = next[m];
      for (std::size_t u = 0; u < v.size(); ++u) {
        if (!v[u]) continue;
        Exponent base = prev[u];
        for (std::size_t i = 0; i < n; ++i) {
          Scalar a = forms(i, j);
          if (!a) continue;
          ++base[i];
          std::size_t t = cur.index(base);
          w[t] = f.add(w[t], f.mul(v[u], a));
          --base[i];
        }
      }
    }
    prev = std::move(cur);
    images = std::move(next);
  }
  return Matrix::from_columns(images, prev.size(), p);
}

GModule sym_component(const GroupPtr& g, std::size_t d) {
  std::vector<Matrix> gens;
  for (const auto& a : g->generators()) gens.push_back(sym_power(a, d));
  return GModule(g, std::move(gens), d == 0 ? "k" : "");
}

Poly Poly::constant(std::size_t nvars, Scalar p, Scalar c) {
  Poly r(nvars, p);
  r.add_term(Exponent(nvars, 0), c);
  return r;
}

Poly Poly::variable(std::size_t nvars, Scalar p, std::size_t i) {
  Exponent e(nvars, 0);
  e.at(i) = 1;
  return monomial(e, p);
}

Poly Poly::monomial(const Exponent& e, Scalar p, Scalar c) {
  Poly r(e.size(), p);
  r.add_term(e, c);
  return r;
}

Poly Poly::from_coords(const MonomialBasis& b, std::span<const Scalar> v, Scalar p) {
  Poly r(b.n(), p);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (v[i]) r.add_term(b[i], v[i]);
  return r;
}

long Poly::degree() const {
  long d = -1;
  for (const auto& [e, c] : terms_) {
    long s = 0;
    for (auto x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

bool Poly::is_homogeneous() const {
  long d = -1;
  for (const auto& [e, c] : terms_) {
    long s = 0;
    for (auto x : e) s += x;
    if (d >= 0 && s != d) return false;
    d = s;
  }
  return true;
}

Scalar Poly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

void Poly::add_term(const Exponent& e, Scalar c) {
  if (e.size() != n_) throw Error(ErrorCode::DimensionMismatch, "exponent length");
  c = c % field_.p();
  if (!c) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second = field_.add(it->second, c);
    if (!it->second) terms_.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  if (o.n_ != n_) throw Error(ErrorCode::DimensionMismatch, "variable count");
  if (o.p() != p()) throw Error(ErrorCode::ModulusMismatch, "polynomial modulus");
  Poly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scaled(field_.neg(1)); }

Poly Poly::operator*(const Poly& o) const {
  if (o.n_ != n_) throw Error(ErrorCode::DimensionMismatch, "variable count");
  if (o.p() != p()) throw Error(ErrorCode::ModulusMismatch, "polynomial modulus");
  std::unordered_map<Exponent, Scalar, ExponentHash> acc;
  Exponent e(n_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      for (std::size_t i = 0; i < n_; ++i) e[i] = static_cast<std::uint16_t>(a[i] + b[i]);
      auto& slot = acc[e];
      slot = field_.add(slot, field_.mul(ca, cb));
    }
  Poly r(n_, p());
  for (auto& [k, c] : acc)
    if (c) r.terms_.emplace(k, c);
  return r;
}

Poly Poly::scaled(Scalar c) const {
  Poly r(n_, p());
  c %= p();
  if (!c) return r;
  for (const auto& [e, v] : terms_) r.terms_.emplace(e, field_.mul(v, c));
  return r;
}

Poly Poly::pow(std::uint64_t e) const {
  Poly r = constant(n_, p(), 1);
  Poly b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Poly Poly::frobenius() const {
  Poly r(n_, p());
  for (const auto& [e, c] : terms_) {
    Exponent ep = e;
    for (auto& x : ep) {
      std::uint32_t v = static_cast<std::uint32_t>(x) * p();
      if (v > 65535) throw Error(ErrorCode::CapExceeded, "exponent overflow in Frobenius");
      x = static_cast<std::uint16_t>(v);
    }
    r.terms_.emplace(std::move(ep), c);
  }
  return r;
}

Vec Poly::coords(const MonomialBasis& b) const {
  Vec v(b.size(), 0);
  for (const auto& [e, c] : terms_) {
    std::size_t i = b.index(e);
    if (i < b.size()) v[i] = c;
  }
  return v;
}

std::vector<std::string> default_names(std::size_t n) {
  static const char* small[] = {"x", "y", "z", "w"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(n <= 4 ? small[i] : "x" + std::to_string(i));
  return out;
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  auto nm = names.empty() ? default_names(n_) : names;
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    bool any = false;
    for (std::size_t i = 0; i < n_; ++i) any = any || e[i];
    if (c != 1 || !any) os << c;
    bool need_star = c != 1;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!e[i]) continue;
      if (need_star) os << "*";
      os << nm[i];
      if (e[i] > 1) os << "^" << e[i];
      need_star = true;
    }
  }
  return os.str();
}

Poly substitute(const Poly& f, const Matrix& l) {
  const std::size_t n = f.nvars();
  if (l.cols() != n) throw Error(ErrorCode::DimensionMismatch, "substitution matrix columns");
  if (l.p() != f.p()) throw Error(ErrorCode::ModulusMismatch, "substitution modulus");
  const std::size_t m = l.rows();
  std::vector<Poly> lin;
  for (std::size_t j = 0; j < n; ++j) {
    Poly v(m, f.p());
    for (std::size_t i = 0; i < m; ++i) {
      Exponent e(m, 0);
      e[i] = 1;
      v.add_term(e, l(i, j));
    }
    lin.push_back(std::move(v));
  }
  std::vector<std::vector<Poly>> powers(n);
  Poly out(m, f.p());
  for (const auto& [e, c] : f.terms()) {
    Poly t = Poly::constant(m, f.p(), c);
    for (std::size_t j = 0; j < n; ++j) {
      if (!e[j]) continue;
      auto& pw = powers[j];
      if (pw.empty()) pw.push_back(Poly::constant(m, f.p(), 1));
      while (pw.size() <= e[j]) pw.push_back(pw.back() * lin[j]);
      t = t * pw[e[j]];
    }
    out = out + t;
  }
  return out;
}

bool is_invariant(const Poly& f, const GroupTable& g) {
  for (const auto& a : g.generators())
    if (!(substitute(f, a) == f)) return false;
  return true;
}

Poly orbit_product(const Poly& f, const GroupTable& g) {
  std::vector<Poly> orbit{f};
  for (std::size_t i = 0; i < orbit.size(); ++i)
    for (const auto& a : g.generators()) {
      Poly h = substitute(orbit[i], a);
      bool seen = false;
      for (const auto& o : orbit) seen = seen || o == h;
      if (!seen) orbit.push_back(std::move(h));
    }
  Poly r = Poly::constant(f.nvars(), f.p(), 1);
  for (const auto& o : orbit) r = r * o;
  return r;
}

Matrix multiplication_matrix(const Poly& f, const MonomialBasis& from, const MonomialBasis& to) {
  if (from.n() != f.nvars() || to.n() != f.nvars())
    throw Error(ErrorCode::DimensionMismatch, "multiplication variable count");
  PrimeField fld(f.p());
  Matrix m(to.size(), from.size(), f.p());
  Exponent e(f.nvars());
  for (std::size_t j = 0; j < from.size(); ++j)
    for (const auto& [a, c] : f.terms()) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(a[i] + from[j][i]);
      std::size_t r = to.index(e);
      if (r == to.size()) throw Error(ErrorCode::DimensionMismatch, "multiplication target degree");
      m(r, j) = fld.add(m(r, j), c);
    }
  return m;
}

}  // namespace modinv
