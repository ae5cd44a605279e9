#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "modinv/module.hpp"

namespace modinv {

using Exponent = std::vector<std::uint16_t>;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

struct ExponentHash {
  std::size_t operator()(const Exponent& e) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : e) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Monomials of degree d in n variables, lexicographically descending
/// (x0^d first). This order is global and fixed.
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(std::size_t n, std::size_t d);

  std::size_t n() const { return n_; }
  std::size_t degree() const { return d_; }
  std::size_t size() const { return monomials_.size(); }
  const Exponent& operator[](std::size_t i) const { return monomials_[i]; }
  const std::vector<Exponent>& monomials() const { return monomials_; }
  /// Position of e, or size() if e is not a monomial of this degree.
  std::size_t index(const Exponent& e) const;

 private:
  std::size_t n_ = 0, d_ = 0;
  std::vector<Exponent> monomials_;
  std::unordered_map<Exponent, std::size_t, ExponentHash> index_;
};

/// Matrix of the d-th symmetric power of a linear substitution. Column j of
/// `forms` is the image of x_j; column m of the result is the image of
/// monomial m, in MonomialBasis(n, d) coordinates.
Matrix sym_power(const Matrix& forms, std::size_t d);

/// S_d as a kG-module in MonomialBasis(n, d) coordinates.
GModule sym_component(const GroupPtr& g, std::size_t d);

/// Sparse polynomial over F_p in a fixed number of variables.
class Poly {
 public:
  using Terms = std::map<Exponent, Scalar, std::greater<>>;

  Poly() = default;
  Poly(std::size_t nvars, Scalar p) : n_(nvars), field_(p) {}
  static Poly constant(std::size_t nvars, Scalar p, Scalar c);
  static Poly variable(std::size_t nvars, Scalar p, std::size_t i);
  static Poly monomial(const Exponent& e, Scalar p, Scalar c = 1);
  /// From coordinates in a monomial basis.
  static Poly from_coords(const MonomialBasis& b, std::span<const Scalar> v, Scalar p);

  std::size_t nvars() const { return n_; }
  Scalar p() const { return field_.p(); }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Degree of the leading term (-1 for zero).
  long degree() const;
  bool is_homogeneous() const;
  Scalar coefficient(const Exponent& e) const;

  void add_term(const Exponent& e, Scalar c);
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(Scalar c) const;
  Poly pow(std::uint64_t e) const;
  /// f(x)^p computed as the Frobenius on exponents.
  Poly frobenius() const;
  bool operator==(const Poly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  /// Coordinates of the degree-d part in MonomialBasis(n, d).
  Vec coords(const MonomialBasis& b) const;
  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  std::size_t n_ = 0;
  PrimeField field_;
  Terms terms_;
};

/// Linear substitution x_j -> sum_i l(i, j) y_i producing a polynomial in
/// l.rows() variables. With l = A_g this is the action of g on forms.
Poly substitute(const Poly& f, const Matrix& l);
/// f is fixed by every generator.
bool is_invariant(const Poly& f, const GroupTable& g);
/// Product of the distinct members of the G-orbit of f.
Poly orbit_product(const Poly& f, const GroupTable& g);

/// Matrix of multiplication by f (homogeneous of degree e) from degree d to d + e.
Matrix multiplication_matrix(const Poly& f, const MonomialBasis& from, const MonomialBasis& to);

/// Default variable names: x, y, z, w for n <= 4, x0.. otherwise.
std::vector<std::string> default_names(std::size_t n);

}  // namespace modinv
