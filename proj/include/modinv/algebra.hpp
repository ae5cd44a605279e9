#pragma once

#include <optional>
#include <vector>

#include "modinv/matrix.hpp"

namespace modinv {

/// Dense univariate polynomial over F_p, coefficients low to high, no trailing zeros.
using UPoly = std::vector<Scalar>;

namespace upoly {
void trim(UPoly& a);
UPoly mul(const UPoly& a, const UPoly& b, const PrimeField& f);
UPoly sub(const UPoly& a, const UPoly& b, const PrimeField& f);
/// Quotient and remainder; b must be nonzero.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b, const PrimeField& f);
UPoly gcd(UPoly a, UPoly b, const PrimeField& f);
UPoly powmod(const UPoly& base, std::uint64_t e, const UPoly& m, const PrimeField& f);
/// Rabin's irreducibility test.
bool is_irreducible(const UPoly& a, const PrimeField& f);
/// u with u * a = 1 mod m, assuming gcd(a, m) = 1.
UPoly inverse_mod(const UPoly& a, const UPoly& m, const PrimeField& f);
}  // namespace upoly

/// A subalgebra of n x n matrices given by a basis, with fast coordinates:
/// the coordinates of an element are read off a fixed set of entries.
class MatrixAlgebra {
 public:
  MatrixAlgebra() = default;
  explicit MatrixAlgebra(std::vector<Matrix> basis);

  std::size_t dim() const { return basis_.size(); }
  std::size_t degree() const { return n_; }
  Scalar p() const { return p_; }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& operator[](std::size_t i) const { return basis_[i]; }

  /// Coordinates of an algebra element (membership not checked).
  Vec coords(const Matrix& x) const;
  /// Coordinates with full membership check.
  std::optional<Vec> try_coords(const Matrix& x) const;
  /// Coordinates of the product a * b, evaluating only the entries needed.
  Vec coords_of_product(const Matrix& a, const Matrix& b) const;
  Matrix element(std::span<const Scalar> c) const;
  /// Coordinates of the identity matrix.
  Vec unit() const;

 private:
  std::vector<Matrix> basis_;
  std::size_t n_ = 0;
  Scalar p_ = 2;
  CoordinateMap coords_;  // over the row-major flattening
};

/// Radical computed in characteristic p via iterated trace forms of
/// p-power maps, certified nilpotent and with semisimple quotient.
struct RadicalData {
  Matrix rad;                      ///< dim A x r: radical basis in algebra coordinates
  Matrix to_quotient;              ///< s x dim A: coordinates in A/rad
  Matrix lift;                     ///< dim A x s: chosen lifts of quotient basis
  std::vector<Matrix> left_mult;   ///< s x s matrices of left multiplication in A/rad
  std::size_t quotient_dim() const { return to_quotient.rows(); }
};

/// Basis of rad(A) as coordinate vectors, without certification.
std::vector<Vec> radical_coords(const MatrixAlgebra& a);
/// Same, for an algebra given only by a spanning list of n x n matrices closed
/// under multiplication; returns coordinates in that list.
std::vector<Vec> radical_of_span(const std::vector<Matrix>& basis);
/// Radical plus quotient structure; throws InternalError when certification fails.
RadicalData radical(const MatrixAlgebra& a);

/// Minimal polynomial of an element of a semisimple quotient, from its left
/// multiplication matrix.
UPoly minimal_polynomial(const Matrix& left_mult);

struct QuotientStructure {
  bool commutative = false;
  /// Number of simple factors when commutative (kernel of x -> x^p - x).
  std::size_t factors = 0;
  /// Witness for the field case: an element whose minimal polynomial is
  /// irreducible of degree dim(A/rad).
  std::optional<Vec> primitive;
  UPoly primitive_minpoly;
  /// A non-scalar element with z^p = z when commutative with several factors.
  std::optional<Vec> splitting;
  bool is_field() const { return commutative && factors == 1 && primitive.has_value(); }
};

/// Field certificate for A/rad: commutativity, factor count and a
/// primitive element found among basis elements, then seeded random sums.
QuotientStructure analyse_quotient(const RadicalData& r, std::uint64_t seed = 0);

/// Matrix of left multiplication by an element of A/rad given in coordinates.
Matrix quotient_left_mult(const RadicalData& r, std::span<const Scalar> c);

/// Evaluate a polynomial at a square matrix.
Matrix evaluate(const UPoly& f, const Matrix& x);

}  // namespace modinv
