#pragma once

#include <memory>
#include <string>
#include <vector>

#include "modinv/group.hpp"

namespace modinv {

/// A finite-dimensional kG-module given by one matrix per group generator.
class GModule {
 public:
  GModule() = default;
  GModule(GroupPtr group, std::vector<Matrix> generator_action, std::string label = {});

  static GModule trivial(const GroupPtr& g, std::size_t dim = 1);
  /// The defining action on degree-one forms.
  static GModule forms(const GroupPtr& g);
  /// kG acting on itself by left multiplication, basis indexed by the enumeration.
  static GModule regular(const GroupPtr& g);

  const GroupPtr& group() const { return group_; }
  std::size_t dim() const { return dim_; }
  Scalar p() const { return group_->p(); }
  const std::vector<Matrix>& generator_action() const { return gens_; }
  const Matrix& generator(std::size_t s) const { return gens_[s]; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  /// rho(g) for element index g, evaluated along the stored word.
  Matrix act(std::size_t g) const;
  /// rho(g) for every element, in enumeration order.
  std::vector<Matrix> all_actions() const;

  bool same_group(const GModule& o) const { return group_.get() == o.group_.get(); }

 private:
  GroupPtr group_;
  std::vector<Matrix> gens_;
  std::size_t dim_ = 0;
  std::string label_;
};

/// Matrix of rho(g) for a group element supplied as a matrix of the parent group.
Matrix act(const GModule& m, const Matrix& element);
Matrix act(const GModule& m, std::size_t element);

GModule dual(const GModule& m);
GModule direct_sum(const GModule& a, const GModule& b);
GModule tensor(const GModule& a, const GModule& b);
/// Restriction to a subgroup, re-expressed over the subgroup's own table.
GModule restrict_to(const GModule& m, const SubgroupTable& h);
/// Induction of an H-module (over h.table) to the parent group.
GModule induce(const GModule& m, const SubgroupTable& h);
/// Submodule spanned by the independent columns of basis (must be G-stable).
GModule submodule(const GModule& m, const Matrix& basis);
/// Quotient by the G-stable span of the columns of sub; also returns the
/// matrix of the chosen complement coordinates (dim quotient x dim m).
GModule quotient(const GModule& m, const Matrix& sub, Matrix* projection = nullptr);
/// Conjugate twist: rho'(h) = rho(x^{-1} h x) for x normalizing the subgroup.
GModule conjugate_twist(const GModule& u, const SubgroupTable& h, std::size_t x);

/// True when f rho_M(s) = rho_N(s) f for every generator s.
bool is_equivariant(const Matrix& f, const GModule& m, const GModule& n);

struct HomSpace {
  GModule source;
  GModule target;
  std::vector<Matrix> basis;  ///< dim(target) x dim(source) matrices
  std::size_t dim() const { return basis.size(); }
};

/// Hom_kG(M, N). The default route presents M by spinning generators and
/// solves only the non-trivial relations. When dim M > dim N the dual
/// problem Hom(N*, M*) is solved instead and transposed.
HomSpace hom_space(const GModule& source, const GModule& target);
/// Same space from the raw equations f rho_M(s) - rho_N(s) f = 0.
HomSpace hom_space_direct(const GModule& source, const GModule& target);

/// Basis of the fixed points M^G as column vectors.
std::vector<Vec> invariants(const GModule& m);

/// tr^G_H(f) = sum over a left transversal t of rho_N(t) f rho_M(t)^{-1}.
/// f must be H-equivariant; the result is checked to be G-equivariant.
Matrix transfer(const Matrix& f, const GModule& m, const GModule& n, const Subgroup& h);
/// Same with an explicit transversal and precomputed actions.
Matrix transfer_with(const Matrix& f, const std::vector<Matrix>& act_m_inv,
                     const std::vector<Matrix>& act_n, const std::vector<std::size_t>& reps);
/// Spanning set (as matrices) of tr^G_H Hom_kH(M, N).
std::vector<Matrix> transfer_image(const GModule& m, const GModule& n, const Subgroup& h);

/// Vectorise a matrix row-major.
Vec vectorize(const Matrix& m);
Matrix unvectorize(std::span<const Scalar> v, std::size_t rows, std::size_t cols, Scalar p);

}  // namespace modinv
