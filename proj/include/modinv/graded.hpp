#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modinv/decompose.hpp"
#include "modinv/polynomial.hpp"

namespace modinv {

/// A set of variables closed under the action, with the action on its forms.
struct Block {
  std::vector<std::size_t> vars;
  GModule forms;
};

/// Connected components of the support of the generator matrices.
std::vector<Block> forms_blocks(const GroupPtr& g);

/// The multidegree component of S_d for one choice of block degrees: the
/// tensor product over blocks of the symmetric powers of each block.
struct Piece {
  std::vector<std::size_t> multidegree;
  /// Piece coordinate (blocks in order, first block slowest) -> position in
  /// MonomialBasis(n, d).
  std::vector<std::size_t> index;
  /// Embeds/retracts in piece coordinates; empty unless summands are kept.
  std::vector<Summand> summands;
};

struct DegreeData {
  std::size_t degree = 0;
  std::size_t dim = 0;
  std::map<std::size_t, std::size_t> multiplicity;  ///< registry index -> count
  std::vector<Piece> pieces;
};

struct GradedOptions {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool keep_summands = true;
  std::size_t dim_cap = 20000;
};

/// Per-degree decomposition of S = k[V] with a shared class registry.
/// Degrees are committed in increasing order, so labels do not depend on
/// the thread count.
class GradedEngine {
 public:
  explicit GradedEngine(GroupPtr g, GradedOptions opt = {});

  const GroupPtr& group() const { return group_; }
  const GradedOptions& options() const { return opt_; }
  std::size_t nvars() const { return group_->n(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  IsoClassRegistry& registry() { return registry_; }
  const IsoClassRegistry& registry() const { return registry_; }

  /// Decomposes all degrees up to D not yet computed.
  void extend(std::size_t D);
  /// Number of computed degrees (so degrees 0 .. computed() - 1 are available).
  std::size_t computed() const { return degrees_.size(); }
  const DegreeData& degree(std::size_t d) const;
  const MonomialBasis& basis(std::size_t d) const;

  /// S_d as a module in monomial coordinates.
  GModule component(std::size_t d) const;
  /// The module structure of one piece in piece coordinates.
  GModule piece_module(const Piece& piece) const;

  /// Summand embedding (dim S_d x dim class) and retraction in S_d coordinates.
  Matrix full_embed(std::size_t d, std::size_t piece, std::size_t summand) const;
  Matrix full_retract(std::size_t d, std::size_t piece, std::size_t summand) const;

  /// Multiplicity of a registry class in S_d.
  std::size_t multiplicity(std::size_t d, std::size_t cls) const;

 private:
  void compute_degree(std::size_t d);
  const std::vector<Summand>& tensor_parts(const std::vector<std::size_t>& classes) const;

  GroupPtr group_;
  GradedOptions opt_;
  IsoClassRegistry registry_;
  std::vector<Block> blocks_;
  std::vector<std::vector<GModule>> block_sym_;              // [block][degree]
  std::vector<std::vector<std::vector<Summand>>> block_parts_;  // [block][degree]
  std::map<std::vector<std::size_t>, std::vector<Summand>> tensor_cache_;
  std::vector<DegreeData> degrees_;
  std::vector<std::unique_ptr<MonomialBasis>> bases_;
};

struct GreenSeries {
  std::size_t max_degree = 0;
  std::vector<std::string> labels;                     ///< registry order
  std::vector<std::size_t> class_dims;
  std::vector<std::map<std::string, std::size_t>> rows;  ///< degree -> label -> multiplicity
  std::vector<std::size_t> component_dims;
};

GreenSeries green_series(GradedEngine& e, std::size_t D);

/// Multiplicity sequence of one class, as a dimension over F_p (times dim of E/rad E).
std::vector<std::size_t> class_series(const GradedEngine& e, std::size_t cls, std::size_t D);

/// dim Hom^oplus(M, S_d) for a registered class, computed from the
/// decomposition and again from the composition pairing on each piece; a
/// mismatch raises InternalError.
std::vector<std::size_t> hom_oplus_dims(GradedEngine& e, std::size_t cls, std::size_t D);

/// dim Hom_kG(M, S_d) summed over classes.
std::vector<std::size_t> hom_dims(GradedEngine& e, const GModule& m, std::size_t D);

/// Sets of p-subgroups stored by their maximal members.
struct SubgroupClass {
  enum class Kind { TrivialOnly, NonSylow, AllP, Custom };
  Kind kind = Kind::TrivialOnly;
  std::vector<Subgroup> custom;

  static SubgroupClass trivial_only() { return {Kind::TrivialOnly, {}}; }
  static SubgroupClass non_sylow() { return {Kind::NonSylow, {}}; }
  static SubgroupClass all_p() { return {Kind::AllP, {}}; }
  static SubgroupClass of(std::vector<Subgroup> hs) { return {Kind::Custom, std::move(hs)}; }
  std::string tag() const;
};

/// Maximal members; Custom lists are checked to consist of p-subgroups.
std::vector<Subgroup> maximal_members(const GroupPtr& g, const SubgroupClass& x);
/// All p-subgroups contained in a conjugate of a member.
std::vector<Subgroup> closure(const GroupPtr& g, const SubgroupClass& x);

/// dim Hom_kG(M, U) minus the span of transfers from the members of X.
std::size_t hom_quotient_dim(const GModule& m, const GModule& u, const std::vector<Subgroup>& x);

/// dim Hom_kG(M, S_d) / sum of transfers from X, through degree D.
std::vector<std::size_t> hom_quotient_dims(GradedEngine& e, const GModule& m, const SubgroupClass& x,
                                           std::size_t D);

/// The same numbers computed on each S_d directly, without the decomposition.
std::vector<std::size_t> hom_quotient_dims_direct(const GroupPtr& g, const GModule& m, const SubgroupClass& x,
                                                  std::size_t D);

/// Basis of T_G(X, S)_d = sum over H in X of tr^G_H(S_d^H), as columns.
Matrix transfer_ideal(const GModule& sd, const std::vector<Subgroup>& x);
std::vector<std::size_t> transfer_ideal_dims(GradedEngine& e, const SubgroupClass& x, std::size_t D);

/// Basis of I(Y, S)_d as columns; Y empty gives all of S_d.
Matrix fixed_ideal(const GroupPtr& g, const std::vector<Subgroup>& y, std::size_t d);
std::vector<std::size_t> fixed_ideal_dims(const GroupPtr& g, const std::vector<Subgroup>& y, std::size_t D);

/// Multiplication of a coordinate vector of S_d by a homogeneous polynomial.
Vec multiply_coords(const Poly& f, const MonomialBasis& from, std::span<const Scalar> v, const MonomialBasis& to);

/// S^{oplus G}: one generator per trivial summand, products projected onto
/// the trivial summands of the target degree.
struct SummandAlgebra {
  std::size_t max_degree = 0;
  std::vector<std::size_t> dims;
  /// product[a][b][i][j] = coordinates of gen(a, i) * gen(b, j) in degree a + b.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Vec>>> product;
  std::vector<std::vector<Vec>> generators;  ///< lifted invariants, S_d coordinates
};

SummandAlgebra invariant_summand_algebra(GradedEngine& e, std::size_t D);

/// J_G(k, S)_d: invariants whose map k -> S_d does not split, as columns.
Matrix nonsplit_invariants(GradedEngine& e, std::size_t d);

enum class FunctorTag { Hom, HomOplus, Tate, Brauer, TransferIdeal, Invariants };
std::string functor_name(FunctorTag t);
std::optional<FunctorTag> parse_functor(const std::string& s);

struct Parameter {
  Poly poly;
  std::size_t degree = 0;
  std::string name;
};

/// A finitely generated graded module over k[parameters], truncated at D.
struct GradedModule {
  FunctorTag functor = FunctorTag::Hom;
  std::string module_label;
  std::size_t max_degree = 0;
  std::vector<std::size_t> dims;
  std::vector<Parameter> params;
  /// action[i][d] : dims[d] columns -> dims[d + deg_i] rows, for d + deg_i <= D.
  std::vector<std::vector<Matrix>> action;
  /// Lifted basis per degree (dim S_d * dim M columns, homs vectorised row-major).
  std::vector<std::vector<Matrix>> lifts;
};

/// Parameter maps on F(S) for a functor F of M. Parameters must be
/// homogeneous invariants; commutation of the maps is checked.
GradedModule multiplicity_module(GradedEngine& e, const GModule& m, FunctorTag f, const std::vector<Parameter>& params,
                                 std::size_t D);

}  // namespace modinv
