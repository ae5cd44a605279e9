#pragma once

#include <optional>
#include <vector>

#include "modinv/decompose.hpp"

namespace modinv {

/// rad(kG) as elements of kG, and the projective indecomposables.
struct GroupAlgebraData {
  GroupPtr group;
  std::vector<Vec> radical;           ///< coefficient vectors over group elements
  std::vector<GModule> projectives;   ///< pairwise non-isomorphic, deterministic order
};

GroupAlgebraData group_algebra_data(const GroupPtr& g, std::uint64_t seed = 0);

/// Basis of rad(kG) M as columns.
Matrix radical_submodule(const GModule& m, const GroupAlgebraData& a);

struct ProjectiveCover {
  GModule cover;
  Matrix surjection;  ///< dim M x dim P
  std::vector<std::size_t> summands;  ///< index into projectives, per block of P
};

ProjectiveCover projective_cover(const GModule& m, const GroupAlgebraData& a);
ProjectiveCover projective_cover(const GModule& m);

/// Kernel of the projective cover; dimension 0 for projective M.
GModule heller(const GModule& m, const GroupAlgebraData& a);
GModule heller(const GModule& m);

/// Higman's criterion: id_M lies in tr^G_H End_kH(M).
bool is_relatively_projective(const GModule& m, const Subgroup& h);

/// A vertex of an indecomposable module, found by descending from a Sylow
/// subgroup through maximal subgroups.
Subgroup vertex(const GModule& m);

struct SourceData {
  Subgroup vertex;
  SubgroupTable table;
  GModule source;  ///< over table.table
};

SourceData source(const GModule& m, std::uint64_t seed = 0);
SourceData source(const GModule& m, const Subgroup& vtx, std::uint64_t seed = 0);

/// Stabiliser in N_G(P) of the source's isomorphism class.
Subgroup inertia(const SourceData& s);
Subgroup inertia(const GModule& m);

/// dim Hom_kG(M, N) minus the dimension of the transfer image from the trivial subgroup.
std::size_t tate_hom_dim(const GModule& m, const GModule& n);
/// tate_hom_dim(heller^i(M), N) for i >= 1.
std::size_t ext_dim(const GModule& m, const GModule& n, std::size_t i);

}  // namespace modinv
