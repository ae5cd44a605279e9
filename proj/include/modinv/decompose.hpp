#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modinv/algebra.hpp"
#include "modinv/module.hpp"

namespace modinv {

/// Endomorphism algebra of a module with its radical data.
struct EndAlgebra {
  MatrixAlgebra algebra;
  RadicalData rad;
  QuotientStructure quotient;
};

EndAlgebra endomorphism_algebra(const GModule& m, std::uint64_t seed = 0);

/// Certified data for an indecomposable module: E = End(M) is local and
/// E/rad(E) is a field of dimension s.
struct ClassData {
  GModule rep;
  EndAlgebra end;
  std::size_t s = 1;
  std::vector<std::size_t> key;  ///< canonical ordering key

  /// Image in E/rad(E) of the composite g * f  (g : N -> M, f : M -> N).
  Vec pi_of_composite(const Matrix& g, const Matrix& f) const;
  Vec pi(const Matrix& x) const;
};

/// Throws CertificationFailure unless m is certified indecomposable.
ClassData make_class_data(const GModule& m, std::uint64_t seed = 0);

/// (dim, then dim ker (rho(g) - 1)^j over every element g in enumeration order
/// and j = 1..dim, truncated once the kernel stops growing).
std::vector<std::size_t> canonical_key(const GModule& m);

struct RegistryEntry {
  std::string label;
  ClassData data;
  std::size_t first_degree = 0;
  std::optional<Subgroup> vertex;  ///< filled lazily
};

/// Catalogue of indecomposable classes with deterministic labels.
class IsoClassRegistry {
 public:
  explicit IsoClassRegistry(GroupPtr g, std::uint64_t seed = 0);

  const GroupPtr& group() const { return group_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return entries_.size(); }
  const RegistryEntry& operator[](std::size_t i) const { return entries_[i]; }
  RegistryEntry& at(std::size_t i) { return entries_.at(i); }
  std::optional<std::size_t> find_label(const std::string& label) const;

  /// Index of the class isomorphic to m (m indecomposable), if registered.
  /// When iso is non-null it receives an isomorphism rep -> m.
  std::optional<std::size_t> find(const GModule& m, Matrix* iso = nullptr) const;

  /// Registers a batch of new pairwise non-isomorphic classes first seen in
  /// `degree`: they are sorted by canonical key (stable) and labelled.
  /// Returns the new index of each input.
  std::vector<std::size_t> add_batch(std::vector<ClassData> classes, std::size_t degree);

  /// Registers a class with an explicit label (used when restoring a cache).
  std::size_t add_labelled(ClassData cls, std::string label, std::size_t degree);

 private:
  std::string make_label(const ClassData& c, std::size_t degree);

  GroupPtr group_;
  std::uint64_t seed_;
  std::vector<RegistryEntry> entries_;
  std::map<std::size_t, std::size_t> per_dim_;
  std::size_t degree_one_count_ = 0;
};

/// An indecomposable summand of N: retract * embed = identity on the class
/// representative, and the summands of a decomposition are mutually orthogonal.
struct Summand {
  std::size_t cls = 0;  ///< registry index (or local index before commit)
  Matrix embed;         ///< dim N x dim class
  Matrix retract;       ///< dim class x dim N
};

/// Result of decomposing against a read-only registry: known summands, plus
/// certified indecomposables whose classes are not registered yet.
struct PartialDecomposition {
  std::vector<Summand> known;
  std::vector<ClassData> fresh;     ///< pairwise non-isomorphic new classes
  std::vector<Summand> fresh_summands;  ///< cls indexes into `fresh`
};

struct DecomposeOptions {
  std::uint64_t seed = 0;
  std::size_t random_attempts = 64;
  std::size_t dim_cap = 20000;
};

/// Multiplicity of class c in n, with the chosen summands and the complement.
struct PeelResult {
  std::vector<Summand> summands;  ///< embeds/retracts in n's coordinates
  Matrix complement_embed;        ///< dim n x dim complement
  Matrix complement_proj;         ///< dim complement x dim n
  GModule complement;
};

PeelResult peel(const GModule& n, const ClassData& c, std::size_t cls_index);

/// Number of summands isomorphic to c: rank of the pairing
/// Hom(N, M) x Hom(M, N) -> E/rad(E), divided by dim E/rad(E).
std::size_t multiplicity(const GModule& n, const ClassData& c);

struct FittingSplit {
  Matrix kernel_basis;  ///< basis of ker theta^N
  Matrix image_basis;   ///< basis of im theta^N
  Matrix kernel_proj, image_proj;
};

/// Fitting decomposition for an endomorphism theta; nullopt when theta is
/// nilpotent or invertible.
std::optional<FittingSplit> fitting_split(const GModule& m, const Matrix& theta);

PartialDecomposition decompose_partial(const GModule& m, const IsoClassRegistry& reg,
                                       const DecomposeOptions& opt = {});

/// Commits fresh classes of several partial results (in order) to the
/// registry, rewriting every summand to registry indices and
/// representative coordinates.
std::vector<std::vector<Summand>> commit(std::vector<PartialDecomposition> parts, IsoClassRegistry& reg,
                                         std::size_t degree);

/// Full decomposition; returns summands with registry indices.
std::vector<Summand> decompose(const GModule& m, IsoClassRegistry& reg, std::size_t degree,
                               const DecomposeOptions& opt = {});

/// Multiplicities per registry index.
std::map<std::size_t, std::size_t> multiplicities(const std::vector<Summand>& s);

/// Isomorphism test for indecomposable modules; if `iso` is given it
/// receives an isomorphism m -> n.
bool is_isomorphic(const ClassData& m, const GModule& n, Matrix* iso = nullptr);
bool is_isomorphic(const GModule& m, const GModule& n);

}  // namespace modinv
