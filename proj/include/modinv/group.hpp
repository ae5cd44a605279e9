#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "modinv/matrix.hpp"

namespace modinv {

using Word = std::vector<std::uint16_t>;

struct MatrixHash {
  std::size_t operator()(const std::vector<Scalar>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Scalar x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// A finite matrix group over F_p, fully enumerated by breadth-first closure
/// over its generators. Element 0 is the identity; element i (i > 0) is
/// elements[parent(i)] * generators[last_generator(i)].
class GroupTable {
 public:
  static constexpr std::size_t kDefaultCap = 10000;

  /// Generators are invertible n x n matrices: the action on degree-one forms.
  static std::shared_ptr<const GroupTable> enumerate(const std::vector<Matrix>& generators,
                                                     std::size_t cap = kDefaultCap);

  Scalar p() const { return p_; }
  std::size_t n() const { return n_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Matrix>& generators() const { return generators_; }
  std::size_t num_generators() const { return generators_.size(); }

  const Matrix& element(std::size_t i) const { return elements_[i]; }
  const Word& word(std::size_t i) const { return words_[i]; }
  std::size_t parent(std::size_t i) const { return parent_[i]; }
  std::size_t last_generator(std::size_t i) const { return last_gen_[i]; }
  /// Index of element(i) * generator(s).
  std::size_t times_generator(std::size_t i, std::size_t s) const { return mult_gen_[i][s]; }
  /// Generator s as an element index.
  std::size_t generator_index(std::size_t s) const { return gen_index_[s]; }

  std::optional<std::size_t> find(const Matrix& m) const;
  std::size_t multiply(std::size_t a, std::size_t b) const;
  std::size_t inverse(std::size_t a) const;
  std::size_t element_order(std::size_t a) const;
  std::size_t identity() const { return 0; }

 private:
  Scalar p_ = 2;
  std::size_t n_ = 0;
  std::vector<Matrix> generators_;
  std::vector<Matrix> elements_;
  std::vector<Word> words_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> last_gen_;
  std::vector<std::vector<std::size_t>> mult_gen_;
  std::vector<std::size_t> gen_index_;
  std::vector<std::size_t> inverse_;
  std::unordered_map<std::vector<Scalar>, std::size_t, MatrixHash> index_;
};

using GroupPtr = std::shared_ptr<const GroupTable>;

/// Subgroup stored as a membership bitset over the parent enumeration.
class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(GroupPtr parent, std::vector<bool> members);

  const GroupPtr& parent() const { return parent_; }
  std::size_t order() const { return order_; }
  bool contains(std::size_t g) const { return members_[g]; }
  const std::vector<bool>& members() const { return members_; }
  /// Member indices in parent BFS order.
  std::vector<std::size_t> elements() const;
  /// A small generating set, chosen greedily in BFS order.
  std::vector<std::size_t> generating_set() const;
  bool is_subgroup_of(const Subgroup& o) const;

  bool operator==(const Subgroup& o) const { return members_ == o.members_; }
  bool operator!=(const Subgroup& o) const { return !(*this == o); }

 private:
  GroupPtr parent_;
  std::vector<bool> members_;
  std::size_t order_ = 0;
};

/// A subgroup re-enumerated as a group in its own right, together with the
/// index of each of its elements in the parent table.
struct SubgroupTable {
  GroupPtr table;
  std::vector<std::size_t> to_parent;
  Subgroup subgroup;
};

Subgroup whole_group(const GroupPtr& g);
Subgroup trivial_subgroup(const GroupPtr& g);
Subgroup generated_subgroup(const GroupPtr& g, const std::vector<std::size_t>& gens);
/// Throws NotASubgroup unless closed, containing the identity, of order dividing |G|.
void check_subgroup(const Subgroup& h);

std::size_t p_part(std::size_t order, Scalar p);
bool is_p_group(const Subgroup& h, Scalar p);
bool is_p_element(const GroupTable& g, std::size_t x, Scalar p);

Subgroup sylow_subgroup(const GroupPtr& g, Scalar p);
std::vector<Subgroup> maximal_p_subgroups(const Subgroup& p_group);
std::vector<std::size_t> coset_reps(const GroupPtr& g, const Subgroup& h);
Subgroup normalizer(const GroupPtr& g, const Subgroup& h);
Subgroup conjugate(const Subgroup& h, std::size_t g);
/// Every p-subgroup of G, ordered by (order, first differing member).
std::vector<Subgroup> all_p_subgroups(const GroupPtr& g);
SubgroupTable subgroup_table(const Subgroup& h);

}  // namespace modinv
