#include "modinv/group.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace modinv {

std::shared_ptr<const GroupTable> GroupTable::enumerate(const std::vector<Matrix>& generators,
                                                        std::size_t cap) {
  if (generators.empty()) throw Error(ErrorCode::InvalidInput, "no generators supplied");
  auto t = std::make_shared<GroupTable>();
  t->p_ = generators.front().p();
  t->n_ = generators.front().rows();
  for (const auto& g : generators) {
    if (g.p() != t->p_) throw Error(ErrorCode::ModulusMismatch, "generators over different fields");
    if (!g.is_square() || g.rows() != t->n_)
      throw Error(ErrorCode::DimensionMismatch, "generators must be square of equal size");
    if (determinant(g) == 0) throw Error(ErrorCode::InvalidInput, "singular generator " + g.to_string());
  }
  t->generators_ = generators;
  auto insert = [&](Matrix m, std::size_t parent, std::size_t gen, Word w) {
    std::size_t idx = t->elements_.size();
    if (idx >= cap)
      throw Error(ErrorCode::GroupTooLarge, "group order exceeds cap " + std::to_string(cap));
    t->index_.emplace(m.data(), idx);
    t->elements_.push_back(std::move(m));
    t->words_.push_back(std::move(w));
    t->parent_.push_back(parent);
    t->last_gen_.push_back(gen);
    return idx;
  };
  insert(Matrix::identity(t->n_, t->p_), 0, 0, {});
  for (std::size_t i = 0; i < t->elements_.size(); ++i) {
    std::vector<std::size_t> row(generators.size());
    for (std::size_t s = 0; s < generators.size(); ++s) {
      Matrix m = t->elements_[i] * generators[s];
      auto it = t->index_.find(m.data());
      if (it != t->index_.end()) {
        row[s] = it->second;
      } else {
        Word w = t->words_[i];
        w.push_back(static_cast<std::uint16_t>(s));
        row[s] = insert(std::move(m), i, s, std::move(w));
      }
    }
    t->mult_gen_.push_back(std::move(row));
  }
  for (std::size_t s = 0; s < generators.size(); ++s) t->gen_index_.push_back(t->mult_gen_[0][s]);
  t->inverse_.resize(t->order());
  for (std::size_t i = 0; i < t->order(); ++i) {
    auto inv = modinv::inverse(t->elements_[i]);
    t->inverse_[i] = t->index_.at(inv->data());
  }
  return t;
}

std::optional<std::size_t> GroupTable::find(const Matrix& m) const {
  if (m.rows() != n_ || m.cols() != n_ || m.p() != p_) return std::nullopt;
  auto it = index_.find(m.data());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t GroupTable::multiply(std::size_t a, std::size_t b) const {
  return index_.at((elements_[a] * elements_[b]).data());
}

std::size_t GroupTable::inverse(std::size_t a) const { return inverse_[a]; }

std::size_t GroupTable::element_order(std::size_t a) const {
  std::size_t k = 1;
  std::size_t x = a;
  while (x != 0) {
    x = multiply(x, a);
    ++k;
  }
  return k;
}

Subgroup::Subgroup(GroupPtr parent, std::vector<bool> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
  order_ = static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

std::vector<std::size_t> Subgroup::elements() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> Subgroup::generating_set() const {
  std::vector<std::size_t> gens;
  Subgroup cur = trivial_subgroup(parent_);
  for (std::size_t x : elements()) {
    if (cur.contains(x)) continue;
    gens.push_back(x);
    cur = generated_subgroup(parent_, gens);
    if (cur.order() == order_) break;
  }
  return gens;
}

bool Subgroup::is_subgroup_of(const Subgroup& o) const {
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i] && !o.members_[i]) return false;
  return true;
}

Subgroup whole_group(const GroupPtr& g) { return Subgroup(g, std::vector<bool>(g->order(), true)); }

Subgroup trivial_subgroup(const GroupPtr& g) {
  std::vector<bool> m(g->order(), false);
  m[0] = true;
  return Subgroup(g, std::move(m));
}

Subgroup generated_subgroup(const GroupPtr& g, const std::vector<std::size_t>& gens) {
  std::vector<bool> m(g->order(), false);
  std::vector<std::size_t> queue{0};
  m[0] = true;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    for (std::size_t s : gens) {
      std::size_t y = g->multiply(queue[qi], s);
      if (!m[y]) {
        m[y] = true;
        queue.push_back(y);
      }
    }
  }
  return Subgroup(g, std::move(m));
}

void check_subgroup(const Subgroup& h) {
  const auto& g = h.parent();
  if (!g || h.members().size() != g->order())
    throw Error(ErrorCode::NotASubgroup, "membership set does not match the parent group");
  if (!h.contains(0)) throw Error(ErrorCode::NotASubgroup, "identity missing");
  auto el = h.elements();
  for (std::size_t a : el) {
    if (!h.contains(g->inverse(a))) throw Error(ErrorCode::NotASubgroup, "not closed under inverse");
    for (std::size_t b : el)
      if (!h.contains(g->multiply(a, b)))
        throw Error(ErrorCode::NotASubgroup, "not closed under multiplication");
  }
  if (g->order() % h.order() != 0) throw Error(ErrorCode::NotASubgroup, "order does not divide |G|");
}

std::size_t p_part(std::size_t order, Scalar p) {
  std::size_t r = 1;
  while (order % p == 0) {
    order /= p;
    r *= p;
  }
  return r;
}

bool is_p_group(const Subgroup& h, Scalar p) { return p_part(h.order(), p) == h.order(); }

bool is_p_element(const GroupTable& g, std::size_t x, Scalar p) {
  std::size_t o = g.element_order(x);
  return p_part(o, p) == o;
}

Subgroup sylow_subgroup(const GroupPtr& g, Scalar p) {
  const std::size_t target = p_part(g->order(), p);
  std::vector<std::size_t> p_elements;
  for (std::size_t x = 1; x < g->order(); ++x)
    if (is_p_element(*g, x, p)) p_elements.push_back(x);
  if (target == 1) return trivial_subgroup(g);
  // Start from a p-element of maximal order.
  std::stable_sort(p_elements.begin(), p_elements.end(), [&](std::size_t a, std::size_t b) {
    return g->element_order(a) > g->element_order(b);
  });

  std::function<std::optional<Subgroup>(const Subgroup&, std::vector<std::size_t>)> extend =
      [&](const Subgroup& h, std::vector<std::size_t> gens) -> std::optional<Subgroup> {
    if (h.order() == target) return h;
    Subgroup nh = normalizer(g, h);
    // Try normalizing p-elements first; they always give a p-group extension.
    std::vector<std::size_t> order;
    for (std::size_t x : p_elements)
      if (!h.contains(x) && nh.contains(x)) order.push_back(x);
    for (std::size_t x : p_elements)
      if (!h.contains(x) && !nh.contains(x)) order.push_back(x);
    for (std::size_t x : order) {
      auto ng = gens;
      ng.push_back(x);
      Subgroup k = generated_subgroup(g, ng);
      if (!is_p_group(k, p) || k.order() > target) continue;
      if (auto r = extend(k, ng)) return r;
    }
    return std::nullopt;
  };
  Subgroup start = generated_subgroup(g, {p_elements.front()});
  auto r = extend(start, {p_elements.front()});
  if (!r || r->order() != target)
    throw Error(ErrorCode::InternalError, "Sylow construction failed");
  return *r;
}

std::vector<Subgroup> maximal_p_subgroups(const Subgroup& pg) {
  const auto& g = pg.parent();
  const Scalar p = g->p();
  if (!is_p_group(pg, p)) throw Error(ErrorCode::InvalidInput, "not a p-group: order " + std::to_string(pg.order()));
  if (pg.order() == 1) return {};
  auto el = pg.elements();
  // Frattini subgroup: generated by commutators and p-th powers.
  std::vector<std::size_t> fgens;
  for (std::size_t a : el) {
    std::size_t pw = 0;
    for (Scalar k = 0; k < p; ++k) pw = g->multiply(pw, a);
    fgens.push_back(pw);
    for (std::size_t b : el) {
      std::size_t c = g->multiply(g->multiply(g->inverse(a), g->inverse(b)), g->multiply(a, b));
      fgens.push_back(c);
    }
  }
  std::sort(fgens.begin(), fgens.end());
  fgens.erase(std::unique(fgens.begin(), fgens.end()), fgens.end());
  Subgroup phi = generated_subgroup(g, fgens);
  // Lift a basis of the elementary abelian quotient.
  std::vector<std::size_t> basis;
  std::vector<std::size_t> cur = fgens;
  Subgroup span = phi;
  for (std::size_t x : el) {
    if (span.contains(x)) continue;
    basis.push_back(x);
    cur.push_back(x);
    span = generated_subgroup(g, cur);
  }
  const std::size_t r = basis.size();
  std::vector<std::vector<Scalar>> coord(g->order());
  std::vector<Scalar> c(r, 0);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < r; ++i) combos *= p;
  for (std::size_t idx = 0; idx < combos; ++idx) {
    std::size_t t = idx;
    std::size_t elem = 0;
    for (std::size_t i = 0; i < r; ++i) {
      c[i] = static_cast<Scalar>(t % p);
      t /= p;
      for (Scalar k = 0; k < c[i]; ++k) elem = g->multiply(elem, basis[i]);
    }
    for (std::size_t f : phi.elements()) coord[g->multiply(elem, f)] = c;
  }
  std::vector<Subgroup> out;
  for (std::size_t idx = 1; idx < combos; ++idx) {
    std::vector<Scalar> lam(r);
    std::size_t t = idx;
    for (std::size_t i = 0; i < r; ++i) {
      lam[i] = static_cast<Scalar>(t % p);
      t /= p;
    }
    // One functional per hyperplane: leading nonzero coefficient equal to 1.
    auto lead = std::find_if(lam.begin(), lam.end(), [](Scalar v) { return v != 0; });
    if (*lead != 1) continue;
    std::vector<bool> m(g->order(), false);
    for (std::size_t x : el) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < r; ++i) s += static_cast<std::uint64_t>(lam[i]) * coord[x][i];
      if (s % p == 0) m[x] = true;
    }
    Subgroup h(g, std::move(m));
    check_subgroup(h);
    if (h.order() * p != pg.order()) throw Error(ErrorCode::InternalError, "maximal subgroup index");
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<std::size_t> coset_reps(const GroupPtr& g, const Subgroup& h) {
  if (h.parent().get() != g.get()) throw Error(ErrorCode::NotASubgroup, "subgroup of a different group");
  std::vector<bool> covered(g->order(), false);
  std::vector<std::size_t> reps;
  auto hel = h.elements();
  for (std::size_t x = 0; x < g->order(); ++x) {
    if (covered[x]) continue;
    reps.push_back(x);
    for (std::size_t y : hel) covered[g->multiply(x, y)] = true;
  }
  return reps;
}

Subgroup conjugate(const Subgroup& h, std::size_t x) {
  const auto& g = h.parent();
  std::vector<bool> m(g->order(), false);
  std::size_t xi = g->inverse(x);
  for (std::size_t y : h.elements()) m[g->multiply(g->multiply(x, y), xi)] = true;
  return Subgroup(g, std::move(m));
}

Subgroup normalizer(const GroupPtr& g, const Subgroup& h) {
  std::vector<bool> m(g->order(), false);
  auto gens = h.generating_set();
  for (std::size_t x = 0; x < g->order(); ++x) {
    std::size_t xi = g->inverse(x);
    bool ok = true;
    for (std::size_t y : gens)
      if (!h.contains(g->multiply(g->multiply(x, y), xi))) {
        ok = false;
        break;
      }
    m[x] = ok;
  }
  return Subgroup(g, std::move(m));
}

std::vector<Subgroup> all_p_subgroups(const GroupPtr& g) {
  const Scalar p = g->p();
  Subgroup syl = sylow_subgroup(g, p);
  std::set<std::vector<bool>> seen;
  std::vector<Subgroup> inside;
  std::deque<Subgroup> queue{trivial_subgroup(g)};
  seen.insert(queue.front().members());
  while (!queue.empty()) {
    Subgroup h = queue.front();
    queue.pop_front();
    inside.push_back(h);
    auto gens = h.generating_set();
    for (std::size_t x : syl.elements()) {
      if (h.contains(x)) continue;
      auto ng = gens;
      ng.push_back(x);
      Subgroup k = generated_subgroup(g, ng);
      if (seen.insert(k.members()).second) queue.push_back(k);
    }
  }
  std::vector<Subgroup> all = inside;
  for (std::size_t x = 0; x < g->order(); ++x)
    for (const auto& h : inside) {
      Subgroup c = conjugate(h, x);
      if (seen.insert(c.members()).second) all.push_back(c);
    }
  std::sort(all.begin(), all.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements() < b.elements();
  });
  return all;
}

SubgroupTable subgroup_table(const Subgroup& h) {
  const auto& g = h.parent();
  std::vector<Matrix> gens;
  auto gi = h.generating_set();
  for (std::size_t x : gi) gens.push_back(g->element(x));
  if (gens.empty()) gens.push_back(Matrix::identity(g->n(), g->p()));
  SubgroupTable st;
  st.table = GroupTable::enumerate(gens, g->order() + 1);
  st.subgroup = h;
  for (std::size_t i = 0; i < st.table->order(); ++i) st.to_parent.push_back(*g->find(st.table->element(i)));
  return st;
}

}  // namespace modinv
