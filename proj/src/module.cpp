#include "modinv/module.hpp"

#include <utility>

namespace modinv {

namespace {

void require_same_group(const GModule& a, const GModule& b) {
  if (!a.same_group(b)) throw Error(ErrorCode::InvalidInput, "modules over different groups");
}

// Incremental echelon basis used when spinning up submodules.
class EchelonSpan {
 public:
  EchelonSpan(std::size_t dim, const PrimeField& f) : dim_(dim), f_(f) {}

  // Reduces v against the span; returns true (and stores it) if independent.
  bool insert(Vec v) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Scalar c = v[pivots_[r]];
      if (!c) continue;
      Scalar nc = f_.neg(c);
      const Vec& row = rows_[r];
      for (std::size_t j = 0; j < dim_; ++j)
        if (row[j]) v[j] = f_.add(v[j], f_.mul(nc, row[j]));
    }
    std::size_t piv = 0;
    while (piv < dim_ && v[piv] == 0) ++piv;
    if (piv == dim_) return false;
    Scalar iv = f_.inv(v[piv]);
    for (auto& x : v) x = f_.mul(x, iv);
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::size_t dim_;
  PrimeField f_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

struct SpinStep {
  std::size_t generator;  // index of the spinning vector this descends from
  std::size_t parent;     // basis index it was obtained from (self for roots)
  std::size_t via;        // generator applied to the parent
  bool root;
};

HomSpace hom_space_presented(const GModule& m, const GModule& n) {
  const Scalar p = m.p();
  const PrimeField f(p);
  const std::size_t dm = m.dim();
  const std::size_t dn = n.dim();
  const std::size_t ng = m.group()->num_generators();
  HomSpace out{m, n, {}};
  if (dm == 0 || dn == 0) return out;

  std::vector<Vec> bvec;
  std::vector<SpinStep> steps;
  std::vector<std::pair<std::size_t, std::size_t>> relations;  // (basis index, generator)
  std::size_t ngen = 0;
  EchelonSpan span(dm, f);
  for (std::size_t j = 0; j < dm && span.rank() < dm; ++j) {
    Vec e(dm, 0);
    e[j] = 1;
    if (!span.insert(e)) continue;
    std::size_t start = bvec.size();
    bvec.push_back(e);
    steps.push_back({ngen, start, 0, true});
    for (std::size_t k = start; k < bvec.size(); ++k) {
      for (std::size_t s = 0; s < ng; ++s) {
        Vec v = m.generator(s).apply(bvec[k]);
        if (span.insert(v)) {
          bvec.push_back(std::move(v));
          steps.push_back({ngen, k, s, false});
        } else {
          relations.emplace_back(k, s);
        }
      }
    }
    ++ngen;
  }
  Matrix bmat = Matrix::from_columns(bvec, dm, p);
  auto binv = inverse(bmat);
  if (!binv) throw Error(ErrorCode::InternalError, "spinning basis not invertible");

  // rho_N along each spinning word.
  std::vector<Matrix> rn(bvec.size());
  for (std::size_t k = 0; k < bvec.size(); ++k) {
    if (steps[k].root)
      rn[k] = Matrix::identity(dn, p);
    else
      rn[k] = n.generator(steps[k].via) * rn[steps[k].parent];
  }

  const std::size_t unknowns = ngen * dn;
  Matrix sys(relations.size() * dn, unknowns, p);
  for (std::size_t r = 0; r < relations.size(); ++r) {
    auto [k, s] = relations[r];
    Vec c = binv->apply(m.generator(s).apply(bvec[k]));
    std::vector<Matrix> blocks(ngen, Matrix(dn, dn, p));
    for (std::size_t l = 0; l < bvec.size(); ++l) {
      if (!c[l]) continue;
      blocks[steps[l].generator] = blocks[steps[l].generator] + rn[l].scaled(c[l]);
    }
    Matrix rhs = n.generator(s) * rn[k];
    blocks[steps[k].generator] = blocks[steps[k].generator] - rhs;
    for (std::size_t i = 0; i < ngen; ++i) sys.set_block(r * dn, i * dn, blocks[i]);
  }
  std::vector<Vec> ker;
  if (relations.empty()) {
    for (std::size_t i = 0; i < unknowns; ++i) {
      Vec e(unknowns, 0);
      e[i] = 1;
      ker.push_back(std::move(e));
    }
  } else {
    ker = nullspace(sys);
  }
  for (const auto& sol : ker) {
    Matrix fb(dn, bvec.size(), p);
    for (std::size_t k = 0; k < bvec.size(); ++k) {
      std::size_t g = steps[k].generator;
      Vec nv(sol.begin() + static_cast<std::ptrdiff_t>(g * dn),
             sol.begin() + static_cast<std::ptrdiff_t>((g + 1) * dn));
      Vec img = rn[k].apply(nv);
      for (std::size_t i = 0; i < dn; ++i) fb(i, k) = img[i];
    }
    out.basis.push_back(fb * *binv);
  }
  return out;
}

}  // namespace

GModule::GModule(GroupPtr group, std::vector<Matrix> generator_action, std::string label)
    : group_(std::move(group)), gens_(std::move(generator_action)), label_(std::move(label)) {
  if (!group_) throw Error(ErrorCode::InvalidInput, "module without group");
  if (gens_.size() != group_->num_generators())
    throw Error(ErrorCode::InvalidInput, "expected one matrix per group generator");
  dim_ = gens_.empty() ? 0 : gens_.front().rows();
  for (const auto& g : gens_) {
    if (g.p() != group_->p()) throw Error(ErrorCode::ModulusMismatch, "module matrix modulus");
    if (!g.is_square() || g.rows() != dim_)
      throw Error(ErrorCode::DimensionMismatch, "module matrices must be square of equal size");
  }
}

GModule GModule::trivial(const GroupPtr& g, std::size_t dim) {
  return GModule(g, std::vector<Matrix>(g->num_generators(), Matrix::identity(dim, g->p())),
                 dim == 1 ? "k" : "");
}

GModule GModule::forms(const GroupPtr& g) { return GModule(g, g->generators()); }

GModule GModule::regular(const GroupPtr& g) {
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < g->num_generators(); ++s) {
    Matrix m(g->order(), g->order(), g->p());
    std::size_t gs = g->generator_index(s);
    for (std::size_t h = 0; h < g->order(); ++h) m(g->multiply(gs, h), h) = 1;
    gens.push_back(std::move(m));
  }
  return GModule(g, std::move(gens));
}

Matrix GModule::act(std::size_t g) const {
  if (g >= group_->order()) throw Error(ErrorCode::InvalidInput, "element not in the module's group");
  Matrix r = Matrix::identity(dim_, p());
  for (auto s : group_->word(g)) r = r * gens_[s];
  return r;
}

std::vector<Matrix> GModule::all_actions() const {
  std::vector<Matrix> out(group_->order());
  out[0] = Matrix::identity(dim_, p());
  for (std::size_t i = 1; i < group_->order(); ++i)
    out[i] = out[group_->parent(i)] * gens_[group_->last_generator(i)];
  return out;
}

Matrix act(const GModule& m, const Matrix& element) {
  auto idx = m.group()->find(element);
  if (!idx) throw Error(ErrorCode::InvalidInput, "element " + element.to_string() + " not in group");
  return m.act(*idx);
}

Matrix act(const GModule& m, std::size_t element) { return m.act(element); }

GModule dual(const GModule& m) {
  std::vector<Matrix> gens;
  for (const auto& g : m.generator_action()) {
    auto inv = inverse(g);
    if (!inv) throw Error(ErrorCode::InvalidInput, "module generator not invertible");
    gens.push_back(inv->transpose());
  }
  return GModule(m.group(), std::move(gens));
}

GModule direct_sum(const GModule& a, const GModule& b) {
  require_same_group(a, b);
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < a.generator_action().size(); ++s)
    gens.push_back(direct_sum(a.generator(s), b.generator(s)));
  return GModule(a.group(), std::move(gens));
}

GModule tensor(const GModule& a, const GModule& b) {
  require_same_group(a, b);
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < a.generator_action().size(); ++s)
    gens.push_back(kronecker(a.generator(s), b.generator(s)));
  return GModule(a.group(), std::move(gens));
}

GModule restrict_to(const GModule& m, const SubgroupTable& h) {
  if (h.subgroup.parent().get() != m.group().get())
    throw Error(ErrorCode::NotASubgroup, "restriction to a subgroup of another group");
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < h.table->num_generators(); ++s)
    gens.push_back(m.act(h.to_parent[h.table->generator_index(s)]));
  return GModule(h.table, std::move(gens));
}

GModule induce(const GModule& m, const SubgroupTable& h) {
  if (m.group().get() != h.table.get())
    throw Error(ErrorCode::NotASubgroup, "induction from a module not over the subgroup table");
  const GroupPtr& g = h.subgroup.parent();
  auto reps = coset_reps(g, h.subgroup);
  const std::size_t idx = reps.size();
  const std::size_t d = m.dim();
  std::vector<std::size_t> coset_of(g->order());
  for (std::size_t i = 0; i < idx; ++i)
    for (std::size_t y : h.subgroup.elements()) coset_of[g->multiply(reps[i], y)] = i;
  auto acts = m.all_actions();
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < g->num_generators(); ++s) {
    Matrix big(idx * d, idx * d, g->p());
    std::size_t gs = g->generator_index(s);
    for (std::size_t i = 0; i < idx; ++i) {
      std::size_t x = g->multiply(gs, reps[i]);
      std::size_t j = coset_of[x];
      std::size_t hy = g->multiply(g->inverse(reps[j]), x);
      std::size_t local = *h.table->find(g->element(hy));
      big.set_block(j * d, i * d, acts[local]);
    }
    gens.push_back(std::move(big));
  }
  return GModule(g, std::move(gens));
}

GModule submodule(const GModule& m, const Matrix& basis) {
  CoordinateMap cm(basis);
  std::vector<Matrix> gens;
  for (const auto& a : m.generator_action()) {
    Matrix img = a * basis;
    Matrix x(basis.cols(), basis.cols(), m.p());
    for (std::size_t j = 0; j < basis.cols(); ++j) {
      auto c = cm.try_coordinates(img.column(j));
      if (!c) throw Error(ErrorCode::NotEquivariant, "subspace is not G-stable");
      for (std::size_t i = 0; i < basis.cols(); ++i) x(i, j) = (*c)[i];
    }
    gens.push_back(std::move(x));
  }
  return GModule(m.group(), std::move(gens));
}

GModule quotient(const GModule& m, const Matrix& sub, Matrix* projection) {
  const std::size_t n = m.dim();
  Matrix c = sub.cols() ? column_space(sub) : Matrix(n, 0, m.p());
  auto r = rref(hstack(c, Matrix::identity(n, m.p())));
  std::vector<std::size_t> extra;
  for (auto piv : r.pivots)
    if (piv >= c.cols()) extra.push_back(piv - c.cols());
  Matrix ext(n, extra.size(), m.p());
  for (std::size_t j = 0; j < extra.size(); ++j) ext(extra[j], j) = 1;
  Matrix full = hstack(c, ext);
  auto inv = inverse(full);
  if (!inv) throw Error(ErrorCode::InternalError, "quotient complement");
  Matrix proj = inv->block(c.cols(), 0, extra.size(), n);
  for (const auto& a : m.generator_action()) {
    if (!span_contains(c, a * c)) throw Error(ErrorCode::NotEquivariant, "quotient by a non-submodule");
  }
  std::vector<Matrix> gens;
  for (const auto& a : m.generator_action()) gens.push_back(proj * a * ext);
  if (projection) *projection = proj;
  return GModule(m.group(), std::move(gens));
}

GModule conjugate_twist(const GModule& u, const SubgroupTable& h, std::size_t x) {
  const GroupPtr& g = h.subgroup.parent();
  std::size_t xi = g->inverse(x);
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < h.table->num_generators(); ++s) {
    std::size_t y = h.to_parent[h.table->generator_index(s)];
    std::size_t z = g->multiply(g->multiply(xi, y), x);
    auto local = h.table->find(g->element(z));
    if (!local) throw Error(ErrorCode::InvalidInput, "twisting element does not normalize the subgroup");
    gens.push_back(u.act(*local));
  }
  return GModule(h.table, std::move(gens));
}

bool is_equivariant(const Matrix& f, const GModule& m, const GModule& n) {
  if (f.rows() != n.dim() || f.cols() != m.dim()) return false;
  for (std::size_t s = 0; s < m.generator_action().size(); ++s)
    if (f * m.generator(s) != n.generator(s) * f) return false;
  return true;
}

HomSpace hom_space(const GModule& source, const GModule& target) {
  require_same_group(source, target);
  HomSpace out{source, target, {}};
  if (source.dim() == 0 || target.dim() == 0) return out;
  if (source.dim() > target.dim()) {
    // Hom(M, N) = Hom(N*, M*)^T; present the smaller module.
    HomSpace d = hom_space_presented(dual(target), dual(source));
    for (const auto& b : d.basis) out.basis.push_back(b.transpose());
  } else {
    out.basis = hom_space_presented(source, target).basis;
  }
  for (const auto& b : out.basis)
    if (!is_equivariant(b, source, target))
      throw Error(ErrorCode::InternalError, "hom basis element failed equivariance");
  return out;
}

HomSpace hom_space_direct(const GModule& source, const GModule& target) {
  require_same_group(source, target);
  const std::size_t dm = source.dim(), dn = target.dim();
  const Scalar p = source.p();
  const PrimeField f(p);
  const std::size_t ng = source.generator_action().size();
  HomSpace out{source, target, {}};
  if (dm == 0 || dn == 0) return out;
  Matrix sys(ng * dn * dm, dn * dm, p);
  for (std::size_t s = 0; s < ng; ++s) {
    const Matrix& b = source.generator(s);
    const Matrix& a = target.generator(s);
    for (std::size_t i = 0; i < dn; ++i)
      for (std::size_t j = 0; j < dm; ++j) {
        std::size_t row = s * dn * dm + i * dm + j;
        for (std::size_t k = 0; k < dm; ++k)
          sys(row, i * dm + k) = f.add(sys(row, i * dm + k), b(k, j));
        for (std::size_t k = 0; k < dn; ++k)
          sys(row, k * dm + j) = f.sub(sys(row, k * dm + j), a(i, k));
      }
  }
  for (const auto& v : nullspace(sys)) out.basis.push_back(unvectorize(v, dn, dm, p));
  return out;
}

std::vector<Vec> invariants(const GModule& m) {
  const std::size_t d = m.dim();
  if (d == 0) return {};
  const auto& gens = m.generator_action();
  Matrix sys(gens.size() * d, d, m.p());
  Matrix id = Matrix::identity(d, m.p());
  for (std::size_t s = 0; s < gens.size(); ++s) sys.set_block(s * d, 0, gens[s] - id);
  return nullspace(sys);
}

Matrix transfer_with(const Matrix& f, const std::vector<Matrix>& act_m_inv,
                     const std::vector<Matrix>& act_n, const std::vector<std::size_t>& reps) {
  Matrix acc(f.rows(), f.cols(), f.p());
  for (std::size_t t : reps) acc = acc + act_n[t] * f * act_m_inv[t];
  return acc;
}

Matrix transfer(const Matrix& f, const GModule& m, const GModule& n, const Subgroup& h) {
  require_same_group(m, n);
  const GroupPtr& g = m.group();
  if (h.parent().get() != g.get()) throw Error(ErrorCode::NotASubgroup, "transfer subgroup");
  auto am = m.all_actions();
  auto an = n.all_actions();
  for (std::size_t y : h.generating_set())
    if (f * am[y] != an[y] * f)
      throw Error(ErrorCode::NotEquivariant, "transfer input is not H-equivariant");
  std::vector<Matrix> aminv(g->order());
  for (std::size_t x = 0; x < g->order(); ++x) aminv[x] = am[g->inverse(x)];
  Matrix r = transfer_with(f, aminv, an, coset_reps(g, h));
  if (!is_equivariant(r, m, n)) throw Error(ErrorCode::InternalError, "transfer result not G-equivariant");
  return r;
}

std::vector<Matrix> transfer_image(const GModule& m, const GModule& n, const Subgroup& h) {
  require_same_group(m, n);
  const GroupPtr& g = m.group();
  auto st = subgroup_table(h);
  HomSpace hs = hom_space(restrict_to(m, st), restrict_to(n, st));
  auto am = m.all_actions();
  auto an = n.all_actions();
  std::vector<Matrix> aminv(g->order());
  for (std::size_t x = 0; x < g->order(); ++x) aminv[x] = am[g->inverse(x)];
  auto reps = coset_reps(g, h);
  std::vector<Matrix> out;
  for (const auto& b : hs.basis) out.push_back(transfer_with(b, aminv, an, reps));
  return out;
}

Vec vectorize(const Matrix& m) { return m.data(); }

Matrix unvectorize(std::span<const Scalar> v, std::size_t rows, std::size_t cols, Scalar p) {
  Matrix m(rows, cols, p);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = v[i * cols + j];
  return m;
}

}  // namespace modinv
