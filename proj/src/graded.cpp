#include "modinv/graded.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "modinv/parallel.hpp"

namespace modinv {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

void compositions(std::size_t d, std::size_t parts, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(d);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t a = d + 1; a-- > 0;) {
    cur.push_back(a);
    compositions(d - a, parts, cur, out);
    cur.pop_back();
  }
}

bool is_trivial_rep(const GModule& m) {
  if (m.dim() != 1) return false;
  for (const auto& g : m.generator_action())
    if (g(0, 0) != 1) return false;
  return true;
}

Matrix kron_all(const std::vector<const Matrix*>& ms, Scalar p) {
  Matrix out = Matrix::identity(1, p);
  for (const Matrix* m : ms) out = kronecker(out, *m);
  return out;
}

std::size_t span_rank(const std::vector<Matrix>& mats, Scalar p) {
  if (mats.empty()) return 0;
  const std::size_t len = mats.front().data().size();
  if (len == 0) return 0;
  Matrix v(mats.size(), len, p);
  for (std::size_t i = 0; i < mats.size(); ++i) std::copy(mats[i].data().begin(), mats[i].data().end(), v.row(i).begin());
  return rank(v);
}

}  // namespace

std::vector<Block> forms_blocks(const GroupPtr& g) {
  const std::size_t n = g->n();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& a : g->generators())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (a(i, j) != 0) parent[find_root(parent, i)] = find_root(parent, j);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find_root(parent, i)].push_back(i);
  std::vector<Block> out;
  for (auto& [root, vars] : groups) {
    std::vector<Matrix> gens;
    for (const auto& a : g->generators()) gens.push_back(a.select_rows(vars).select_columns(vars));
    out.push_back({vars, GModule(g, std::move(gens))});
  }
  std::sort(out.begin(), out.end(), [](const Block& a, const Block& b) { return a.vars.front() < b.vars.front(); });
  return out;
}

GradedEngine::GradedEngine(GroupPtr g, GradedOptions opt)
    : group_(std::move(g)), opt_(opt), registry_(group_, opt.seed), blocks_(forms_blocks(group_)) {
  block_sym_.resize(blocks_.size());
  block_parts_.resize(blocks_.size());
}

const DegreeData& GradedEngine::degree(std::size_t d) const {
  if (d >= degrees_.size()) throw Error(ErrorCode::InvalidInput, "degree " + std::to_string(d) + " not computed");
  return degrees_[d];
}

const MonomialBasis& GradedEngine::basis(std::size_t d) const {
  if (d >= bases_.size()) throw Error(ErrorCode::InvalidInput, "degree " + std::to_string(d) + " not computed");
  return *bases_[d];
}

GModule GradedEngine::component(std::size_t d) const { return sym_component(group_, d); }

GModule GradedEngine::piece_module(const Piece& piece) const {
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < group_->num_generators(); ++s) {
    std::vector<const Matrix*> fs;
    for (std::size_t b = 0; b < blocks_.size(); ++b) fs.push_back(&block_sym_[b][piece.multidegree[b]].generator(s));
    gens.push_back(kron_all(fs, group_->p()));
  }
  return GModule(group_, std::move(gens));
}

void GradedEngine::extend(std::size_t D) {
  while (degrees_.size() <= D) compute_degree(degrees_.size());
}

const std::vector<Summand>& GradedEngine::tensor_parts(const std::vector<std::size_t>& classes) const {
  auto it = tensor_cache_.find(classes);
  if (it == tensor_cache_.end()) throw Error(ErrorCode::InternalError, "tensor decomposition missing");
  return it->second;
}

void GradedEngine::compute_degree(std::size_t d) {
  const Scalar p = group_->p();
  const std::size_t n = nvars();
  const std::size_t nb = blocks_.size();
  const std::size_t expect = binomial(d + n - 1, n - 1);
  if (expect > opt_.dim_cap)
    throw Error(ErrorCode::CapExceeded, "dim S_" + std::to_string(d) + " = " + std::to_string(expect) + " exceeds cap");
  bases_.push_back(std::make_unique<MonomialBasis>(n, d));
  DecomposeOptions dopt;
  dopt.seed = opt_.seed;
  dopt.dim_cap = opt_.dim_cap;

  // Symmetric powers of each block.
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<Matrix> gens;
    for (const auto& a : blocks_[b].forms.generator_action()) gens.push_back(sym_power(a, d));
    block_sym_[b].push_back(GModule(group_, std::move(gens)));
  }
  std::vector<PartialDecomposition> bparts(nb);
  parallel_for(nb, opt_.threads, [&](std::size_t b) { bparts[b] = decompose_partial(block_sym_[b][d], registry_, dopt); });
  auto bsum = commit(std::move(bparts), registry_, d);
  for (std::size_t b = 0; b < nb; ++b) block_parts_[b].push_back(std::move(bsum[b]));

  std::vector<std::vector<std::size_t>> mdegs;
  std::vector<std::size_t> cur;
  compositions(d, nb, cur, mdegs);

  auto reduced = [&](const std::vector<std::size_t>& classes) {
    std::vector<std::size_t> r;
    for (std::size_t c : classes)
      if (!is_trivial_rep(registry_[c].data.rep)) r.push_back(c);
    return r;
  };
  auto for_each_tuple = [&](const std::vector<std::size_t>& md, auto&& fn) {
    std::vector<std::size_t> idx(nb, 0);
    for (std::size_t b = 0; b < nb; ++b)
      if (block_parts_[b][md[b]].empty()) return;
    for (;;) {
      fn(idx);
      std::size_t b = nb;
      while (b-- > 0) {
        if (++idx[b] < block_parts_[b][md[b]].size()) break;
        idx[b] = 0;
      }
      if (b == static_cast<std::size_t>(-1)) return;
    }
  };
  auto tuple_classes = [&](const std::vector<std::size_t>& md, const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> cls(nb);
    for (std::size_t b = 0; b < nb; ++b) cls[b] = block_parts_[b][md[b]][idx[b]].cls;
    return cls;
  };

  // New tensor products of indecomposables, decomposed against the current
  // registry in parallel and committed in sorted order.
  std::set<std::vector<std::size_t>> todo;
  for (const auto& md : mdegs)
    for_each_tuple(md, [&](const std::vector<std::size_t>& idx) {
      auto r = reduced(tuple_classes(md, idx));
      if (r.size() >= 2 && !tensor_cache_.count(r)) todo.insert(r);
    });
  std::vector<std::vector<std::size_t>> jobs(todo.begin(), todo.end());
  std::vector<PartialDecomposition> tparts(jobs.size());
  parallel_for(jobs.size(), opt_.threads, [&](std::size_t i) {
    GModule t = registry_[jobs[i][0]].data.rep;
    for (std::size_t k = 1; k < jobs[i].size(); ++k) t = tensor(t, registry_[jobs[i][k]].data.rep);
    tparts[i] = decompose_partial(t, registry_, dopt);
  });
  auto tsum = commit(std::move(tparts), registry_, d);
  for (std::size_t i = 0; i < jobs.size(); ++i) tensor_cache_.emplace(jobs[i], std::move(tsum[i]));

  DegreeData dd;
  dd.degree = d;
  dd.dim = expect;
  dd.pieces.resize(mdegs.size());
  std::vector<std::map<std::size_t, std::size_t>> pmult(mdegs.size());
  const MonomialBasis& full = *bases_[d];
  parallel_for(mdegs.size(), opt_.threads, [&](std::size_t pi) {
    const auto& md = mdegs[pi];
    Piece& piece = dd.pieces[pi];
    piece.multidegree = md;
    std::vector<MonomialBasis> bb;
    std::size_t pdim = 1;
    for (std::size_t b = 0; b < nb; ++b) {
      bb.emplace_back(blocks_[b].vars.size(), md[b]);
      pdim *= bb.back().size();
    }
    piece.index.resize(pdim);
    std::vector<std::size_t> digit(nb, 0);
    for (std::size_t c = 0; c < pdim; ++c) {
      Exponent e(n, 0);
      for (std::size_t b = 0; b < nb; ++b) {
        const Exponent& be = bb[b][digit[b]];
        for (std::size_t v = 0; v < be.size(); ++v) e[blocks_[b].vars[v]] = be[v];
      }
      piece.index[c] = full.index(e);
      for (std::size_t b = nb; b-- > 0;) {
        if (++digit[b] < bb[b].size()) break;
        digit[b] = 0;
      }
    }
    for_each_tuple(md, [&](const std::vector<std::size_t>& idx) {
      auto cls = tuple_classes(md, idx);
      auto r = reduced(cls);
      std::vector<Summand> single;
      const std::vector<Summand>* parts = nullptr;
      if (r.size() >= 2) {
        parts = &tensor_parts(r);
      } else {
        std::size_t c = r.empty() ? cls[0] : r[0];
        std::size_t dim = registry_[c].data.rep.dim();
        single.push_back({c, Matrix::identity(dim, p), Matrix::identity(dim, p)});
        parts = &single;
      }
      for (const auto& s : *parts) ++pmult[pi][s.cls];
      if (!opt_.keep_summands) return;
      std::vector<const Matrix*> es, rs;
      for (std::size_t b = 0; b < nb; ++b) {
        es.push_back(&block_parts_[b][md[b]][idx[b]].embed);
        rs.push_back(&block_parts_[b][md[b]][idx[b]].retract);
      }
      Matrix ke = kron_all(es, p), kr = kron_all(rs, p);
      for (const auto& s : *parts) piece.summands.push_back({s.cls, ke * s.embed, s.retract * kr});
    });
  });
  std::size_t total = 0;
  for (const auto& pm : pmult)
    for (auto [c, k] : pm) {
      dd.multiplicity[c] += k;
      total += k * registry_[c].data.rep.dim();
    }
  if (total != expect)
    throw Error(ErrorCode::InternalError, "dimension bookkeeping failed in degree " + std::to_string(d));
  degrees_.push_back(std::move(dd));
}

Matrix GradedEngine::full_embed(std::size_t d, std::size_t piece, std::size_t summand) const {
  const Piece& pc = degree(d).pieces.at(piece);
  const Summand& s = pc.summands.at(summand);
  Matrix out(basis(d).size(), s.embed.cols(), group_->p());
  for (std::size_t i = 0; i < s.embed.rows(); ++i)
    for (std::size_t j = 0; j < s.embed.cols(); ++j) out(pc.index[i], j) = s.embed(i, j);
  return out;
}

Matrix GradedEngine::full_retract(std::size_t d, std::size_t piece, std::size_t summand) const {
  const Piece& pc = degree(d).pieces.at(piece);
  const Summand& s = pc.summands.at(summand);
  Matrix out(s.retract.rows(), basis(d).size(), group_->p());
  for (std::size_t i = 0; i < s.retract.rows(); ++i)
    for (std::size_t j = 0; j < s.retract.cols(); ++j) out(i, pc.index[j]) = s.retract(i, j);
  return out;
}

std::size_t GradedEngine::multiplicity(std::size_t d, std::size_t cls) const {
  const auto& m = degree(d).multiplicity;
  auto it = m.find(cls);
  return it == m.end() ? 0 : it->second;
}

GreenSeries green_series(GradedEngine& e, std::size_t D) {
  e.extend(D);
  GreenSeries gs;
  gs.max_degree = D;
  const auto& reg = e.registry();
  for (std::size_t i = 0; i < reg.size(); ++i) {
    gs.labels.push_back(reg[i].label);
    gs.class_dims.push_back(reg[i].data.rep.dim());
  }
  for (std::size_t d = 0; d <= D; ++d) {
    std::map<std::string, std::size_t> row;
    for (auto [c, k] : e.degree(d).multiplicity) row[reg[c].label] = k;
    gs.rows.push_back(std::move(row));
    gs.component_dims.push_back(e.degree(d).dim);
  }
  return gs;
}

std::vector<std::size_t> class_series(const GradedEngine& e, std::size_t cls, std::size_t D) {
  std::vector<std::size_t> out;
  const std::size_t s = e.registry()[cls].data.s;
  for (std::size_t d = 0; d <= D; ++d) out.push_back(e.multiplicity(d, cls) * s);
  return out;
}

std::vector<std::size_t> hom_oplus_dims(GradedEngine& e, std::size_t cls, std::size_t D) {
  e.extend(D);
  const ClassData& c = e.registry()[cls].data;
  auto a = class_series(e, cls, D);
  for (std::size_t d = 0; d <= D; ++d) {
    const auto& pieces = e.degree(d).pieces;
    std::vector<std::size_t> per(pieces.size());
    parallel_for(pieces.size(), e.options().threads,
                 [&](std::size_t i) { per[i] = multiplicity(e.piece_module(pieces[i]), c) * c.s; });
    std::size_t b = std::accumulate(per.begin(), per.end(), std::size_t{0});
    if (a[d] != b)
      throw Error(ErrorCode::InternalError, "Hom-oplus methods disagree in degree " + std::to_string(d) + ": " +
                                                std::to_string(a[d]) + " vs " + std::to_string(b));
  }
  return a;
}

std::vector<std::size_t> hom_dims(GradedEngine& e, const GModule& m, std::size_t D) {
  e.extend(D);
  std::map<std::size_t, std::size_t> per_class;
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d <= D; ++d) {
    std::size_t t = 0;
    for (auto [c, k] : e.degree(d).multiplicity) {
      auto it = per_class.find(c);
      if (it == per_class.end()) it = per_class.emplace(c, hom_space(m, e.registry()[c].data.rep).dim()).first;
      t += k * it->second;
    }
    out.push_back(t);
  }
  return out;
}

std::string SubgroupClass::tag() const {
  switch (kind) {
    case Kind::TrivialOnly: return "trivial-only";
    case Kind::NonSylow: return "all-proper-p";
    case Kind::AllP: return "all-p";
    case Kind::Custom: return "custom";
  }
  return "custom";
}

namespace {

bool contained_in_conjugate(const Subgroup& h, const Subgroup& k) {
  if (h.order() > k.order() || k.order() % h.order() != 0) return false;
  const auto& g = k.parent();
  for (std::size_t x = 0; x < g->order(); ++x)
    if (h.is_subgroup_of(conjugate(k, x))) return true;
  return false;
}

}  // namespace

std::vector<Subgroup> maximal_members(const GroupPtr& g, const SubgroupClass& x) {
  const Scalar p = g->p();
  switch (x.kind) {
    case SubgroupClass::Kind::TrivialOnly: return {trivial_subgroup(g)};
    case SubgroupClass::Kind::AllP: return {sylow_subgroup(g, p)};
    case SubgroupClass::Kind::NonSylow: return maximal_p_subgroups(sylow_subgroup(g, p));
    case SubgroupClass::Kind::Custom: break;
  }
  for (const auto& h : x.custom) {
    if (h.parent().get() != g.get()) throw Error(ErrorCode::NotASubgroup, "subgroup of a different group");
    if (!is_p_group(h, p)) throw Error(ErrorCode::NotPGroup, "subgroup class member is not a p-subgroup");
  }
  std::vector<Subgroup> out;
  for (std::size_t i = 0; i < x.custom.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < x.custom.size() && !redundant; ++j) {
      if (i == j || !contained_in_conjugate(x.custom[i], x.custom[j])) continue;
      // Equal-order conjugates: keep the first one.
      redundant = x.custom[j].order() > x.custom[i].order() || j < i;
    }
    if (!redundant) out.push_back(x.custom[i]);
  }
  return out;
}

std::vector<Subgroup> closure(const GroupPtr& g, const SubgroupClass& x) {
  auto mem = maximal_members(g, x);
  std::vector<Subgroup> out;
  for (const auto& h : all_p_subgroups(g))
    for (const auto& k : mem)
      if (contained_in_conjugate(h, k)) {
        out.push_back(h);
        break;
      }
  return out;
}

std::size_t hom_quotient_dim(const GModule& m, const GModule& u, const std::vector<Subgroup>& x) {
  std::size_t hom = hom_space(m, u).dim();
  if (hom == 0) return 0;
  std::vector<Matrix> img;
  for (const auto& h : x) {
    auto t = transfer_image(m, u, h);
    img.insert(img.end(), t.begin(), t.end());
  }
  return hom - span_rank(img, m.p());
}

std::vector<std::size_t> hom_quotient_dims(GradedEngine& e, const GModule& m, const SubgroupClass& x, std::size_t D) {
  e.extend(D);
  auto xs = maximal_members(e.group(), x);
  std::map<std::size_t, std::size_t> per_class;
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d <= D; ++d) {
    std::size_t t = 0;
    for (auto [c, k] : e.degree(d).multiplicity) {
      auto it = per_class.find(c);
      if (it == per_class.end()) it = per_class.emplace(c, hom_quotient_dim(m, e.registry()[c].data.rep, xs)).first;
      t += k * it->second;
    }
    out.push_back(t);
  }
  return out;
}

std::vector<std::size_t> hom_quotient_dims_direct(const GroupPtr& g, const GModule& m, const SubgroupClass& x,
                                                  std::size_t D) {
  auto xs = maximal_members(g, x);
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d <= D; ++d) out.push_back(hom_quotient_dim(m, sym_component(g, d), xs));
  return out;
}

Matrix transfer_ideal(const GModule& sd, const std::vector<Subgroup>& x) {
  const Scalar p = sd.p();
  Matrix cols(sd.dim(), 0, p);
  GModule k = GModule::trivial(sd.group());
  for (const auto& h : x)
    for (const auto& t : transfer_image(k, sd, h)) cols = hstack(cols, t);
  if (cols.cols() == 0) return cols;
  return column_space(cols);
}

std::vector<std::size_t> transfer_ideal_dims(GradedEngine& e, const SubgroupClass& x, std::size_t D) {
  e.extend(D);
  auto xs = maximal_members(e.group(), x);
  std::map<std::size_t, std::size_t> per_class;
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d <= D; ++d) {
    std::size_t t = 0;
    for (auto [c, k] : e.degree(d).multiplicity) {
      auto it = per_class.find(c);
      if (it == per_class.end()) it = per_class.emplace(c, transfer_ideal(e.registry()[c].data.rep, xs).cols()).first;
      t += k * it->second;
    }
    out.push_back(t);
  }
  return out;
}

Matrix fixed_ideal(const GroupPtr& g, const std::vector<Subgroup>& y, std::size_t d) {
  const Scalar p = g->p();
  const std::size_t n = g->n();
  MonomialBasis to(n, d);
  if (y.empty()) return Matrix::identity(to.size(), p);
  Matrix acc;
  bool first = true;
  for (const auto& h : y) {
    // The ideal generated by (h - 1)s is generated by the (h - 1)x_j for h
    // running over generators of H: (h - 1)(ab) = (h - 1)a * hb + a * (h - 1)b.
    Matrix cols(to.size(), 0, p);
    if (d > 0) {
      MonomialBasis from(n, d - 1);
      MonomialBasis one(n, 1);
      for (std::size_t x : h.generating_set()) {
        Matrix a = g->element(x) - Matrix::identity(n, p);
        for (std::size_t j = 0; j < n; ++j) {
          Poly w(n, p);
          for (std::size_t i = 0; i < n; ++i)
            if (a(i, j)) w.add_term(one[i], a(i, j));
          if (w.is_zero()) continue;
          cols = hstack(cols, multiplication_matrix(w, from, to));
        }
      }
    }
    Matrix ih = cols.cols() ? column_space(cols) : cols;
    if (first) {
      acc = ih;
      first = false;
    } else {
      acc = (acc.cols() && ih.cols()) ? intersect_spaces(acc, ih) : Matrix(to.size(), 0, p);
    }
  }
  return acc;
}

std::vector<std::size_t> fixed_ideal_dims(const GroupPtr& g, const std::vector<Subgroup>& y, std::size_t D) {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d <= D; ++d) out.push_back(fixed_ideal(g, y, d).cols());
  return out;
}

Vec multiply_coords(const Poly& f, const MonomialBasis& from, std::span<const Scalar> v, const MonomialBasis& to) {
  const PrimeField fld(f.p());
  Vec out(to.size(), 0);
  Exponent e(from.n());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    const Exponent& a = from[i];
    for (const auto& [t, c] : f.terms()) {
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = static_cast<std::uint16_t>(a[k] + t[k]);
      std::size_t j = to.index(e);
      if (j == to.size()) throw Error(ErrorCode::DimensionMismatch, "product leaves the target degree");
      out[j] = fld.add(out[j], fld.mul(c, v[i]));
    }
  }
  return out;
}

namespace {

struct TrivialSummands {
  std::vector<Vec> gens;     // S_d coordinates
  std::vector<Vec> retracts;  // rows in S_d coordinates
};

TrivialSummands trivial_summands(const GradedEngine& e, std::size_t d, std::size_t kcls) {
  TrivialSummands t;
  const auto& dd = e.degree(d);
  for (std::size_t pi = 0; pi < dd.pieces.size(); ++pi)
    for (std::size_t si = 0; si < dd.pieces[pi].summands.size(); ++si) {
      if (dd.pieces[pi].summands[si].cls != kcls) continue;
      t.gens.push_back(e.full_embed(d, pi, si).column(0));
      auto r = e.full_retract(d, pi, si);
      t.retracts.emplace_back(r.row(0).begin(), r.row(0).end());
    }
  return t;
}

Vec dot_rows(const std::vector<Vec>& rows, const Vec& v, const PrimeField& f) {
  Vec out(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] && rows[i][j]) acc = (acc + static_cast<std::uint64_t>(rows[i][j]) * v[j]) % f.p();
    out[i] = static_cast<Scalar>(acc);
  }
  return out;
}

void require_summands(const GradedEngine& e) {
  if (!e.options().keep_summands) throw Error(ErrorCode::InvalidInput, "engine does not keep summand data");
}

}  // namespace

Matrix nonsplit_invariants(GradedEngine& e, std::size_t d) {
  require_summands(e);
  e.extend(d);
  const Scalar p = e.group()->p();
  auto kc = e.registry().find(GModule::trivial(e.group()));
  if (!kc) throw Error(ErrorCode::InternalError, "trivial class missing");
  auto ts = trivial_summands(e, d, *kc);
  Matrix r = Matrix::from_columns(invariants(e.component(d)), e.basis(d).size(), p);
  if (ts.retracts.empty()) return r;
  Matrix pr(ts.retracts.size(), r.rows(), p);
  for (std::size_t i = 0; i < ts.retracts.size(); ++i)
    for (std::size_t j = 0; j < r.rows(); ++j) pr(i, j) = ts.retracts[i][j];
  auto ker = nullspace(pr * r);
  if (ker.empty()) return Matrix(r.rows(), 0, p);
  return r * Matrix::from_columns(ker, r.cols(), p);
}

SummandAlgebra invariant_summand_algebra(GradedEngine& e, std::size_t D) {
  require_summands(e);
  e.extend(D);
  const Scalar p = e.group()->p();
  const PrimeField fld(p);
  auto kc = e.registry().find(GModule::trivial(e.group()));
  if (!kc) throw Error(ErrorCode::InternalError, "trivial class missing");
  SummandAlgebra alg;
  alg.max_degree = D;
  std::vector<TrivialSummands> ts;
  for (std::size_t d = 0; d <= D; ++d) ts.push_back(trivial_summands(e, d, *kc));
  // Normalise the degree-zero generator to the constant 1.
  if (ts[0].gens.size() != 1) throw Error(ErrorCode::InternalError, "S_0 is not one trivial summand");
  Scalar c0 = ts[0].gens[0][0];
  ts[0].gens[0][0] = 1;
  ts[0].retracts[0][0] = fld.mul(ts[0].retracts[0][0], c0);
  std::vector<std::vector<Poly>> polys(D + 1);
  for (std::size_t d = 0; d <= D; ++d) {
    alg.dims.push_back(ts[d].gens.size());
    alg.generators.push_back(ts[d].gens);
    for (const auto& g : ts[d].gens) polys[d].push_back(Poly::from_coords(e.basis(d), g, p));
  }
  for (std::size_t a = 0; a <= D; ++a)
    for (std::size_t b = 0; a + b <= D; ++b) {
      auto& tab = alg.product[{a, b}];
      tab.assign(alg.dims[a], std::vector<Vec>(alg.dims[b]));
      for (std::size_t i = 0; i < alg.dims[a]; ++i)
        for (std::size_t j = 0; j < alg.dims[b]; ++j) {
          Vec prod = multiply_coords(polys[a][i], e.basis(b), ts[b].gens[j], e.basis(a + b));
          tab[i][j] = dot_rows(ts[a + b].retracts, prod, fld);
        }
    }
  // Unit, commutativity and associativity on the computed range.
  for (std::size_t b = 0; b <= D; ++b)
    for (std::size_t j = 0; j < alg.dims[b]; ++j) {
      Vec ej(alg.dims[b], 0);
      ej[j] = 1;
      if (alg.product[{0, b}][0][j] != ej) throw Error(ErrorCode::InternalError, "degree-zero generator is not a unit");
    }
  for (std::size_t a = 0; a <= D; ++a)
    for (std::size_t b = 0; a + b <= D; ++b)
      for (std::size_t i = 0; i < alg.dims[a]; ++i)
        for (std::size_t j = 0; j < alg.dims[b]; ++j)
          if (alg.product[{a, b}][i][j] != alg.product[{b, a}][j][i])
            throw Error(ErrorCode::InternalError, "summand algebra is not commutative");
  auto times = [&](std::size_t a, const Vec& x, std::size_t b, std::size_t j) {
    Vec out(alg.dims[a + b], 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!x[i]) continue;
      const Vec& r = alg.product[{a, b}][i][j];
      for (std::size_t l = 0; l < out.size(); ++l) out[l] = fld.add(out[l], fld.mul(x[i], r[l]));
    }
    return out;
  };
  for (std::size_t a = 1; a <= D; ++a)
    for (std::size_t b = 1; a + b <= D; ++b)
      for (std::size_t c = 1; a + b + c <= D; ++c)
        for (std::size_t i = 0; i < alg.dims[a]; ++i)
          for (std::size_t j = 0; j < alg.dims[b]; ++j)
            for (std::size_t k = 0; k < alg.dims[c]; ++k) {
              Vec left = times(a + b, alg.product[{a, b}][i][j], c, k);
              Vec right = times(b + c, alg.product[{b, c}][j][k], a, i);
              if (left != right) throw Error(ErrorCode::InternalError, "summand algebra is not associative");
            }
  return alg;
}

std::string functor_name(FunctorTag t) {
  switch (t) {
    case FunctorTag::Hom: return "hom";
    case FunctorTag::HomOplus: return "hom_oplus";
    case FunctorTag::Tate: return "tate";
    case FunctorTag::Brauer: return "brauer";
    case FunctorTag::TransferIdeal: return "transfer_ideal";
    case FunctorTag::Invariants: return "invariants";
  }
  return "hom";
}

std::optional<FunctorTag> parse_functor(const std::string& s) {
  for (auto t : {FunctorTag::Hom, FunctorTag::HomOplus, FunctorTag::Tate, FunctorTag::Brauer, FunctorTag::TransferIdeal,
                 FunctorTag::Invariants})
    if (functor_name(t) == s) return t;
  return std::nullopt;
}

namespace {

/// One degree of a functor: lifted basis and a coordinate map on homs M -> S_d.
struct FunctorDegree {
  std::vector<Matrix> lifts;
  std::optional<CoordinateMap> ambient;
  Matrix quotient;  // applied after ambient coordinates; empty = none
  std::vector<Matrix> retracts;
  const ClassData* cls = nullptr;

  Vec coords(const Matrix& phi) const {
    if (cls) {
      Vec out;
      for (const auto& r : retracts) {
        Vec v = cls->pi(r * phi);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    }
    auto c = ambient->try_coordinates(phi.data());
    if (!c) throw Error(ErrorCode::InternalError, "parameter action leaves the functor");
    if (quotient.rows() == 0 && quotient.cols() == 0) return *c;
    return quotient.apply(*c);
  }
};

Matrix vectors_as_columns(const std::vector<Matrix>& ms, std::size_t len, Scalar p) {
  Matrix out(len, ms.size(), p);
  for (std::size_t j = 0; j < ms.size(); ++j)
    for (std::size_t i = 0; i < len; ++i) out(i, j) = ms[j].data()[i];
  return out;
}

FunctorDegree functor_degree(GradedEngine& e, const GModule& m, FunctorTag f, std::size_t d, const ClassData* cls,
                             std::size_t cls_index, const std::vector<Subgroup>& xs) {
  const Scalar p = m.p();
  const std::size_t sd = e.basis(d).size();
  FunctorDegree fd;
  if (f == FunctorTag::HomOplus) {
    fd.cls = cls;
    std::vector<Matrix> lam;
    const auto& rad = cls->end.rad;
    for (std::size_t u = 0; u < rad.quotient_dim(); ++u) lam.push_back(cls->end.algebra.element(rad.lift.column(u)));
    const auto& dd = e.degree(d);
    for (std::size_t pi = 0; pi < dd.pieces.size(); ++pi)
      for (std::size_t si = 0; si < dd.pieces[pi].summands.size(); ++si) {
        if (dd.pieces[pi].summands[si].cls != cls_index) continue;
        Matrix em = e.full_embed(d, pi, si);
        for (const auto& l : lam) fd.lifts.push_back(em * l);
        fd.retracts.push_back(e.full_retract(d, pi, si));
      }
    return fd;
  }
  GModule s = e.component(d);
  if (f == FunctorTag::TransferIdeal) {
    Matrix t = transfer_ideal(s, xs);
    for (std::size_t j = 0; j < t.cols(); ++j) fd.lifts.push_back(t.select_columns({j}));
    fd.ambient = CoordinateMap(t);
    return fd;
  }
  HomSpace hs = hom_space(m, s);
  const std::size_t len = sd * m.dim();
  fd.ambient = CoordinateMap(vectors_as_columns(hs.basis, len, p));
  if (f == FunctorTag::Hom || f == FunctorTag::Invariants) {
    fd.lifts = hs.basis;
    return fd;
  }
  // Quotient by the transfer images, expressed in Hom coordinates.
  const std::size_t h = hs.dim();
  Matrix z(h, 0, p);
  for (const auto& x : xs)
    for (const auto& t : transfer_image(m, s, x)) {
      auto c = fd.ambient->try_coordinates(t.data());
      if (!c) throw Error(ErrorCode::InternalError, "transfer image outside Hom");
      z = hstack(z, Matrix::from_columns({*c}, h, p));
    }
  Matrix zb = z.cols() ? column_space(z) : z;
  auto r = rref(hstack(zb, Matrix::identity(h, p)));
  std::vector<std::size_t> extra;
  for (std::size_t c : r.pivots)
    if (c >= zb.cols()) extra.push_back(c - zb.cols());
  Matrix full = hstack(zb, Matrix::identity(h, p).select_columns(extra));
  auto inv = inverse(full);
  if (!inv) throw Error(ErrorCode::InternalError, "quotient basis is singular");
  std::vector<std::size_t> rows;
  for (std::size_t i = zb.cols(); i < h; ++i) rows.push_back(i);
  fd.quotient = inv->select_rows(rows);
  if (rows.empty()) fd.quotient = Matrix(0, h, p);
  for (std::size_t c : extra) fd.lifts.push_back(hs.basis[c]);
  return fd;
}

}  // namespace

GradedModule multiplicity_module(GradedEngine& e, const GModule& m, FunctorTag f, const std::vector<Parameter>& params,
                                 std::size_t D) {
  require_summands(e);
  e.extend(D);
  const auto& g = e.group();
  const Scalar p = g->p();
  for (const auto& y : params) {
    if (!y.poly.is_homogeneous() || y.poly.is_zero() || static_cast<std::size_t>(y.poly.degree()) != y.degree)
      throw Error(ErrorCode::InvalidInput, "parameter " + y.name + " is not homogeneous of its stated degree");
    if (y.poly.nvars() != g->n()) throw Error(ErrorCode::DimensionMismatch, "parameter in the wrong number of variables");
    if (!is_invariant(y.poly, *g)) throw Error(ErrorCode::InvalidInput, "parameter " + y.name + " is not invariant");
  }
  GModule mm = m;
  if (f == FunctorTag::Invariants || f == FunctorTag::TransferIdeal) mm = GModule::trivial(g);
  const ClassData* cls = nullptr;
  std::size_t cls_index = 0;
  if (f == FunctorTag::HomOplus) {
    auto c = e.registry().find(mm);
    if (!c) throw Error(ErrorCode::InvalidInput, "module is not a registered class");
    cls_index = *c;
    cls = &e.registry()[*c].data;
    mm = cls->rep;
  }
  std::vector<Subgroup> xs;
  if (f == FunctorTag::Tate) xs = maximal_members(g, SubgroupClass::trivial_only());
  if (f == FunctorTag::Brauer) xs = maximal_members(g, SubgroupClass::non_sylow());
  if (f == FunctorTag::TransferIdeal) xs = maximal_members(g, SubgroupClass::trivial_only());

  std::vector<FunctorDegree> fds(D + 1);
  parallel_for(D + 1, e.options().threads,
               [&](std::size_t d) { fds[d] = functor_degree(e, mm, f, d, cls, cls_index, xs); });

  GradedModule out;
  out.functor = f;
  out.module_label = mm.label();
  if (auto c = e.registry().find(mm)) out.module_label = e.registry()[*c].label;
  out.max_degree = D;
  out.params = params;
  for (auto& fd : fds) {
    out.dims.push_back(fd.lifts.size());
    out.lifts.push_back(fd.lifts);
  }
  out.action.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::size_t de = params[i].degree;
    for (std::size_t d = 0; d + de <= D; ++d) {
      Matrix a(out.dims[d + de], out.dims[d], p);
      for (std::size_t j = 0; j < out.dims[d]; ++j) {
        const Matrix& f0 = fds[d].lifts[j];
        Matrix phi(e.basis(d + de).size(), f0.cols(), p);
        for (std::size_t c = 0; c < f0.cols(); ++c) {
          Vec col = multiply_coords(params[i].poly, e.basis(d), f0.column(c), e.basis(d + de));
          for (std::size_t r = 0; r < col.size(); ++r) phi(r, c) = col[r];
        }
        Vec v = fds[d + de].coords(phi);
        for (std::size_t r = 0; r < v.size(); ++r) a(r, j) = v[r];
      }
      out.action[i].push_back(std::move(a));
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = i + 1; j < params.size(); ++j) {
      const std::size_t di = params[i].degree, dj = params[j].degree;
      for (std::size_t d = 0; d + di + dj <= D; ++d)
        if (out.action[i][d + dj] * out.action[j][d] != out.action[j][d + di] * out.action[i][d])
          throw Error(ErrorCode::InternalError, "parameter actions do not commute");
    }
  return out;
}

}  // namespace modinv
