#include "modinv/relative.hpp"

#include <algorithm>

namespace modinv {

namespace {

GModule zero_module(const GroupPtr& g) {
  return GModule(g, std::vector<Matrix>(g->num_generators(), Matrix(0, 0, g->p())));
}

std::size_t span_rank(const std::vector<Matrix>& mats, std::size_t rows, std::size_t cols, Scalar p) {
  if (mats.empty() || rows * cols == 0) return 0;
  Matrix v(mats.size(), rows * cols, p);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const auto& d = mats[i].data();
    std::copy(d.begin(), d.end(), v.row(i).begin());
  }
  return rank(v);
}

}  // namespace

GroupAlgebraData group_algebra_data(const GroupPtr& g, std::uint64_t seed) {
  GroupAlgebraData out;
  out.group = g;
  GModule reg = GModule::regular(g);
  MatrixAlgebra a(reg.all_actions());
  out.radical = radical_coords(a);
  IsoClassRegistry local(g, seed);
  decompose(reg, local, 0, DecomposeOptions{seed});
  for (std::size_t i = 0; i < local.size(); ++i) out.projectives.push_back(local[i].data.rep);
  return out;
}

Matrix radical_submodule(const GModule& m, const GroupAlgebraData& a) {
  const Scalar p = m.p();
  if (m.dim() == 0 || a.radical.empty()) return Matrix(m.dim(), 0, p);
  auto acts = m.all_actions();
  Matrix span(m.dim(), 0, p);
  for (const auto& c : a.radical) {
    Matrix x(m.dim(), m.dim(), p);
    for (std::size_t g = 0; g < acts.size(); ++g)
      if (c[g]) x = x + acts[g].scaled(c[g]);
    span = hstack(span, x);
  }
  return column_space(span);
}

ProjectiveCover projective_cover(const GModule& m, const GroupAlgebraData& a) {
  const Scalar p = m.p();
  ProjectiveCover out;
  out.cover = zero_module(m.group());
  out.surjection = Matrix(m.dim(), 0, p);
  if (m.dim() == 0) return out;
  Matrix q = radical_submodule(m, a);
  for (std::size_t i = 0; i < a.projectives.size() && q.cols() < m.dim(); ++i) {
    const GModule& pi = a.projectives[i];
    HomSpace hs = hom_space(pi, m);
    for (const auto& f : hs.basis) {
      if (span_contains(q, f)) continue;
      q = column_space(hstack(q, f));
      out.cover = out.cover.dim() ? direct_sum(out.cover, pi) : pi;
      out.surjection = hstack(out.surjection, f);
      out.summands.push_back(i);
      if (q.cols() == m.dim()) break;
    }
  }
  if (q.cols() != m.dim() || rank(out.surjection) != m.dim())
    throw Error(ErrorCode::InternalError, "projective cover is not surjective");
  return out;
}

ProjectiveCover projective_cover(const GModule& m) { return projective_cover(m, group_algebra_data(m.group())); }

GModule heller(const GModule& m, const GroupAlgebraData& a) {
  ProjectiveCover pc = projective_cover(m, a);
  if (pc.cover.dim() == m.dim()) return zero_module(m.group());
  auto ker = nullspace(pc.surjection);
  return submodule(pc.cover, Matrix::from_columns(ker, pc.cover.dim(), m.p()));
}

GModule heller(const GModule& m) { return heller(m, group_algebra_data(m.group())); }

bool is_relatively_projective(const GModule& m, const Subgroup& h) {
  if (m.dim() == 0) return true;
  const std::size_t n = m.dim();
  auto img = transfer_image(m, m, h);
  if (img.empty()) return false;
  Matrix sys(n * n, img.size(), m.p());
  for (std::size_t k = 0; k < img.size(); ++k)
    for (std::size_t e = 0; e < n * n; ++e) sys(e, k) = img[k].data()[e];
  Vec id = vectorize(Matrix::identity(n, m.p()));
  return solve(sys, id).has_value();
}

Subgroup vertex(const GModule& m) {
  const GroupPtr& g = m.group();
  Subgroup cur = sylow_subgroup(g, g->p());
  if (!is_relatively_projective(m, cur))
    throw Error(ErrorCode::InternalError, "module is not projective relative to a Sylow subgroup");
  for (;;) {
    bool moved = false;
    for (const auto& q : maximal_p_subgroups(cur)) {
      if (is_relatively_projective(m, q)) {
        cur = q;
        moved = true;
        break;
      }
    }
    if (!moved) return cur;
  }
}

SourceData source(const GModule& m, const Subgroup& vtx, std::uint64_t seed) {
  SourceData out{vtx, subgroup_table(vtx), {}};
  ClassData mc = make_class_data(m, seed);
  GModule res = restrict_to(m, out.table);
  IsoClassRegistry local(out.table.table, seed);
  decompose(res, local, 0, DecomposeOptions{seed});
  for (std::size_t i = 0; i < local.size(); ++i) {
    const GModule& u = local[i].data.rep;
    if (multiplicity(induce(u, out.table), mc) > 0) {
      out.source = u;
      return out;
    }
  }
  throw Error(ErrorCode::CertificationFailure, "no summand of the restriction induces back to the module");
}

SourceData source(const GModule& m, std::uint64_t seed) { return source(m, vertex(m), seed); }

Subgroup inertia(const SourceData& s) {
  const GroupPtr& g = s.vertex.parent();
  Subgroup n = normalizer(g, s.vertex);
  ClassData uc = make_class_data(s.source);
  std::vector<bool> mem(g->order(), false);
  for (std::size_t x : n.elements())
    if (s.vertex.contains(x) || is_isomorphic(uc, conjugate_twist(s.source, s.table, x))) mem[x] = true;
  Subgroup out(g, std::move(mem));
  check_subgroup(out);
  return out;
}

Subgroup inertia(const GModule& m) { return inertia(source(m)); }

std::size_t tate_hom_dim(const GModule& m, const GModule& n) {
  if (m.dim() == 0 || n.dim() == 0) return 0;
  std::size_t hom = hom_space(m, n).dim();
  auto img = transfer_image(m, n, trivial_subgroup(m.group()));
  std::size_t t = span_rank(img, n.dim(), m.dim(), m.p());
  if (t > hom) throw Error(ErrorCode::InternalError, "transfer image exceeds Hom");
  return hom - t;
}

std::size_t ext_dim(const GModule& m, const GModule& n, std::size_t i) {
  if (i < 1) throw Error(ErrorCode::InvalidInput, "ext degree must be at least 1");
  GroupAlgebraData a = group_algebra_data(m.group());
  GModule w = m;
  for (std::size_t k = 0; k < i && w.dim() > 0; ++k) w = heller(w, a);
  return tate_hom_dim(w, n);
}

}  // namespace modinv
