#include "doctest.h"
#include "modinv/module.hpp"

using namespace modinv;

namespace {

GroupPtr c2() { return GroupTable::enumerate({Matrix::from_rows({{0, 1}, {1, 0}}, 2)}); }
GroupPtr c3() { return GroupTable::enumerate({Matrix::from_rows({{1, 1}, {0, 1}}, 3)}); }
GroupPtr s3() {
  return GroupTable::enumerate({Matrix::from_rows({{1, 1}, {0, 1}}, 3), Matrix::from_rows({{2, 0}, {0, 1}}, 3)});
}

GModule jordan(const GroupPtr& g, std::size_t n) {
  Matrix j = Matrix::identity(n, g->p());
  for (std::size_t i = 0; i + 1 < n; ++i) j(i, i + 1) = 1;
  return GModule(g, {j});
}

}  // namespace

TEST_CASE("act evaluates words") {
  auto g = c3();
  GModule v = GModule::forms(g);
  CHECK(v.act(0) == Matrix::identity(2, 3));
  CHECK(act(v, Matrix::from_rows({{1, 1}, {0, 1}}, 3)) == Matrix::from_rows({{1, 1}, {0, 1}}, 3));
  auto sq = g->multiply(g->generator_index(0), g->generator_index(0));
  CHECK(v.act(sq) == v.act(g->generator_index(0)) * v.act(g->generator_index(0)));
  CHECK_THROWS_AS(act(v, Matrix::from_rows({{0, 1}, {1, 0}}, 3)), Error);
}

TEST_CASE("homomorphism property on all pairs") {
  auto g = s3();
  GModule m = tensor(GModule::forms(g), dual(GModule::forms(g)));
  auto acts = m.all_actions();
  for (std::size_t a = 0; a < g->order(); ++a)
    for (std::size_t b = 0; b < g->order(); ++b) CHECK(acts[g->multiply(a, b)] == acts[a] * acts[b]);
}

TEST_CASE("dual sum tensor") {
  auto g = c3();
  GModule k = GModule::trivial(g);
  CHECK(dual(k).generator(0) == k.generator(0));
  GModule j2 = jordan(g, 2);
  CHECK(tensor(j2, j2).dim() == 4);
  CHECK(direct_sum(j2, k).dim() == 3);
  CHECK_THROWS_AS(direct_sum(j2, GModule::trivial(c2())), Error);
}

TEST_CASE("hom spaces") {
  auto g = c3();
  GModule j2 = jordan(g, 2);
  CHECK(hom_space(j2, j2).dim() == 2);
  CHECK(hom_space(j2, GModule::trivial(g, 0)).dim() == 0);
  CHECK(hom_space(GModule::trivial(g, 0), j2).dim() == 0);
  GModule reg = GModule::regular(g);
  CHECK(hom_space(reg, reg).dim() == 3);
  CHECK(hom_space(j2, reg).dim() == hom_space_direct(j2, reg).dim());
  CHECK(hom_space(reg, j2).dim() == hom_space_direct(reg, j2).dim());
}

TEST_CASE("hom routes agree on mixed modules") {
  auto g = s3();
  GModule v = GModule::forms(g);
  GModule a = tensor(v, v);
  GModule b = direct_sum(v, dual(v));
  for (const auto& [m, n] : std::vector<std::pair<GModule, GModule>>{{a, b}, {b, a}, {a, a}, {v, a}, {a, v}}) {
    auto h = hom_space(m, n);
    CHECK(h.dim() == hom_space_direct(m, n).dim());
    auto am = m.all_actions();
    auto an = n.all_actions();
    for (const auto& f : h.basis)
      for (std::size_t x = 0; x < g->order(); ++x) CHECK(f * am[x] == an[x] * f);
  }
}

TEST_CASE("invariants") {
  auto g = c3();
  CHECK(invariants(GModule::trivial(g)).size() == 1);
  CHECK(invariants(jordan(g, 2)).size() == 1);
  CHECK(invariants(GModule::regular(c2())).size() == 1);
  GModule m = tensor(jordan(g, 2), jordan(g, 3));
  CHECK(invariants(m).size() == hom_space(GModule::trivial(g), m).dim());
}

TEST_CASE("transfer") {
  auto g = c2();
  GModule k = GModule::trivial(g);
  GModule v = GModule::forms(g);
  // evaluation at x, as a hom k -> S_1
  Matrix fx = Matrix::from_rows({{1}, {0}}, 2);
  Matrix t = transfer(fx, k, v, trivial_subgroup(g));
  CHECK(t == Matrix::from_rows({{1}, {1}}, 2));
  Matrix id = Matrix::identity(2, 2);
  CHECK(transfer(id, v, v, whole_group(g)) == id);
  Matrix bad = Matrix::from_rows({{1, 0}, {0, 0}}, 2);
  try {
    (void)transfer(bad, v, v, whole_group(g));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotEquivariant);
  }
  CHECK(transfer_image(k, v, trivial_subgroup(g)).size() == 2);
}

TEST_CASE("restriction and induction") {
  auto g = c2();
  auto st = subgroup_table(trivial_subgroup(g));
  GModule ind = induce(GModule::trivial(st.table), st);
  CHECK(ind.dim() == 2);
  CHECK(hom_space(ind, GModule::regular(g)).dim() == 2);
  auto g3 = c3();
  auto st3 = subgroup_table(trivial_subgroup(g3));
  GModule ind3 = induce(GModule::trivial(st3.table), st3);
  GModule res = restrict_to(ind3, st3);
  CHECK(res.dim() == 3);
  CHECK(invariants(res).size() == 3);
  auto s = s3();
  auto p3 = subgroup_table(sylow_subgroup(s, 3));
  GModule u = restrict_to(GModule::forms(s), p3);
  GModule up = induce(u, p3);
  CHECK(up.dim() == 4);
  auto acts = up.all_actions();
  for (std::size_t a = 0; a < s->order(); ++a)
    for (std::size_t b = 0; b < s->order(); ++b) CHECK(acts[s->multiply(a, b)] == acts[a] * acts[b]);
}

TEST_CASE("submodule and quotient") {
  auto g = c3();
  GModule j3 = jordan(g, 3);
  Matrix sub = Matrix::from_rows({{1, 0}, {0, 1}, {0, 0}}, 3);
  GModule s = submodule(j3, sub);
  CHECK(s.dim() == 2);
  Matrix proj;
  GModule q = quotient(j3, sub, &proj);
  CHECK(q.dim() == 1);
  CHECK(proj.rows() == 1);
  CHECK_THROWS_AS(submodule(j3, Matrix::from_rows({{0}, {1}, {0}}, 3)), Error);
}
