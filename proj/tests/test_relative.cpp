#include <doctest.h>

#include "modinv/relative.hpp"
#include "oracle/cyclic_ext.hpp"
#include "support.hpp"

using namespace modinv;
using namespace fixtures;

namespace {

GroupPtr c4_f2() {
  return GroupTable::enumerate({Matrix::from_rows({{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}}, 2)});
}

bool same_as_sylow(const Subgroup& h) {
  return h.members() == sylow_subgroup(h.parent(), h.parent()->p()).members();
}

}  // namespace

TEST_CASE("projective indecomposables of small group algebras") {
  CHECK(group_algebra_data(c2_swap()).projectives.size() == 1);
  CHECK(group_algebra_data(c3_j2()).projectives.size() == 1);
  // S3 in characteristic 3 has two simple modules, so two projective covers of dimension 3.
  auto s3 = group_algebra_data(s3_f3());
  REQUIRE(s3.projectives.size() == 2);
  for (const auto& p : s3.projectives) CHECK(p.dim() == 3);
  CHECK(s3.radical.size() == 4);
}

TEST_CASE("heller shifts") {
  auto c3 = c3_j2();
  GModule om = heller(GModule::trivial(c3));
  CHECK(om.dim() == 2);
  CHECK(is_isomorphic(om, jordan(c3, 2)));
  CHECK(is_isomorphic(heller(jordan(c3, 2)), GModule::trivial(c3)));

  auto c2 = c2_swap();
  GModule oc2 = heller(GModule::trivial(c2));
  CHECK(oc2.dim() == 1);
  CHECK(is_isomorphic(oc2, GModule::trivial(c2)));

  CHECK(heller(GModule::regular(c3)).dim() == 0);
  CHECK(heller(direct_sum(GModule::regular(c2), GModule::regular(c2))).dim() == 0);

  auto s3 = s3_f3();
  auto pc = projective_cover(GModule::trivial(s3));
  CHECK(pc.cover.dim() == 3);
  CHECK(is_equivariant(pc.surjection, pc.cover, GModule::trivial(s3)));
  GModule os3 = heller(GModule::trivial(s3));
  CHECK(os3.dim() == 2);
  CHECK_NOTHROW(make_class_data(os3));
}

TEST_CASE("projective cover of a decomposable module is minimal") {
  auto c3 = c3_j2();
  GModule m = direct_sum(direct_sum(GModule::trivial(c3), jordan(c3, 2)), GModule::regular(c3));
  auto pc = projective_cover(m);
  CHECK(pc.cover.dim() == 9);
  CHECK(heller(m).dim() == 3);
  // Over the Klein four group the forms are two permutation modules on two
  // points, each with a one-dimensional top.
  auto v4 = klein();
  auto pv = projective_cover(GModule::forms(v4));
  CHECK(pv.cover.dim() == 8);
  CHECK(pv.summands.size() == 2);
  CHECK(heller(GModule::forms(v4)).dim() == 4);
}

TEST_CASE("vertices") {
  for (auto g : {c2_swap(), c3_j2(), klein(), s3_f3()}) {
    CAPTURE(g->order());
    CHECK(same_as_sylow(vertex(GModule::trivial(g))));
    CHECK(vertex(GModule::regular(g)).order() == 1);
  }
  auto c4 = c4_f2();
  // J2 over C4 is induced from the subgroup of order 2.
  CHECK(vertex(jordan(c4, 2)).order() == 2);
  CHECK(vertex(jordan(c4, 3)).order() == 4);
  CHECK(vertex(jordan(c4, 4)).order() == 1);
}

TEST_CASE("source and inertia of the trivial module") {
  for (auto g : {c2_swap(), c3_j2(), klein(), s3_f3()}) {
    CAPTURE(g->order());
    auto s = source(GModule::trivial(g));
    CHECK(s.source.dim() == 1);
    CHECK(is_isomorphic(s.source, GModule::trivial(s.table.table)));
    Subgroup in = inertia(s);
    CHECK(in.members() == normalizer(g, s.vertex).members());
  }
  auto c4 = c4_f2();
  auto s = source(jordan(c4, 2));
  CHECK(s.source.dim() == 1);
}

TEST_CASE("tate hom dimensions") {
  auto c2 = c2_swap();
  auto c3 = c3_j2();
  CHECK(tate_hom_dim(GModule::trivial(c2), GModule::trivial(c2)) == 1);
  CHECK(tate_hom_dim(GModule::trivial(c3), GModule::trivial(c3)) == 1);
  CHECK(tate_hom_dim(GModule::regular(c3), jordan(c3, 2)) == 0);
  CHECK(tate_hom_dim(jordan(c3, 2), GModule::regular(c3)) == 0);
  auto v4 = klein();
  CHECK(tate_hom_dim(GModule::forms(v4), GModule::regular(v4)) == 0);
  CHECK_THROWS_AS(ext_dim(GModule::trivial(c2), GModule::trivial(c2), 0), Error);
}

TEST_CASE("ext against the periodic resolution of a cyclic group") {
  struct Case {
    GroupPtr g;
    std::size_t order;
  };
  for (auto [g, order] : {Case{c2_swap(), 2}, Case{c3_j2(), 3}, Case{c4_f2(), 4}}) {
    for (std::size_t n = 1; n <= order; ++n) {
      GModule nm = jordan(g, n);
      auto gn = to_oracle(nm.generator(0));
      for (int i = 1; i <= 4; ++i) {
        CAPTURE(order);
        CAPTURE(n);
        CAPTURE(i);
        CHECK(ext_dim(GModule::trivial(g), nm, i) == oracle::cyclic_ext(i, gn, order, g->p()));
      }
    }
  }
}

TEST_CASE("ext of the Klein four group grows linearly") {
  auto v4 = klein();
  for (std::size_t i = 1; i <= 4; ++i)
    CHECK(ext_dim(GModule::trivial(v4), GModule::trivial(v4), i) == i + 1);
}
