#include <cmath>
#include <random>

#include "doctest.h"
#include "modinv/decompose.hpp"
#include "modinv/polynomial.hpp"
#include "oracle/idempotents.hpp"
#include "oracle/jordan.hpp"
#include "oracle/orbits.hpp"
#include "oracle/sympow.hpp"
#include "support.hpp"

using namespace modinv;
using fixtures::jordan;

namespace {

std::size_t dim_sum(const std::vector<Summand>& s) {
  std::size_t t = 0;
  for (const auto& x : s) t += x.embed.cols();
  return t;
}

// Random change of basis applied to a module.
GModule scramble(const GModule& m, std::mt19937_64& rng) {
  const Scalar p = m.p();
  for (;;) {
    Matrix b(m.dim(), m.dim(), p);
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j) b(i, j) = static_cast<Scalar>(rng() % p);
    auto bi = inverse(b);
    if (!bi) continue;
    std::vector<Matrix> gens;
    for (const auto& a : m.generator_action()) gens.push_back(*bi * a * b);
    return GModule(m.group(), gens);
  }
}

std::vector<std::pair<std::size_t, std::size_t>> engine_profile(const std::vector<Summand>& s,
                                                                const IsoClassRegistry& reg) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto [c, m] : multiplicities(s)) out.emplace_back(reg[c].data.rep.dim(), m);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("endomorphism algebras and radicals") {
  auto g = fixtures::c3_j2();
  auto k = endomorphism_algebra(GModule::trivial(g));
  CHECK(k.algebra.dim() == 1);
  CHECK(k.rad.rad.cols() == 0);
  auto j2 = endomorphism_algebra(jordan(g, 2));
  CHECK(j2.algebra.dim() == 2);
  CHECK(j2.rad.rad.cols() == 1);
  auto reg = endomorphism_algebra(GModule::regular(g));
  CHECK(reg.algebra.dim() == 3);
  CHECK(reg.rad.rad.cols() == 2);
  CHECK(reg.quotient.is_field());
}

TEST_CASE("radical of the group algebra equals the augmentation ideal for p-groups") {
  for (auto g : {fixtures::c2_swap(), fixtures::c3_j2(), fixtures::klein()}) {
    GModule reg = GModule::regular(g);
    // left-regular matrices span kG
    MatrixAlgebra a(reg.all_actions());
    auto r = radical(a);
    CHECK(r.rad.cols() == g->order() - 1);
    CHECK(r.quotient_dim() == 1);
  }
}

TEST_CASE("radical of a semisimple algebra is zero") {
  // S3 over F_2: 3 is invertible, the group algebra has a 2-dim irreducible
  auto g = GroupTable::enumerate({Matrix::from_rows({{0, 1}, {1, 1}}, 2), Matrix::from_rows({{0, 1}, {1, 0}}, 2)});
  CHECK(g->order() == 6);
  MatrixAlgebra forms_alg(std::vector<Matrix>{Matrix::identity(2, 2), g->generators()[0], g->generators()[1],
                                              g->generators()[0] * g->generators()[1]});
  CHECK(radical(forms_alg).rad.cols() == 0);
}

TEST_CASE("field extension quotient is recognised") {
  // F_4 inside 2x2 matrices over F_2: End of an irreducible C3-module over F_2
  auto g = GroupTable::enumerate({Matrix::from_rows({{0, 1}, {1, 1}}, 2)});
  CHECK(g->order() == 3);
  auto e = endomorphism_algebra(GModule::forms(g));
  CHECK(e.algebra.dim() == 2);
  CHECK(e.rad.rad.cols() == 0);
  CHECK(e.quotient.is_field());
  CHECK(e.quotient.primitive_minpoly.size() == 3);
}

TEST_CASE("fitting splits") {
  auto g = fixtures::c2_swap();
  GModule k = GModule::trivial(g);
  GModule f = GModule::regular(g);
  GModule m = direct_sum(k, f);
  CHECK_FALSE(fitting_split(m, Matrix::identity(3, 2)));
  CHECK_FALSE(fitting_split(m, Matrix(3, 3, 2)));
  Matrix proj(3, 3, 2);
  proj(0, 0) = 1;
  auto s = fitting_split(m, proj);
  REQUIRE(s);
  CHECK(s->image_basis.cols() == 1);
  CHECK(s->kernel_basis.cols() == 2);
  Matrix bad(3, 3, 2);
  bad(1, 1) = 1;
  CHECK_THROWS_AS(fitting_split(m, bad), Error);
}

TEST_CASE("decompose symmetric powers") {
  auto g = fixtures::c2_swap();
  IsoClassRegistry reg(g);
  (void)decompose(GModule::forms(g), reg, 1);
  auto s2 = decompose(sym_component(g, 2), reg, 2);
  auto m = multiplicities(s2);
  REQUIRE(reg.find_label("k"));
  REQUIRE(reg.find_label("F"));
  CHECK(m[*reg.find_label("k")] == 1);
  CHECK(m[*reg.find_label("F")] == 1);
  auto orbits = oracle::monomial_orbits(fixtures::to_oracle(g->generators()), 2);
  CHECK(orbits[1] == 1);
  CHECK(orbits[2] == 1);

  auto g3 = fixtures::c3_j2();
  IsoClassRegistry reg3(g3);
  auto d = decompose(sym_component(g3, 2), reg3, 2);
  REQUIRE(d.size() == 1);
  CHECK(reg3[d[0].cls].label == "F");
  auto jt = oracle::jordan_type(oracle::sym_power(fixtures::to_oracle(g3->generators()[0]), 2, 3), 3);
  CHECK(jt == std::map<std::size_t, std::size_t>{{3, 1}});
}

TEST_CASE("summand maps are orthogonal and equivariant") {
  auto g = fixtures::c3_j2();
  IsoClassRegistry reg(g);
  GModule m = sym_component(g, 7);
  auto s = decompose(m, reg, 7);
  CHECK(dim_sum(s) == m.dim());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& rep = reg[s[i].cls].data.rep;
    CHECK(is_equivariant(s[i].embed, rep, m));
    CHECK(is_equivariant(s[i].retract, m, rep));
    for (std::size_t j = 0; j < s.size(); ++j) {
      Matrix prod = s[i].retract * s[j].embed;
      if (i == j) CHECK(prod == Matrix::identity(rep.dim(), 3));
      else CHECK(prod.is_zero());
    }
  }
}

TEST_CASE("doubling doubles multiplicities") {
  auto g = fixtures::c3_j2();
  IsoClassRegistry reg(g);
  GModule m = sym_component(g, 5);
  auto one = multiplicities(decompose(m, reg, 5));
  auto two = multiplicities(decompose(direct_sum(m, m), reg, 5));
  CHECK(one.size() == two.size());
  for (auto [c, k] : one) CHECK(two[c] == 2 * k);
}

TEST_CASE("isomorphism tests") {
  auto g = fixtures::c3_j2();
  GModule j2 = jordan(g, 2);
  CHECK(is_isomorphic(j2, j2));
  CHECK(is_isomorphic(j2, dual(j2)));
  auto c2 = fixtures::c2_swap();
  CHECK_FALSE(is_isomorphic(GModule::trivial(c2), GModule::regular(c2)));
  CHECK_THROWS_AS(is_isomorphic(direct_sum(j2, j2), j2), Error);
}

TEST_CASE("tensor of J2 with itself") {
  auto g = fixtures::c3_j2();
  IsoClassRegistry reg(g);
  GModule j2 = jordan(g, 2);
  auto s = decompose(tensor(j2, j2), reg, 0);
  auto prof = engine_profile(s, reg);
  CHECK(prof == std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {3, 1}});
}

TEST_CASE("Krull-Schmidt oracle on scrambled direct sums") {
  std::mt19937_64 rng(5);
  struct Case {
    GroupPtr g;
    std::vector<GModule> parts;
  };
  auto c3 = fixtures::c3_j2();
  auto v4 = fixtures::klein();
  auto s3 = fixtures::s3_f3();
  std::vector<Case> cases;
  cases.push_back({c3, {jordan(c3, 1), jordan(c3, 2), jordan(c3, 3)}});
  cases.push_back({v4, {GModule::trivial(v4), GModule::regular(v4), GModule::forms(v4)}});
  cases.push_back({s3, {GModule::trivial(s3), GModule::forms(s3), dual(GModule::forms(s3))}});
  for (auto& cs : cases) {
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 4; ++trial) {
      GModule m = GModule::trivial(cs.g, 0);
      bool empty = true;
      std::size_t total = 0;
      for (const auto& part : cs.parts) {
        std::size_t copies = rng() % 3;
        for (std::size_t c = 0; c < copies && total + part.dim() <= 12; ++c) {
          m = empty ? part : direct_sum(m, part);
          empty = false;
          total += part.dim();
        }
      }
      if (empty) m = cs.parts[0];
      GModule sm = scramble(m, rng);
      oracle::Tiny t{fixtures::to_oracle(sm.generator_action())};
      // exhaustive search only where the endomorphism count is small
      double count = std::pow(double(cs.g->p()), double(oracle::hom_basis(t, t, cs.g->p()).size()));
      if (count > 2e5) continue;
      ++checked;
      IsoClassRegistry reg(cs.g);
      auto s = decompose(sm, reg, 0, {static_cast<std::uint64_t>(trial)});
      CHECK(dim_sum(s) == sm.dim());
      CHECK(engine_profile(s, reg) == oracle::decompose(t, cs.g->p(), 1u << 20));
    }
    CHECK(checked == 4);
  }
}

TEST_CASE("registry classes are pairwise non-isomorphic") {
  auto g = fixtures::c3_j2();
  IsoClassRegistry reg(g);
  for (std::size_t d = 0; d <= 6; ++d) (void)decompose(sym_component(g, d), reg, d);
  (void)decompose(tensor(GModule::forms(g), GModule::forms(g)), reg, 2);
  for (std::size_t i = 0; i < reg.size(); ++i)
    for (std::size_t j = i + 1; j < reg.size(); ++j) CHECK_FALSE(is_isomorphic(reg[i].data, reg[j].data.rep));
  CHECK(reg.size() == 3);
}

TEST_CASE("Jordan oracle agrees with green multiplicities for C3") {
  auto g = fixtures::c3_j2();
  IsoClassRegistry reg(g);
  for (std::size_t d = 0; d <= 12; ++d) {
    auto s = decompose(sym_component(g, d), reg, d);
    auto jt = oracle::jordan_type(oracle::sym_power(fixtures::to_oracle(g->generators()[0]), static_cast<int>(d), 3), 3);
    std::vector<std::pair<std::size_t, std::size_t>> expect(jt.begin(), jt.end());
    CHECK(engine_profile(s, reg) == expect);
  }
}

TEST_CASE("dimension cap") {
  auto g = fixtures::c3_j2();
  IsoClassRegistry reg(g);
  DecomposeOptions opt;
  opt.dim_cap = 3;
  try {
    (void)decompose(sym_component(g, 5), reg, 5, opt);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
}
