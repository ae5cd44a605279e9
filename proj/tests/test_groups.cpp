#include <algorithm>
#include <set>

#include "doctest.h"
#include "modinv/group.hpp"
#include "oracle/closure.hpp"

using namespace modinv;

namespace {

GroupPtr c2() { return GroupTable::enumerate({Matrix::from_rows({{0, 1}, {1, 0}}, 2)}); }
GroupPtr c3() { return GroupTable::enumerate({Matrix::from_rows({{1, 1}, {0, 1}}, 3)}); }
GroupPtr s3() {
  return GroupTable::enumerate({Matrix::from_rows({{1, 1}, {0, 1}}, 3), Matrix::from_rows({{2, 0}, {0, 1}}, 3)});
}
GroupPtr klein() {
  return GroupTable::enumerate({Matrix::from_rows({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, 2),
                                Matrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}, 2)});
}

oracle::Flat flat(const Matrix& m) { return oracle::Flat(m.data().begin(), m.data().end()); }

void check_words(const GroupPtr& g) {
  for (std::size_t i = 0; i < g->order(); ++i) {
    Matrix m = Matrix::identity(g->n(), g->p());
    for (auto s : g->word(i)) m = m * g->generators()[s];
    CHECK(m == g->element(i));
  }
}

void check_partition(const GroupPtr& g, const Subgroup& h) {
  auto reps = coset_reps(g, h);
  CHECK(reps.size() * h.order() == g->order());
  std::vector<int> hit(g->order(), 0);
  for (auto r : reps)
    for (auto y : h.elements()) ++hit[g->multiply(r, y)];
  CHECK(std::all_of(hit.begin(), hit.end(), [](int x) { return x == 1; }));
}

}  // namespace

TEST_CASE("enumerate small groups") {
  CHECK(c2()->order() == 2);
  CHECK(c3()->order() == 3);
  auto g = s3();
  CHECK(g->order() == 6);
  std::vector<oracle::Flat> gens;
  for (const auto& m : g->generators()) gens.push_back(flat(m));
  auto brute = oracle::closure(gens, 2, 3);
  CHECK(brute.size() == 6);
  for (std::size_t i = 0; i < g->order(); ++i) CHECK(brute.count(flat(g->element(i))) == 1);
  check_words(g);
  check_words(klein());
}

TEST_CASE("swap and unipotent over F_3 generate a group of order 48") {
  auto g = GroupTable::enumerate({Matrix::from_rows({{0, 1}, {1, 0}}, 3), Matrix::from_rows({{1, 1}, {0, 1}}, 3)});
  CHECK(g->order() == 48);
  auto brute = oracle::closure({{0, 1, 1, 0}, {1, 1, 0, 1}}, 2, 3);
  CHECK(brute.size() == 48);
}

TEST_CASE("enumerate errors") {
  try {
    (void)GroupTable::enumerate({Matrix::from_rows({{1, 1}, {1, 1}}, 2)});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }
  try {
    (void)GroupTable::enumerate({Matrix::from_rows({{0, 1}, {1, 0}}, 3), Matrix::from_rows({{1, 1}, {0, 1}}, 3)}, 20);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GroupTooLarge);
  }
}

TEST_CASE("multiplication table is consistent") {
  auto g = s3();
  for (std::size_t a = 0; a < g->order(); ++a) {
    CHECK(g->multiply(a, g->inverse(a)) == 0);
    for (std::size_t b = 0; b < g->order(); ++b)
      CHECK(g->element(g->multiply(a, b)) == g->element(a) * g->element(b));
  }
}

TEST_CASE("sylow subgroups") {
  auto g = c2();
  CHECK(sylow_subgroup(g, 2).order() == 2);
  auto s = s3();
  auto p3 = sylow_subgroup(s, 3);
  CHECK(p3.order() == 3);
  CHECK(normalizer(s, p3).order() == 6);
  auto p2 = sylow_subgroup(s, 2);
  CHECK(p2.order() == 2);
  CHECK(normalizer(s, p2) == p2);
  // brute-force scan: three subgroups of order 2, one per involution
  std::size_t involutions = 0;
  for (std::size_t x = 1; x < s->order(); ++x) involutions += s->element_order(x) == 2;
  CHECK(involutions == 3);
  CHECK(sylow_subgroup(c3(), 2).order() == 1);
}

TEST_CASE("maximal subgroups of p-groups") {
  CHECK(maximal_p_subgroups(whole_group(c2())).size() == 1);
  CHECK(maximal_p_subgroups(whole_group(c2()))[0].order() == 1);
  CHECK(maximal_p_subgroups(whole_group(c3())).size() == 1);
  auto v = klein();
  auto maxes = maximal_p_subgroups(whole_group(v));
  CHECK(maxes.size() == 3);
  std::set<std::vector<bool>> distinct;
  for (const auto& m : maxes) {
    CHECK(m.order() == 2);
    distinct.insert(m.members());
  }
  CHECK(distinct.size() == 3);
  for (std::size_t x = 1; x < v->order(); ++x) {
    bool covered = false;
    for (const auto& m : maxes) covered = covered || m.contains(x);
    CHECK(covered);
  }
  try {
    (void)maximal_p_subgroups(whole_group(s3()));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }
}

TEST_CASE("coset representatives") {
  auto g = c3();
  CHECK(coset_reps(g, whole_group(g)) == std::vector<std::size_t>{0});
  CHECK(coset_reps(g, trivial_subgroup(g)).size() == 3);
  auto s = s3();
  CHECK(coset_reps(s, sylow_subgroup(s, 3)).size() == 2);
  check_partition(s, sylow_subgroup(s, 3));
  check_partition(s, sylow_subgroup(s, 2));
  auto v = klein();
  check_partition(v, maximal_p_subgroups(whole_group(v))[1]);
}

TEST_CASE("normalizer of abelian group is everything") {
  auto v = klein();
  for (const auto& m : maximal_p_subgroups(whole_group(v))) CHECK(normalizer(v, m).order() == 4);
}

TEST_CASE("subgroup checks and p-subgroup listing") {
  auto s = s3();
  std::vector<bool> bad(s->order(), false);
  bad[0] = true;
  bad[1] = true;
  bad[2] = true;
  bad[3] = true;
  CHECK_THROWS_AS(check_subgroup(Subgroup(s, bad)), Error);
  auto subs = all_p_subgroups(s);
  // 1, three of order 2 are not 3-subgroups; p = 3 gives {1, C3}
  CHECK(subs.size() == 2);
  for (const auto& h : subs) CHECK(s->order() % h.order() == 0);
}

TEST_CASE("subgroup tables embed in the parent") {
  auto s = s3();
  auto st = subgroup_table(sylow_subgroup(s, 3));
  CHECK(st.table->order() == 3);
  for (std::size_t i = 0; i < st.table->order(); ++i) CHECK(st.table->element(i) == s->element(st.to_parent[i]));
}
