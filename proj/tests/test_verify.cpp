#include <doctest.h>

#include "modinv/verify.hpp"
#include "support.hpp"

using namespace modinv;
using namespace fixtures;

namespace {

const Check& find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  FAIL("missing check " << name);
  throw 0;
}

std::string finding(const Report& r, const std::string& key) {
  for (const auto& [k, v] : r.findings)
    if (k == key) return v;
  FAIL("missing finding " << key);
  return {};
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST_CASE("transfer inclusion holds for the three subgroup classes") {
  for (auto g : {c2_swap(), c3_j2(), s3_f3()}) {
    auto r = verify_inclusion_suite(g, 15);
    CHECK(r.checks.size() == 3);
    CHECK(r.passed());
    CHECK(r.count(Verdict::Inconclusive) == 0);
  }
}

TEST_CASE("sylow conjugates") {
  CHECK(sylow_conjugates(c3_j2()).size() == 1);
  CHECK(sylow_conjugates(s3_f3()).size() == 1);  // the 3-Sylow is normal
  auto k = sylow_conjugates(klein());
  CHECK(k.size() == 1);
  CHECK(k[0].order() == 4);
}

TEST_CASE("equivalence diagram for C2 swap") {
  GradedEngine e(c2_swap());
  auto r = verify_equiv_diagram(e, 10);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.verdict == Verdict::Pass, c.name);
  // R / T = k[xy]: the transfer image is generated by x + y.
  CHECK(finding(r, "dims.brauer") == "1,0,1,0,1,0,1,0,1,0,1");
}

TEST_CASE("equivalence diagram for C3: the fixed-point comparison is not onto") {
  GradedEngine e(c3_j2());
  auto r = verify_equiv_diagram(e, 9);
  const auto& s = find_check(r, "iota5.surjective");
  CHECK(s.verdict == Verdict::Fail);
  REQUIRE(!s.witness.empty());
  CHECK(s.witness[0].second == "1");
  // Degree one: T = 0 so the fixed part of S/ST is spanned by x0, which lies
  // in I, while x1 is fixed modulo I.
  CHECK(starts_with(finding(r, "dims.(S/I)^G"), "1,1,"));
  CHECK(find_check(r, "iota5.p-power").verdict == Verdict::Pass);
  CHECK(find_check(r, "iota5.nilpotent-kernel").verdict == Verdict::Pass);
  for (const auto& c : r.checks)
    if (c.name != "iota5.surjective") CHECK_MESSAGE(c.verdict == Verdict::Pass, c.name);
}

TEST_CASE("mackey bound for S3") {
  auto g = s3_f3();
  GModule sign(g, {Matrix::identity(1, 3), Matrix::from_rows({{2}}, 3)}, "sign");
  auto r = verify_mackey(g, {GModule::trivial(g), sign, GModule::forms(g)}, 8);
  CHECK(r.checks.size() == 3);
  CHECK(r.passed());
  // Invariants of S3 on F3^2 start in degree 0 and then at degree 2.
  CHECK(starts_with(finding(r, "dims.hom[k]"), "1,0,1"));
}

TEST_CASE("depth bounds: the trivial module over C3") {
  auto g = c3_j2();
  GradedEngine e(g);
  auto r = verify_depth_bounds(e, GModule::trivial(g), 14);
  CHECK(r.passed());
  CHECK(finding(r, "brauer.krull") == "1");
  CHECK(starts_with(finding(r, "brauer.depth"), "1"));
  CHECK(find_check(r, "brauer.cohen-macaulay").verdict == Verdict::Pass);
  CHECK(find_check(r, "hom.depth").verdict == Verdict::Pass);
}

TEST_CASE("depth bounds: the projective module over C2") {
  auto g = c2_swap();
  GradedEngine e(g);
  auto r = verify_depth_bounds(e, GModule::forms(g), 12);
  CHECK(r.passed());
  CHECK(finding(r, "vertex order") == "1");
  CHECK(find_check(r, "projective.dimension").verdict == Verdict::Pass);
  CHECK(find_check(r, "projective.depth").verdict == Verdict::Pass);
  CHECK(finding(r, "tate.krull") == "undefined");
}

TEST_CASE("summand algebra for three copies of the C3 Jordan block") {
  auto g = copies_of({{1, 1}, {0, 1}}, 3, 3);
  GradedEngine e(g);
  ParameterSystem ps{{}, "user"};
  for (std::size_t j : {1, 3, 5})
    ps.params.push_back({orbit_product(Poly::variable(6, 3, j), *g), 3, "d" + std::to_string(j / 2 + 1)});
  auto r = verify_summand(e, 15, ps);
  CHECK(find_check(r, "algebra.structure").verdict == Verdict::Pass);
  CHECK(finding(r, "algebra.krull") == "3");
  CHECK(starts_with(finding(r, "algebra.depth"), "3"));
  CHECK(r.passed());
  CHECK(finding(r, "algebra.series") == "(1+3t^2)/((1-t^3)^3)");
}

