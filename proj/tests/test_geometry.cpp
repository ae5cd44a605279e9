#include <doctest.h>

#include <random>

#include "modinv/geometry.hpp"
#include "oracle/dickson.hpp"
#include "oracle/sympow.hpp"
#include "support.hpp"

using namespace modinv;
using namespace fixtures;

namespace {

oracle::SparsePoly to_sparse(const Poly& f) {
  oracle::SparsePoly out;
  for (const auto& [e, c] : f.terms()) out[std::vector<int>(e.begin(), e.end())] = c;
  return out;
}

Poly var(std::size_t n, Scalar p, std::size_t i) { return Poly::variable(n, p, i); }

/// Free module over k[y_1..y_r] (degrees ds) on generators in degrees gs.
/// With `killed`, the first parameter acts by zero and drops out of the basis,
/// giving k[y_2..y_r] as a module over all r parameters.
GradedModule free_module(const std::vector<std::size_t>& ds, const std::vector<std::size_t>& gs, std::size_t D,
                         bool killed = false) {
  const Scalar p = 2;
  const std::size_t r = ds.size();
  using Key = std::pair<std::size_t, std::vector<std::size_t>>;
  std::vector<std::vector<Key>> basis(D + 1);
  std::vector<std::size_t> cur(r, 0);
  auto rec = [&](auto&& self, std::size_t i, std::size_t g, std::size_t deg) -> void {
    if (i == r) {
      basis[deg].push_back({g, cur});
      return;
    }
    for (std::size_t a = 0; deg + a * ds[i] <= D; ++a) {
      if (killed && i == 0 && a > 0) break;
      cur[i] = a;
      self(self, i + 1, g, deg + a * ds[i]);
    }
    cur[i] = 0;
  };
  for (std::size_t g = 0; g < gs.size(); ++g)
    if (gs[g] <= D) rec(rec, 0, g, gs[g]);
  GradedModule m;
  m.max_degree = D;
  for (std::size_t t = 0; t <= D; ++t) m.dims.push_back(basis[t].size());
  m.action.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    m.params.push_back({Poly(1, p), ds[i], "y" + std::to_string(i + 1)});
    for (std::size_t t = 0; t + ds[i] <= D; ++t) {
      Matrix a(m.dims[t + ds[i]], m.dims[t], p);
      for (std::size_t c = 0; c < basis[t].size(); ++c) {
        if (killed && i == 0) continue;
        Key k = basis[t][c];
        ++k.second[i];
        auto it = std::find(basis[t + ds[i]].begin(), basis[t + ds[i]].end(), k);
        REQUIRE(it != basis[t + ds[i]].end());
        a(static_cast<std::size_t>(it - basis[t + ds[i]].begin()), c) = 1;
      }
      m.action[i].push_back(std::move(a));
    }
  }
  return m;
}

std::vector<std::size_t> oracle_invariant_dims(const GroupPtr& g, int D) {
  std::vector<std::size_t> out;
  for (int d = 0; d <= D; ++d) {
    std::vector<oracle::Mat> gens;
    for (const auto& a : g->generators()) gens.push_back(oracle::sym_power(to_oracle(a), d, g->p()));
    out.push_back(oracle::fixed_dim(gens, g->p()));
  }
  return out;
}

}  // namespace

TEST_CASE("dickson invariants against the product of all linear forms") {
  struct Case {
    std::size_t n;
    Scalar p;
  };
  for (auto [n, p] : {Case{1, 2}, Case{1, 3}, Case{1, 5}, Case{2, 2}, Case{2, 3}, Case{3, 2}}) {
    CAPTURE(n);
    CAPTURE(p);
    auto ds = dickson(n, p);
    auto oc = oracle::dickson_coefficients(static_cast<int>(n), p);
    REQUIRE(ds.params.size() == n);
    std::size_t q = 1, pi = 1;
    for (std::size_t i = 0; i < n; ++i) q *= p;
    for (std::size_t i = 0; i < n; ++i, pi *= p) {
      const auto& c = ds.params[i];
      CHECK(c.degree == q - pi);
      CHECK(c.poly.is_homogeneous());
      // c_{n,i} = (-1)^{n-i} [X^{p^i}]
      Poly expect = (n - i) % 2 == 0 ? c.poly : c.poly.scaled(p - 1);
      CHECK(to_sparse(expect) == oc[i]);
    }
  }
  auto d1 = dickson(1, 3);
  CHECK(d1.params[0].poly == var(1, 3, 0).pow(2));
  auto d2 = dickson(2, 2);
  Poly x = var(2, 2, 0), y = var(2, 2, 1);
  CHECK(d2.params[1].poly == x * x + x * y + y * y);
  CHECK(d2.params[0].poly == x * x * y + x * y * y);
  CHECK_THROWS_AS(dickson(9, 3), Error);
}

TEST_CASE("dickson invariants are fixed by random invertible matrices") {
  std::mt19937_64 rng(7);
  struct Case {
    std::size_t n;
    Scalar p;
  };
  for (auto [n, p] : {Case{2, 3}, Case{3, 2}, Case{2, 5}}) {
    auto ds = dickson(n, p);
    std::size_t found = 0;
    while (found < 8) {
      Matrix a(n, n, p);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<Scalar>(rng() % p);
      if (determinant(a) == 0) continue;
      ++found;
      for (const auto& c : ds.params) CHECK(substitute(c.poly, a) == c.poly);
    }
  }
}

TEST_CASE("restricted parameters") {
  auto c3 = c3_j2();
  Subgroup syl = sylow_subgroup(c3, 3);
  Matrix w = fixed_points(syl);
  REQUIRE(w.cols() == 1);
  auto ps = restricted_parameters(syl);
  REQUIRE(ps.params.size() == 1);
  CHECK(ps.provenance == "norm");
  Poly x = var(2, 3, 0), y = var(2, 3, 1);
  CHECK(ps.params[0].degree == 3);
  CHECK(ps.params[0].poly == y.pow(3) - x * x * y);
  Poly r = restrict_to_span(ps.params[0].poly, w);
  CHECK(r.degree() == 3);
  CHECK(r.terms().size() == 1);

  auto full = restricted_parameters(trivial_subgroup(c3));
  CHECK(full.provenance == "dickson");
  CHECK(full.params.size() == 2);

  auto c2 = c2_swap();
  auto pc2 = restricted_parameters(sylow_subgroup(c2, 2));
  REQUIRE(pc2.params.size() == 1);
  Poly a = var(2, 2, 0), b = var(2, 2, 1);
  CHECK(pc2.params[0].poly == a * b);
  Poly rb = restrict_to_span(pc2.params[0].poly, fixed_points(sylow_subgroup(c2, 2)));
  CHECK(rb == var(1, 2, 0).pow(2));

  auto three = copies_of({{1, 1}, {0, 1}}, 3, 3);
  auto p3 = restricted_parameters(sylow_subgroup(three, 3));
  CHECK(p3.params.size() == 3);
  for (const auto& t : p3.params) CHECK(t.degree == 3);

  CHECK_THROWS_AS(restricted_parameters(whole_group(s3_f3())), Error);
}

TEST_CASE("default parameters are certified invariant systems") {
  struct Case {
    GroupPtr g;
    std::vector<std::size_t> degrees;
  };
  for (auto& [g, degrees] : {Case{c2_swap(), {1, 2}}, Case{c3_j2(), {1, 3}},
                             Case{copies_of({{0, 1}, {1, 0}}, 2, 2), {1, 1, 2, 2}}, Case{s3_f3(), {2, 3}}}) {
    auto ps = default_parameters(g);
    CAPTURE(ps.degrees().size());
    CHECK(ps.degrees() == degrees);
    std::vector<Poly> fs;
    for (const auto& y : ps.params) {
      CHECK(is_invariant(y.poly, *g));
      fs.push_back(y.poly);
    }
    CHECK(is_system_of_parameters(fs));
  }
  // x^2 and xy both vanish on the line x = 0.
  auto x = var(2, 2, 0), y = var(2, 2, 1);
  CHECK_FALSE(is_system_of_parameters({x * x, x * y}));
  CHECK(is_system_of_parameters({x * x, y * y}));
}

TEST_CASE("series fit and krull dimension") {
  auto c2 = oracle_invariant_dims(c2_swap(), 14);
  auto f2 = series_fit(c2, {1, 2});
  REQUIRE(f2.status == FitStatus::Ok);
  CHECK(f2.series.numerator == std::vector<long long>{1});
  CHECK(krull_dim(f2.series) == 2);

  auto c3 = oracle_invariant_dims(c3_j2(), 14);
  auto f3 = series_fit(c3, {1, 3});
  REQUIRE(f3.status == FitStatus::Ok);
  CHECK(f3.series.numerator == std::vector<long long>{1});
  CHECK(f3.series.to_string() == "(1)/((1-t)*(1-t^3))");

  CHECK(series_fit(c2, {1}).status == FitStatus::NoFit);
  CHECK(series_fit({1, 1}, {3}).status == FitStatus::Inconclusive);

  RationalSeries brauer{{1, 1}, {3}, 10};
  CHECK(krull_dim(brauer) == 1);
  RationalSeries three{{1, 0, 3}, {3, 3, 3}, 12};
  CHECK(krull_dim(three) == 3);
  CHECK(three.to_string() == "(1+3t^2)/((1-t^3)^3)");
  // (1 - t^2) / (1 - t)^2 has a simple pole.
  RationalSeries cancel{{1, 0, -1}, {1, 1}, 5};
  CHECK(krull_dim(cancel) == 1);
  CHECK_FALSE(krull_dim(RationalSeries{{}, {1}, 5}).has_value());

  for (std::size_t D : {2u, 5u, 9u}) {
    auto a = three.expand(D);
    std::vector<std::size_t> dims(a.begin(), a.end());
    auto fit = series_fit(dims, {3, 3, 3});
    if (D < 3) {
      CHECK(fit.status == FitStatus::Inconclusive);
    } else {
      REQUIRE(fit.status == FitStatus::Ok);
      CHECK(fit.series.numerator == three.numerator);
    }
  }
}

TEST_CASE("koszul depth of free modules equals the number of parameters") {
  auto m = free_module({1, 2}, {0}, 8);
  auto c = koszul_depth(m);
  REQUIRE(c.depth.has_value());
  CHECK(*c.depth == 2);
  CHECK(c.certified);
  CHECK(c.window_total(1) == 0);
  CHECK(c.window_total(2) == 0);
  CHECK(c.window_total(0) == 1);

  auto m3 = free_module({1, 2, 3}, {0, 1, 1, 4}, 14);
  auto c3 = koszul_depth(m3);
  CHECK(c3.depth == 3);
  CHECK(c3.window_total(0) == 4);
  CHECK(regular_prefix(m3, 14) == 3);

  // k[y1, y2] / (y1) has depth one.
  auto q = free_module({1, 1}, {0}, 8, true);
  auto cq = koszul_depth(q);
  CHECK(cq.depth == 1);
  CHECK(cq.window_total(1) > 0);
  CHECK(regular_prefix(q, 8) == 0);

  CHECK_THROWS_AS(koszul_depth(m, 6), Error);
  CHECK_THROWS_AS(koszul_depth(m, 9), Error);
}

TEST_CASE("koszul depth of invariant rings and functor modules") {
  auto c2 = c2_swap();
  GradedEngine e(c2);
  Poly a = var(2, 2, 0) + var(2, 2, 1), b = var(2, 2, 0) * var(2, 2, 1);
  auto inv = multiplicity_module(e, GModule::trivial(c2), FunctorTag::Invariants, {{a, 1, "a"}, {b, 2, "b"}}, 8);
  auto ci = koszul_depth(inv);
  CHECK(ci.depth == 2);
  CHECK(ci.window_total(0) == 1);

  // Tate cohomology of a projective vanishes, so its depth is undefined.
  auto tate = multiplicity_module(e, GModule::regular(c2), FunctorTag::Tate, {{a, 1, "a"}, {b, 2, "b"}}, 8);
  CHECK_FALSE(koszul_depth(tate).depth.has_value());

  // The transfer image of two copies of the swap: dimension 4, depth 3.
  auto g = copies_of({{0, 1}, {1, 0}}, 2, 2);
  GradedEngine e2(g);
  std::vector<Parameter> ps;
  for (std::size_t c = 0; c < 2; ++c) {
    Poly u = var(4, 2, 2 * c), v = var(4, 2, 2 * c + 1);
    ps.push_back({u + v, 1, "a" + std::to_string(c + 1)});
    ps.push_back({u * v, 2, "b" + std::to_string(c + 1)});
  }
  auto tr = multiplicity_module(e2, GModule::trivial(g), FunctorTag::TransferIdeal, ps, 12);
  auto fit = series_fit(tr.dims, {1, 2, 1, 2});
  REQUIRE(fit.status == FitStatus::Ok);
  CHECK(krull_dim(fit.series) == 4);
  auto ct = koszul_depth(tr);
  CHECK(ct.depth == 3);
  CHECK(ct.window_total(1) > 0);
  for (std::size_t j = 2; j <= 4; ++j) CHECK(ct.window_total(j) == 0);
  CHECK(*ct.depth <= *krull_dim(fit.series));
  // An ideal in a domain: the first parameter is a non-zero-divisor.
  CHECK(regular_prefix(tr, 12) >= 1);
}

TEST_CASE("multigraded transfer ideal agrees with the single grading") {
  auto g = copies_of({{0, 1}, {1, 0}}, 2, 2);
  GradedEngine e(g);
  std::vector<Parameter> ps;
  for (std::size_t c = 0; c < 2; ++c) {
    Poly u = var(4, 2, 2 * c), v = var(4, 2, 2 * c + 1);
    ps.push_back({u + v, 1, "a" + std::to_string(c + 1)});
    ps.push_back({u * v, 2, "b" + std::to_string(c + 1)});
  }
  auto single = multiplicity_module(e, GModule::trivial(g), FunctorTag::TransferIdeal, ps, 12);
  auto multi = transfer_ideal_multigraded(g, ps, 12);
  CHECK(multi.total_dims() == single.dims);
  auto cs = koszul_depth(single);
  auto cm = koszul_depth(multi);
  CHECK(cm.depth == cs.depth);
  CHECK(cm.homology == cs.homology);
  CHECK(cm.certified == cs.certified);

  // A parameter mixing the blocks is rejected.
  std::vector<Parameter> mixed{{var(4, 2, 0) + var(4, 2, 1) + var(4, 2, 2) + var(4, 2, 3), 1, "s"}};
  CHECK_THROWS_AS(transfer_ideal_multigraded(g, mixed, 6), Error);
}
