#include "modinv/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "modinv/parallel.hpp"

namespace modinv {

std::vector<std::size_t> ParameterSystem::degrees() const {
  std::vector<std::size_t> d;
  for (const auto& y : params) d.push_back(y.degree);
  return d;
}

ParameterSystem dickson(std::size_t n, Scalar p, std::size_t cap) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidInput, "characteristic must be prime");
  if (n == 0) throw Error(ErrorCode::InvalidInput, "dickson invariants need n >= 1");
  std::size_t q = 1;
  for (std::size_t i = 0; i < n; ++i) {
    q *= p;
    if (q > cap) throw Error(ErrorCode::CapExceeded, "p^n exceeds the Dickson cap " + std::to_string(cap));
  }
  // c[i] is the coefficient of X^{p^i}.
  std::vector<Poly> c{Poly::constant(n, p, 1)};
  for (std::size_t k = 0; k < n; ++k) {
    Poly u(n, p);
    Poly xk = Poly::variable(n, p, k);
    Poly xpow = xk;
    for (std::size_t i = 0; i < c.size(); ++i) {
      u = u + c[i] * xpow;
      xpow = xpow.frobenius();
    }
    Poly up = u.pow(p - 1);
    std::vector<Poly> next(c.size() + 1, Poly(n, p));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] = next[i + 1] + c[i].frobenius();
      next[i] = next[i] - up * c[i];
    }
    c = std::move(next);
  }
  ParameterSystem out;
  out.provenance = "dickson";
  std::size_t pi = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Poly f = (n - i) % 2 == 0 ? c[i] : c[i].scaled(p - 1);
    out.params.push_back({f, q - pi, "c" + std::to_string(n) + "," + std::to_string(i)});
    pi *= p;
  }
  return out;
}

Matrix fixed_points(const Subgroup& h) {
  const auto& g = h.parent();
  const std::size_t n = g->n();
  const Scalar p = g->p();
  const auto gens = h.generating_set();
  if (gens.empty()) return Matrix::identity(n, p);
  Matrix eq(0, n, p);
  for (auto s : gens) eq = vstack(eq, g->element(s).transpose() - Matrix::identity(n, p));
  auto ns = nullspace(eq);
  return Matrix::from_columns(ns, n, p);
}

Poly restrict_to_span(const Poly& f, const Matrix& w) {
  if (w.rows() != f.nvars()) throw Error(ErrorCode::DimensionMismatch, "restriction basis has the wrong length");
  return substitute(f, w.transpose());
}

namespace {

Matrix ideal_span(const std::vector<Poly>& fs, std::size_t m, std::size_t s) {
  MonomialBasis to(m, s);
  Matrix acc(to.size(), 0, fs.empty() ? 2 : fs[0].p());
  for (const auto& f : fs) {
    const auto d = static_cast<std::size_t>(f.degree());
    if (d > s) continue;
    acc = hstack(acc, multiplication_matrix(f, MonomialBasis(m, s - d), to));
  }
  return acc;
}

/// Coefficients of prod (1 - t^{d_i}) / (1 - t)^m up to degree s.
std::vector<long long> complete_intersection_series(const std::vector<std::size_t>& ds, std::size_t m, std::size_t s) {
  std::vector<long long> h(s + 1, 0);
  for (std::size_t t = 0; t <= s; ++t) h[t] = m == 0 ? (t == 0) : static_cast<long long>(binomial(t + m - 1, m - 1));
  for (auto d : ds)
    for (std::size_t t = s + 1; t-- > d;) h[t] -= h[t - d];
  return h;
}

/// Hilbert function of k[t_1..t_m]/(fs) agrees with a complete intersection
/// up to degree `upto`.
bool looks_regular(const std::vector<Poly>& fs, std::size_t m, std::size_t upto) {
  std::vector<std::size_t> ds;
  for (const auto& f : fs) ds.push_back(static_cast<std::size_t>(f.degree()));
  auto expect = complete_intersection_series(ds, m, upto);
  for (std::size_t s = 1; s <= upto; ++s) {
    const auto full = binomial(s + m - 1, m - 1);
    const long long got = static_cast<long long>(full - rank(ideal_span(fs, m, s)));
    if (got != std::max(expect[s], 0ll)) return false;
  }
  return true;
}

std::vector<Poly> norm_candidates(const GroupPtr& g) {
  const std::size_t n = g->n();
  const Scalar p = g->p();
  std::vector<Poly> forms;
  for (std::size_t j = 0; j < n; ++j) forms.push_back(Poly::variable(n, p, j));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) forms.push_back(Poly::variable(n, p, i) + Poly::variable(n, p, j));
  std::vector<Poly> out;
  for (const auto& f : forms) {
    Poly nf = orbit_product(f, *g);
    if (std::find(out.begin(), out.end(), nf) == out.end()) out.push_back(std::move(nf));
  }
  std::stable_sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) { return a.degree() < b.degree(); });
  return out;
}

/// Greedy choice of m norms whose restrictions to span(w) form a system of
/// parameters; empty when none is found.
std::optional<ParameterSystem> norm_system(const GroupPtr& g, const Matrix& w) {
  const std::size_t m = w.cols();
  std::vector<Poly> chosen_r;
  ParameterSystem ps;
  ps.provenance = "norm";
  for (const auto& f : norm_candidates(g)) {
    if (chosen_r.size() == m) break;
    Poly r = restrict_to_span(f, w);
    if (r.is_zero()) continue;
    auto trial = chosen_r;
    trial.push_back(r);
    std::size_t upto = 1;
    for (const auto& t : trial) upto += static_cast<std::size_t>(t.degree()) - 1;
    if (!looks_regular(trial, m, upto)) continue;
    chosen_r = std::move(trial);
    ps.params.push_back({f, static_cast<std::size_t>(f.degree()), ""});
  }
  if (chosen_r.size() != m || !is_system_of_parameters(chosen_r)) return std::nullopt;
  for (std::size_t i = 0; i < ps.params.size(); ++i) ps.params[i].name = "n" + std::to_string(i + 1);
  return ps;
}

ParameterSystem dickson_restricted(const GroupPtr& g, const Matrix& w) {
  const std::size_t n = g->n(), m = w.cols();
  auto full = dickson(n, g->p());
  ParameterSystem ps;
  ps.provenance = "dickson";
  std::vector<Poly> rs;
  for (std::size_t i = n - m; i < n; ++i) {
    ps.params.push_back(full.params[i]);
    rs.push_back(restrict_to_span(full.params[i].poly, w));
  }
  if (!is_system_of_parameters(rs))
    throw Error(ErrorCode::CertificationFailure, "restricted Dickson invariants are not a system of parameters");
  return ps;
}

}  // namespace

bool is_system_of_parameters(const std::vector<Poly>& fs) {
  if (fs.empty()) return true;
  const std::size_t m = fs[0].nvars();
  if (fs.size() != m) return false;
  std::size_t top = 1;
  for (const auto& f : fs) {
    if (f.is_zero() || !f.is_homogeneous() || f.degree() < 1) return false;
    top += static_cast<std::size_t>(f.degree()) - 1;
  }
  return rank(ideal_span(fs, m, top)) == binomial(top + m - 1, m - 1);
}

ParameterSystem restricted_parameters(const Subgroup& h) {
  const auto& g = h.parent();
  if (!is_p_group(h, g->p())) throw Error(ErrorCode::NotPGroup, "restricted parameters need a p-subgroup");
  Matrix w = fixed_points(h);
  if (w.cols() == 0) return {{}, "norm"};
  if (h.order() == 1) {
    try {
      return dickson_restricted(g, w);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::CapExceeded) throw;
    }
  }
  if (auto ps = norm_system(g, w)) return *ps;
  return dickson_restricted(g, w);
}

ParameterSystem default_parameters(const GroupPtr& g) {
  Matrix w = Matrix::identity(g->n(), g->p());
  if (auto ps = norm_system(g, w)) return *ps;
  return dickson_restricted(g, w);
}

// ---------------------------------------------------------------------------

std::vector<long long> RationalSeries::expand(std::size_t D) const {
  std::vector<long long> a(D + 1, 0);
  for (std::size_t i = 0; i < numerator.size() && i <= D; ++i) a[i] = numerator[i];
  for (auto e : denominator)
    for (std::size_t t = e; t <= D; ++t) a[t] += a[t - e];
  return a;
}

namespace {

std::string poly_in_t(const std::vector<long long>& c) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    long long v = c[i];
    if (v == 0) continue;
    if (!first) os << (v < 0 ? "-" : "+");
    else if (v < 0) os << "-";
    long long a = v < 0 ? -v : v;
    if (i == 0 || a != 1) os << a;
    if (i >= 1) os << "t";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace

std::string RationalSeries::to_string() const {
  std::string num = poly_in_t(numerator);
  if (denominator.empty()) return num;
  std::map<std::size_t, std::size_t> counts;
  for (auto e : denominator) ++counts[e];
  std::ostringstream os;
  os << "(" << num << ")/(";
  bool first = true;
  for (auto [e, k] : counts) {
    if (!first) os << "*";
    os << "(1-t";
    if (e > 1) os << "^" << e;
    os << ")";
    if (k > 1) os << "^" << k;
    first = false;
  }
  os << ")";
  return os.str();
}

std::string fit_status_name(FitStatus s) {
  switch (s) {
    case FitStatus::Ok: return "ok";
    case FitStatus::NoFit: return "no-fit";
    case FitStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

FitResult series_fit(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& denominator) {
  FitResult r;
  if (dims.empty()) {
    r.status = FitStatus::Inconclusive;
    r.message = "empty dimension sequence";
    return r;
  }
  for (auto e : denominator)
    if (e == 0) throw Error(ErrorCode::InvalidInput, "denominator exponents must be positive");
  const std::size_t D = dims.size() - 1;
  std::size_t L = 1;
  for (auto e : denominator) L = std::max(L, e);
  std::vector<long long> num(dims.begin(), dims.end());
  for (auto e : denominator)
    for (std::size_t t = D + 1; t-- > e;) num[t] -= num[t - e];
  if (D + 1 <= L) {
    r.status = FitStatus::Inconclusive;
    r.message = "window of " + std::to_string(D + 1) + " degrees is too short for a tail of " + std::to_string(L);
    return r;
  }
  for (std::size_t t = D + 1 - L; t <= D; ++t)
    if (num[t] != 0) {
      r.status = FitStatus::NoFit;
      r.message = "numerator does not vanish on degrees " + std::to_string(D + 1 - L) + ".." + std::to_string(D);
      return r;
    }
  while (!num.empty() && num.back() == 0) num.pop_back();
  r.status = FitStatus::Ok;
  r.series.numerator = std::move(num);
  r.series.denominator = denominator;
  r.series.window = D;
  auto back = r.series.expand(D);
  for (std::size_t t = 0; t <= D; ++t)
    if (back[t] != static_cast<long long>(dims[t]))
      throw Error(ErrorCode::InternalError, "series fit does not reproduce its input");
  return r;
}

std::optional<std::size_t> krull_dim(const RationalSeries& s) {
  std::vector<long long> c = s.numerator;
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (c.empty()) return std::nullopt;
  std::size_t order = 0;
  for (;;) {
    long long at1 = std::accumulate(c.begin(), c.end(), 0ll);
    if (at1 != 0) break;
    // Divide by (t - 1): q_{i-1} = c_i + q_i, from the top.
    std::vector<long long> q(c.size() - 1, 0);
    long long carry = 0;
    for (std::size_t i = c.size(); i-- > 1;) {
      carry += c[i];
      q[i - 1] = carry;
    }
    c = std::move(q);
    ++order;
  }
  return s.denominator.size() - order;
}

// ---------------------------------------------------------------------------

std::size_t DepthCertificate::window_total(std::size_t j) const {
  std::size_t s = 0;
  for (std::size_t t = 0; t <= window && t < homology[j].size(); ++t) s += homology[j][t];
  return s;
}

namespace {

/// Subsets of {0..r-1} of size j, as sorted index lists, in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t r, std::size_t j) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == j) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < r; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

struct KoszulDegree {
  std::vector<std::size_t> dims;   // dim K_j(t)
  std::vector<std::size_t> ranks;  // rank of d_j : K_j -> K_{j-1}, ranks[0] = 0
};

}  // namespace

DepthCertificate koszul_depth(const GradedModule& m, std::size_t D, std::size_t slack, std::size_t threads) {
  const std::size_t r = m.params.size();
  if (m.action.size() != r) throw Error(ErrorCode::InvalidInput, "parameter actions are missing");
  if (D > m.max_degree) throw Error(ErrorCode::InvalidInput, "depth degree beyond the module truncation");
  std::size_t total = 0;
  for (const auto& y : m.params) total += y.degree;
  if (D < total + slack)
    throw Error(ErrorCode::InvalidInput, "koszul window needs D >= " + std::to_string(total + slack));
  for (std::size_t i = 0; i < r; ++i)
    if (m.action[i].size() + m.params[i].degree < D + 1)
      throw Error(ErrorCode::InvalidInput, "parameter action is missing in some degree");
  const Scalar p = [&] {
    for (const auto& a : m.action)
      for (const auto& x : a) return x.p();
    return m.params.empty() ? Scalar{2} : m.params[0].poly.p();
  }();

  std::vector<std::vector<std::vector<std::size_t>>> subs(r + 1);
  for (std::size_t j = 0; j <= r; ++j) subs[j] = subsets(r, j);
  auto weight = [&](const std::vector<std::size_t>& s) {
    std::size_t w = 0;
    for (auto i : s) w += m.params[i].degree;
    return w;
  };

  std::vector<KoszulDegree> kd(D + 1);
  parallel_for(D + 1, threads, [&](std::size_t t) {
    KoszulDegree& out = kd[t];
    out.dims.assign(r + 1, 0);
    out.ranks.assign(r + 2, 0);
    // Offsets of each subset block inside K_j(t).
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> offset(r + 1);
    for (std::size_t j = 0; j <= r; ++j)
      for (const auto& s : subs[j]) {
        const std::size_t w = weight(s);
        if (w > t) continue;
        offset[j][s] = out.dims[j];
        out.dims[j] += m.dims[t - w];
      }
    for (std::size_t j = 1; j <= r; ++j) {
      if (out.dims[j] == 0 || out.dims[j - 1] == 0) continue;
      Matrix dj(out.dims[j - 1], out.dims[j], p);
      for (const auto& [s, col] : offset[j]) {
        const std::size_t src = t - weight(s);
        for (std::size_t k = 0; k < s.size(); ++k) {
          auto face = s;
          face.erase(face.begin() + static_cast<long>(k));
          const Matrix& a = m.action[s[k]][src];
          Matrix blk = k % 2 == 0 ? a : a.scaled(p - 1);
          dj.set_block(offset[j - 1].at(face), col, blk);
        }
      }
      out.ranks[j] = rank(dj);
    }
  });

  DepthCertificate cert;
  for (const auto& y : m.params) {
    cert.params.push_back(y.name);
    cert.degrees.push_back(y.degree);
  }
  cert.max_degree = D;
  cert.window = D - total;
  cert.homology.assign(r + 1, std::vector<std::size_t>(D + 1, 0));
  bool any = false, guard_clean = true;
  std::size_t top = 0;
  for (std::size_t t = 0; t <= D; ++t)
    for (std::size_t j = 0; j <= r; ++j) {
      const std::size_t h = kd[t].dims[j] - kd[t].ranks[j] - kd[t].ranks[j + 1];
      cert.homology[j][t] = h;
      if (h == 0) continue;
      any = true;
      top = std::max(top, j);
      if (t > cert.window) guard_clean = false;
    }
  if (any) cert.depth = r - top;
  cert.certified = guard_clean;
  return cert;
}

DepthCertificate koszul_depth(const GradedModule& m) { return koszul_depth(m, m.max_degree); }

std::size_t regular_prefix(const GradedModule& m, std::size_t D) {
  const std::size_t r = m.params.size();
  D = std::min(D, m.max_degree);
  for (std::size_t j = 0; j < r; ++j) {
    const std::size_t ej = m.params[j].degree;
    for (std::size_t t = 0; t + ej <= D; ++t) {
      if (m.dims[t] == 0) continue;
      const Scalar p = m.action[j][t].p();
      // Image of (y_1..y_{j-1}) in degrees t and t + e_j.
      auto image = [&](std::size_t s) {
        Matrix acc(m.dims[s], 0, p);
        for (std::size_t i = 0; i < j; ++i) {
          const std::size_t ei = m.params[i].degree;
          if (ei <= s) acc = hstack(acc, m.action[i][s - ei]);
        }
        return acc;
      };
      Matrix a = image(t), b = image(t + ej);
      const std::size_t rb = rank(b);
      const std::size_t mod_rank = rank(hstack(b, m.action[j][t])) - rb;
      if (m.dims[t] - mod_rank != rank(a)) return j;
    }
  }
  return r;
}

}  // namespace modinv

// ---------------------------------------------------------------------------

namespace modinv {

std::vector<std::size_t> MultigradedModule::total_dims() const {
  std::vector<std::size_t> out(max_degree + 1, 0);
  for (const auto& [md, d] : dims) out[std::accumulate(md.begin(), md.end(), std::size_t{0})] += d;
  return out;
}

std::optional<std::vector<std::size_t>> block_multidegree(const Poly& f, const std::vector<Block>& blocks) {
  std::optional<std::vector<std::size_t>> md;
  for (const auto& [e, c] : f.terms()) {
    std::vector<std::size_t> cur(blocks.size(), 0);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (auto v : blocks[b].vars) cur[b] += e[v];
    if (md && *md != cur) return std::nullopt;
    md = cur;
  }
  return md;
}

namespace {

void compositions(std::size_t parts, std::size_t max_total, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur(parts, 0);
  auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i == parts) {
      out.push_back(cur);
      return;
    }
    for (std::size_t a = 0; a <= left; ++a) {
      cur[i] = a;
      self(self, i + 1, left - a);
    }
    cur[i] = 0;
  };
  rec(rec, 0, max_total);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.begin(), a.end(), std::size_t{0}) < std::accumulate(b.begin(), b.end(), std::size_t{0});
  });
}

/// Coordinates of one multidegree piece: block monomials, first block slowest.
struct PieceCoords {
  const std::vector<Block>* blocks = nullptr;
  std::size_t n = 0;
  std::vector<std::vector<MonomialBasis>>* bases = nullptr;  // [block][degree]

  std::size_t size(const std::vector<std::size_t>& md) const {
    std::size_t s = 1;
    for (std::size_t b = 0; b < md.size(); ++b) s *= (*bases)[b][md[b]].size();
    return s;
  }
  Exponent exponent(const std::vector<std::size_t>& md, std::size_t idx) const {
    Exponent e(n, 0);
    for (std::size_t b = md.size(); b-- > 0;) {
      const auto& mb = (*bases)[b][md[b]];
      const auto& loc = mb[idx % mb.size()];
      idx /= mb.size();
      for (std::size_t k = 0; k < loc.size(); ++k) e[(*blocks)[b].vars[k]] = loc[k];
    }
    return e;
  }
  std::size_t index(const std::vector<std::size_t>& md, const Exponent& e) const {
    std::size_t idx = 0;
    for (std::size_t b = 0; b < md.size(); ++b) {
      const auto& blk = (*blocks)[b];
      Exponent loc(blk.vars.size());
      for (std::size_t k = 0; k < loc.size(); ++k) loc[k] = e[blk.vars[k]];
      const auto& mb = (*bases)[b][md[b]];
      idx = idx * mb.size() + mb.index(loc);
    }
    return idx;
  }
};

std::vector<std::size_t> add_md(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace

MultigradedModule transfer_ideal_multigraded(const GroupPtr& g, const std::vector<Parameter>& params, std::size_t D,
                                             std::size_t threads) {
  const Scalar p = g->p();
  const auto blocks = forms_blocks(g);
  const std::size_t nb = blocks.size();
  MultigradedModule m;
  m.max_degree = D;
  m.params = params;
  for (const auto& y : params) {
    if (!is_invariant(y.poly, *g)) throw Error(ErrorCode::InvalidInput, "parameter " + y.name + " is not invariant");
    auto md = block_multidegree(y.poly, blocks);
    if (!md || y.poly.is_zero()) throw Error(ErrorCode::InvalidInput, "parameter " + y.name + " is not block homogeneous");
    m.param_multidegree.push_back(*md);
  }
  compositions(nb, D, m.multidegrees);

  std::vector<std::vector<MonomialBasis>> bases(nb);
  // sym[b][a][x] = a-th symmetric power of element x on block b.
  std::vector<std::vector<std::vector<Matrix>>> sym(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& vars = blocks[b].vars;
    std::vector<Matrix> forms;
    for (std::size_t x = 0; x < g->order(); ++x) {
      Matrix f(vars.size(), vars.size(), p);
      for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = 0; j < vars.size(); ++j) f(i, j) = g->element(x)(vars[i], vars[j]);
      forms.push_back(std::move(f));
    }
    for (std::size_t a = 0; a <= D; ++a) {
      bases[b].emplace_back(vars.size(), a);
      std::vector<Matrix> s;
      for (const auto& f : forms) s.push_back(sym_power(f, a));
      sym[b].push_back(std::move(s));
    }
  }
  PieceCoords pc{&blocks, g->n(), &bases};

  std::vector<Matrix> basis(m.multidegrees.size());
  parallel_for(m.multidegrees.size(), threads, [&](std::size_t k) {
    const auto& md = m.multidegrees[k];
    Matrix sum(pc.size(md), pc.size(md), p);
    for (std::size_t x = 0; x < g->order(); ++x) {
      Matrix acc = Matrix::identity(1, p);
      for (std::size_t b = 0; b < nb; ++b) acc = kronecker(acc, sym[b][md[b]][x]);
      sum = sum + acc;
    }
    basis[k] = column_space(sum);
  });
  std::map<std::vector<std::size_t>, std::size_t> pos;
  for (std::size_t k = 0; k < m.multidegrees.size(); ++k) {
    pos[m.multidegrees[k]] = k;
    m.dims[m.multidegrees[k]] = basis[k].cols();
  }

  m.action.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& e = m.param_multidegree[i];
    std::vector<std::optional<Matrix>> acts(m.multidegrees.size());
    parallel_for(m.multidegrees.size(), threads, [&](std::size_t k) {
      const auto& md = m.multidegrees[k];
      auto target = add_md(md, e);
      auto it = pos.find(target);
      if (it == pos.end()) return;
      const Matrix& src = basis[k];
      const Matrix& dst = basis[it->second];
      Matrix img(pc.size(target), src.cols(), p);
      PrimeField fld(p);
      for (std::size_t c = 0; c < src.cols(); ++c)
        for (std::size_t r = 0; r < src.rows(); ++r) {
          if (!src(r, c)) continue;
          Exponent base = pc.exponent(md, r);
          for (const auto& [ex, coef] : params[i].poly.terms()) {
            Exponent sum = base;
            for (std::size_t v = 0; v < sum.size(); ++v) sum[v] = static_cast<std::uint16_t>(sum[v] + ex[v]);
            const std::size_t t = pc.index(target, sum);
            img(t, c) = fld.add(img(t, c), fld.mul(coef, src(r, c)));
          }
        }
      auto coords = solve_matrix(dst, img);
      if (!coords) throw Error(ErrorCode::InternalError, "transfer ideal is not closed under a parameter");
      acts[k] = std::move(*coords);
    });
    for (std::size_t k = 0; k < m.multidegrees.size(); ++k)
      if (acts[k]) m.action[i][m.multidegrees[k]] = std::move(*acts[k]);
  }
  return m;
}

DepthCertificate koszul_depth(const MultigradedModule& m, std::size_t slack, std::size_t threads) {
  const std::size_t r = m.params.size();
  const std::size_t D = m.max_degree;
  std::size_t total = 0;
  for (const auto& y : m.params) total += y.degree;
  if (D < total + slack)
    throw Error(ErrorCode::InvalidInput, "koszul window needs D >= " + std::to_string(total + slack));
  const Scalar p = m.params.empty() ? Scalar{2} : m.params[0].poly.p();

  std::vector<std::vector<std::vector<std::size_t>>> subs(r + 1);
  for (std::size_t j = 0; j <= r; ++j) subs[j] = subsets(r, j);
  auto shift = [&](const std::vector<std::size_t>& md, const std::vector<std::size_t>& s)
      -> std::optional<std::vector<std::size_t>> {
    auto out = md;
    for (auto i : s)
      for (std::size_t b = 0; b < out.size(); ++b) {
        if (out[b] < m.param_multidegree[i][b]) return std::nullopt;
        out[b] -= m.param_multidegree[i][b];
      }
    return out;
  };

  std::vector<KoszulDegree> kd(m.multidegrees.size());
  parallel_for(m.multidegrees.size(), threads, [&](std::size_t k) {
    const auto& md = m.multidegrees[k];
    KoszulDegree& out = kd[k];
    out.dims.assign(r + 1, 0);
    out.ranks.assign(r + 2, 0);
    std::vector<std::map<std::vector<std::size_t>, std::pair<std::size_t, std::vector<std::size_t>>>> offset(r + 1);
    for (std::size_t j = 0; j <= r; ++j)
      for (const auto& s : subs[j]) {
        auto src = shift(md, s);
        if (!src) continue;
        const std::size_t dim = m.dims.at(*src);
        if (dim == 0) continue;
        offset[j][s] = {out.dims[j], *src};
        out.dims[j] += dim;
      }
    for (std::size_t j = 1; j <= r; ++j) {
      if (out.dims[j] == 0 || out.dims[j - 1] == 0) continue;
      Matrix dj(out.dims[j - 1], out.dims[j], p);
      for (const auto& [s, at] : offset[j]) {
        const auto& [col, src] = at;
        for (std::size_t q = 0; q < s.size(); ++q) {
          auto face = s;
          face.erase(face.begin() + static_cast<long>(q));
          auto f = offset[j - 1].find(face);
          if (f == offset[j - 1].end()) continue;  // target piece is zero
          const Matrix& a = m.action[s[q]].at(src);
          dj.set_block(f->second.first, col, q % 2 == 0 ? a : a.scaled(p - 1));
        }
      }
      out.ranks[j] = rank(dj);
    }
  });

  DepthCertificate cert;
  for (const auto& y : m.params) {
    cert.params.push_back(y.name);
    cert.degrees.push_back(y.degree);
  }
  cert.max_degree = D;
  cert.window = D - total;
  cert.homology.assign(r + 1, std::vector<std::size_t>(D + 1, 0));
  bool any = false, guard_clean = true;
  std::size_t top = 0;
  for (std::size_t k = 0; k < m.multidegrees.size(); ++k) {
    const auto& md = m.multidegrees[k];
    const std::size_t t = std::accumulate(md.begin(), md.end(), std::size_t{0});
    for (std::size_t j = 0; j <= r; ++j) {
      const std::size_t h = kd[k].dims[j] - kd[k].ranks[j] - kd[k].ranks[j + 1];
      cert.homology[j][t] += h;
      if (h == 0) continue;
      any = true;
      top = std::max(top, j);
      if (t > cert.window) guard_clean = false;
    }
  }
  if (any) cert.depth = r - top;
  cert.certified = guard_clean;
  return cert;
}

}  // namespace modinv
