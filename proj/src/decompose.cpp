#include "modinv/decompose.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace modinv {

namespace {

bool is_nonzero(const Vec& v) {
  return std::any_of(v.begin(), v.end(), [](Scalar x) { return x != 0; });
}

// Echelon accumulator: add vectors, report rank growth.
class RankTracker {
 public:
  RankTracker(std::size_t len, Scalar p) : len_(len), f_(p) {}
  std::size_t rank() const { return rows_.size(); }
  // Returns how many of vs were independent of the current span (and adds them).
  std::size_t add(const std::vector<Vec>& vs) {
    std::size_t before = rows_.size();
    for (Vec v : vs) {
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        Scalar c = v[piv_[r]];
        if (!c) continue;
        Scalar nc = f_.neg(c);
        for (std::size_t j = 0; j < len_; ++j)
          if (rows_[r][j]) v[j] = f_.add(v[j], f_.mul(nc, rows_[r][j]));
      }
      std::size_t p = 0;
      while (p < len_ && !v[p]) ++p;
      if (p == len_) continue;
      Scalar iv = f_.inv(v[p]);
      for (auto& x : v) x = f_.mul(x, iv);
      rows_.push_back(std::move(v));
      piv_.push_back(p);
    }
    return rows_.size() - before;
  }

 private:
  std::size_t len_;
  PrimeField f_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> piv_;
};

std::vector<Matrix> quotient_lifts(const ClassData& c) {
  std::vector<Matrix> out;
  const auto& rad = c.end.rad;
  for (std::size_t u = 0; u < rad.quotient_dim(); ++u) out.push_back(c.end.algebra.element(rad.lift.column(u)));
  return out;
}

struct Selection {
  std::vector<std::size_t> f_idx, g_idx;
};

// Chooses r homs f : M -> N and r homs g : N -> M whose composites form an
// invertible r x r matrix over E/rad(E).
Selection select_pairs(const ClassData& c, const HomSpace& mn, const HomSpace& nm) {
  Selection sel;
  const std::size_t s = c.s;
  const Scalar p = c.rep.p();
  auto lifts = quotient_lifts(c);
  const std::size_t b = nm.dim();
  RankTracker fr(b * s, p);
  for (std::size_t j = 0; j < mn.dim(); ++j) {
    std::vector<Vec> vs;
    for (std::size_t u = 0; u < s; ++u) {
      Matrix fl = s == 1 ? mn.basis[j] : mn.basis[j] * lifts[u];
      Vec v(b * s);
      for (std::size_t i = 0; i < b; ++i) {
        Vec q = c.pi_of_composite(nm.basis[i], fl);
        std::copy(q.begin(), q.end(), v.begin() + static_cast<std::ptrdiff_t>(i * s));
      }
      vs.push_back(std::move(v));
    }
    std::size_t grow = fr.add(vs);
    if (grow == s) sel.f_idx.push_back(j);
    else if (grow != 0) throw Error(ErrorCode::InternalError, "pairing rank not a multiple of dim E/rad");
  }
  const std::size_t r = sel.f_idx.size();
  RankTracker gr(r * s, p);
  for (std::size_t i = 0; i < b && sel.g_idx.size() < r; ++i) {
    std::vector<Vec> vs;
    for (std::size_t u = 0; u < s; ++u) {
      Matrix gl = s == 1 ? nm.basis[i] : lifts[u] * nm.basis[i];
      Vec v(r * s);
      for (std::size_t j = 0; j < r; ++j) {
        Vec q = c.pi_of_composite(gl, mn.basis[sel.f_idx[j]]);
        std::copy(q.begin(), q.end(), v.begin() + static_cast<std::ptrdiff_t>(j * s));
      }
      vs.push_back(std::move(v));
    }
    std::size_t grow = gr.add(vs);
    if (grow == s) sel.g_idx.push_back(i);
    else if (grow != 0) throw Error(ErrorCode::InternalError, "dual pairing rank not a multiple of dim E/rad");
  }
  if (sel.g_idx.size() != r) throw Error(ErrorCode::InternalError, "pairing is not perfect");
  return sel;
}

std::optional<Scalar> find_root(const UPoly& f, const PrimeField& fld, std::mt19937_64& rng) {
  if (f.size() < 2) return std::nullopt;
  auto eval = [&](Scalar x) {
    Scalar acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = fld.add(fld.mul(acc, x), f[i]);
    return acc;
  };
  const Scalar p = fld.p();
  if (p <= 4096) {
    for (Scalar x = 0; x < p; ++x)
      if (!eval(x)) return x;
    return std::nullopt;
  }
  // restrict to the product of linear factors, then split at random
  UPoly xp = upoly::powmod(UPoly{0, 1}, p, f, fld);
  UPoly g = upoly::gcd(f, upoly::sub(xp, UPoly{0, 1}, fld), fld);
  for (int attempt = 0; attempt < 200 && g.size() > 2; ++attempt) {
    Scalar a = static_cast<Scalar>(rng() % p);
    UPoly h = upoly::powmod(UPoly{a, 1}, (p - 1) / 2, g, fld);
    h = upoly::sub(h, UPoly{1}, fld);
    UPoly d = upoly::gcd(g, h, fld);
    if (d.size() <= 1 || d.size() >= g.size()) continue;
    UPoly other = upoly::divmod(g, d, fld).first;
    g = d.size() <= other.size() ? d : other;
  }
  if (g.size() == 2) return fld.mul(fld.neg(g[0]), fld.inv(g[1]));
  return std::nullopt;
}

// Idempotent-producing polynomial for an element with minimal polynomial m:
// returns e with e(z) a nontrivial idempotent, when m has a coprime split.
std::optional<UPoly> idempotent_polynomial(const UPoly& m, const PrimeField& f) {
  const std::size_t deg = m.size() - 1;
  if (deg < 2) return std::nullopt;
  UPoly frob{0, 1};
  for (std::size_t d = 1; d <= deg; ++d) {
    frob = upoly::powmod(frob, f.p(), m, f);
    UPoly h = upoly::gcd(m, upoly::sub(frob, UPoly{0, 1}, f), f);
    if (h.size() <= 1) continue;
    UPoly part{1}, rest = m;
    for (;;) {
      UPoly g = upoly::gcd(rest, h, f);
      if (g.size() <= 1) break;
      part = upoly::mul(part, g, f);
      rest = upoly::divmod(rest, g, f).first;
    }
    if (rest.size() <= 1) return std::nullopt;
    // e = 1 mod part, 0 mod rest
    UPoly u = upoly::inverse_mod(rest, part, f);
    UPoly e = upoly::divmod(upoly::mul(rest, u, f), m, f).second;
    return e;
  }
  return std::nullopt;
}

struct SplitSearch {
  const GModule& mod;
  const EndAlgebra& end;
  const DecomposeOptions& opt;
  std::mt19937_64 rng;

  std::optional<FittingSplit> attempt(const Matrix& theta) {
    if (auto s = fitting_split(mod, theta)) return s;
    const auto& rad = end.rad;
    Vec z = rad.to_quotient.apply(end.algebra.coords(theta));
    if (!is_nonzero(z)) return std::nullopt;
    PrimeField f(mod.p());
    UPoly m = minimal_polynomial(quotient_left_mult(rad, z));
    if (auto e = idempotent_polynomial(m, f)) {
      if (auto s = fitting_split(mod, evaluate(*e, theta))) return s;
    }
    return std::nullopt;
  }

  std::optional<FittingSplit> run() {
    const auto& alg = end.algebra;
    const Scalar p = mod.p();
    PrimeField f(p);
    const auto& q = end.quotient;
    if (q.splitting) {
      // z^p = z and z is not scalar: some z - lambda is a non-nilpotent non-unit
      Matrix theta = alg.element(end.rad.lift.apply(*q.splitting));
      UPoly m = minimal_polynomial(quotient_left_mult(end.rad, *q.splitting));
      if (auto lam = find_root(m, f, rng)) {
        Matrix t = theta - Matrix::identity(mod.dim(), p).scaled(*lam);
        if (auto s = fitting_split(mod, t)) return s;
      }
    }
    for (std::size_t a = 0; a < opt.random_attempts; ++a) {
      Vec c(alg.dim());
      for (auto& x : c) x = static_cast<Scalar>(rng() % p);
      if (auto s = attempt(alg.element(c))) return s;
    }
    for (std::size_t i = 0; i < alg.dim(); ++i)
      if (auto s = attempt(alg[i])) return s;
    for (std::size_t i = 0; i < alg.dim(); ++i)
      for (std::size_t j = i + 1; j < alg.dim(); ++j)
        if (auto s = attempt(alg[i] + alg[j])) return s;
    return std::nullopt;
  }
};

struct FoundIndecomposable {
  ClassData data;
  Matrix embed, retract;
};

FoundIndecomposable find_indecomposable(const GModule& w, const DecomposeOptions& opt, std::uint64_t salt) {
  GModule cur = w;
  Matrix e = Matrix::identity(w.dim(), w.p());
  Matrix r = e;
  for (std::uint64_t round = 0;; ++round) {
    EndAlgebra end = endomorphism_algebra(cur, opt.seed ^ (salt * 0x9e3779b97f4a7c15ull) ^ round);
    if (end.quotient.is_field()) {
      ClassData cd;
      cd.rep = cur;
      cd.s = end.rad.quotient_dim();
      cd.end = std::move(end);
      cd.key = canonical_key(cur);
      return {std::move(cd), e, r};
    }
    SplitSearch search{cur, end, opt, std::mt19937_64(opt.seed + 0x5851f42d4c957f2dull * (salt + 1) + round)};
    auto split = search.run();
    if (!split)
      throw Error(ErrorCode::CertificationFailure,
                  "certification exhausted: no split found and E/rad(E) is not a field (dim " +
                      std::to_string(cur.dim()) + ")");
    bool take_kernel = split->kernel_basis.cols() <= split->image_basis.cols();
    const Matrix& basis = take_kernel ? split->kernel_basis : split->image_basis;
    const Matrix& proj = take_kernel ? split->kernel_proj : split->image_proj;
    GModule next = submodule(cur, basis);
    e = e * basis;
    r = proj * r;
    cur = std::move(next);
  }
}

}  // namespace

EndAlgebra endomorphism_algebra(const GModule& m, std::uint64_t seed) {
  if (m.dim() == 0) throw Error(ErrorCode::InvalidInput, "endomorphism algebra of the zero module");
  HomSpace hs = hom_space(m, m);
  EndAlgebra out;
  out.algebra = MatrixAlgebra(hs.basis);
  out.rad = radical(out.algebra);
  out.quotient = analyse_quotient(out.rad, seed);
  return out;
}

Vec ClassData::pi_of_composite(const Matrix& g, const Matrix& f) const {
  return end.rad.to_quotient.apply(end.algebra.coords_of_product(g, f));
}

Vec ClassData::pi(const Matrix& x) const { return end.rad.to_quotient.apply(end.algebra.coords(x)); }

ClassData make_class_data(const GModule& m, std::uint64_t seed) {
  ClassData c;
  c.rep = m;
  c.end = endomorphism_algebra(m, seed);
  if (!c.end.quotient.is_field())
    throw Error(ErrorCode::CertificationFailure, "module is not certified indecomposable");
  c.s = c.end.rad.quotient_dim();
  c.key = canonical_key(m);
  return c;
}

std::vector<std::size_t> canonical_key(const GModule& m) {
  const std::size_t d = m.dim();
  std::vector<std::size_t> key{d};
  auto acts = m.all_actions();
  Matrix id = Matrix::identity(d, m.p());
  for (const auto& a : acts) {
    Matrix n = a - id;
    Matrix cur = n;
    std::size_t prev = 0;
    std::size_t j = 1;
    for (; j <= d; ++j) {
      std::size_t k = d - rank(cur);
      key.push_back(k);
      if (k == prev || k == d) break;
      prev = k;
      cur = cur * n;
    }
    for (++j; j <= d; ++j) key.push_back(key.back());
  }
  return key;
}

IsoClassRegistry::IsoClassRegistry(GroupPtr g, std::uint64_t seed) : group_(std::move(g)), seed_(seed) {}

std::optional<std::size_t> IsoClassRegistry::find_label(const std::string& label) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].label == label) return i;
  return std::nullopt;
}

std::optional<std::size_t> IsoClassRegistry::find(const GModule& m, Matrix* iso) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].data.rep.dim() != m.dim()) continue;
    if (is_isomorphic(entries_[i].data, m, iso)) return i;
  }
  return std::nullopt;
}

std::string IsoClassRegistry::make_label(const ClassData& c, std::size_t degree) {
  const GModule& m = c.rep;
  auto taken = [&](const std::string& l) { return find_label(l).has_value(); };
  bool trivial = m.dim() == 1;
  for (const auto& g : m.generator_action()) trivial = trivial && g(0, 0) == 1;
  if (trivial && !taken("k")) return "k";
  if (is_p_group(whole_group(group_), group_->p()) && m.dim() == group_->order() && !taken("F") &&
      is_isomorphic(c, GModule::regular(group_)))
    return "F";
  if (degree == 1) {
    std::string l = degree_one_count_ == 0 ? "V" : "V" + std::to_string(degree_one_count_ + 1);
    ++degree_one_count_;
    if (!taken(l)) return l;
  }
  for (;;) {
    std::string l = "M" + std::to_string(m.dim()) + "." + std::to_string(++per_dim_[m.dim()]);
    if (!taken(l)) return l;
  }
}

std::vector<std::size_t> IsoClassRegistry::add_batch(std::vector<ClassData> classes, std::size_t degree) {
  std::vector<std::size_t> order(classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return classes[a].key < classes[b].key; });
  std::vector<std::size_t> out(classes.size());
  for (auto i : order) {
    std::string label = make_label(classes[i], degree);
    classes[i].rep.set_label(label);
    out[i] = entries_.size();
    entries_.push_back({label, std::move(classes[i]), degree, std::nullopt});
  }
  return out;
}

std::size_t IsoClassRegistry::add_labelled(ClassData cls, std::string label, std::size_t degree) {
  if (find_label(label)) throw Error(ErrorCode::InvalidInput, "duplicate class label " + label);
  if (label.size() > 1 && label[0] == 'V') degree_one_count_ = std::max<std::size_t>(degree_one_count_, std::stoul(label.substr(1)));
  else if (label == "V") degree_one_count_ = std::max<std::size_t>(degree_one_count_, 1);
  else if (label[0] == 'M') {
    auto dot = label.find('.');
    if (dot != std::string::npos) {
      std::size_t d = std::stoul(label.substr(1, dot - 1));
      per_dim_[d] = std::max(per_dim_[d], std::stoul(label.substr(dot + 1)));
    }
  }
  cls.rep.set_label(label);
  entries_.push_back({std::move(label), std::move(cls), degree, std::nullopt});
  return entries_.size() - 1;
}

bool is_isomorphic(const ClassData& m, const GModule& n, Matrix* iso) {
  if (!m.rep.same_group(n)) throw Error(ErrorCode::InvalidInput, "isomorphism test across groups");
  if (m.rep.dim() != n.dim()) return false;
  HomSpace mn = hom_space(m.rep, n);
  if (mn.dim() == 0) return false;
  HomSpace nm = hom_space(n, m.rep);
  for (const auto& f : mn.basis)
    for (const auto& g : nm.basis)
      if (is_nonzero(m.pi_of_composite(g, f))) {
        if (iso) *iso = f;
        return true;
      }
  return false;
}

bool is_isomorphic(const GModule& m, const GModule& n) {
  ClassData cm = make_class_data(m);
  (void)make_class_data(n);
  return is_isomorphic(cm, n);
}

std::size_t multiplicity(const GModule& n, const ClassData& c) {
  if (c.rep.dim() > n.dim()) return 0;
  HomSpace mn = hom_space(c.rep, n);
  if (mn.dim() == 0) return 0;
  HomSpace nm = hom_space(n, c.rep);
  if (nm.dim() == 0) return 0;
  return select_pairs(c, mn, nm).f_idx.size();
}

PeelResult peel(const GModule& n, const ClassData& c, std::size_t cls_index) {
  PeelResult out;
  const Scalar p = n.p();
  auto unchanged = [&] {
    out.complement = n;
    out.complement_embed = Matrix::identity(n.dim(), p);
    out.complement_proj = Matrix::identity(n.dim(), p);
    return out;
  };
  if (c.rep.dim() > n.dim() || n.dim() == 0) return unchanged();
  HomSpace mn = hom_space(c.rep, n);
  if (mn.dim() == 0) return unchanged();
  HomSpace nm = hom_space(n, c.rep);
  if (nm.dim() == 0) return unchanged();
  Selection sel = select_pairs(c, mn, nm);
  const std::size_t r = sel.f_idx.size();
  if (r == 0) return unchanged();
  const std::size_t dm = c.rep.dim();
  Matrix fcat(n.dim(), r * dm, p), gcat(r * dm, n.dim(), p);
  for (std::size_t j = 0; j < r; ++j) {
    fcat.set_block(0, j * dm, mn.basis[sel.f_idx[j]]);
    gcat.set_block(j * dm, 0, nm.basis[sel.g_idx[j]]);
  }
  auto cinv = inverse(gcat * fcat);
  if (!cinv) throw Error(ErrorCode::InternalError, "selected composites are not invertible");
  Matrix gp = *cinv * gcat;
  for (std::size_t j = 0; j < r; ++j)
    out.summands.push_back({cls_index, mn.basis[sel.f_idx[j]], gp.block(j * dm, 0, dm, n.dim())});
  auto ker = nullspace(gp);
  const std::size_t w = ker.size();
  if (w + r * dm != n.dim()) throw Error(ErrorCode::InternalError, "peel dimension bookkeeping");
  if (w == 0) {
    out.complement = GModule(n.group(), std::vector<Matrix>(n.generator_action().size(), Matrix(0, 0, p)));
    out.complement_embed = Matrix(n.dim(), 0, p);
    out.complement_proj = Matrix(0, n.dim(), p);
    return out;
  }
  Matrix ew = Matrix::from_columns(ker, n.dim(), p);
  Matrix phi = Matrix::identity(n.dim(), p) - fcat * gp;
  CoordinateMap cm(ew);
  Matrix pw = cm.pivot_inverse() * phi.select_rows(cm.pivot_rows());
  std::vector<Matrix> gens;
  for (const auto& a : n.generator_action()) gens.push_back(pw * a * ew);
  out.complement = GModule(n.group(), std::move(gens));
  out.complement_embed = std::move(ew);
  out.complement_proj = std::move(pw);
  return out;
}

std::optional<FittingSplit> fitting_split(const GModule& m, const Matrix& theta) {
  if (!is_equivariant(theta, m, m)) throw Error(ErrorCode::NotEquivariant, "Fitting split of a non-endomorphism");
  const std::size_t n = m.dim();
  Matrix tn = power(theta, n);
  auto rr = rref(tn);
  const std::size_t r = rr.rank();
  if (r == 0 || r == n) return std::nullopt;
  FittingSplit s;
  s.kernel_basis = Matrix::from_columns(nullspace(tn), n, m.p());
  s.image_basis = tn.select_columns(rr.pivots);
  auto inv = inverse(hstack(s.kernel_basis, s.image_basis));
  if (!inv) throw Error(ErrorCode::InternalError, "Fitting components do not span");
  s.kernel_proj = inv->block(0, 0, n - r, n);
  s.image_proj = inv->block(n - r, 0, r, n);
  return s;
}

PartialDecomposition decompose_partial(const GModule& m, const IsoClassRegistry& reg, const DecomposeOptions& opt) {
  if (m.dim() > opt.dim_cap)
    throw Error(ErrorCode::CapExceeded, "module of dimension " + std::to_string(m.dim()) + " exceeds cap");
  if (m.group().get() != reg.group().get())
    throw Error(ErrorCode::InvalidInput, "module over a different group than the registry");
  PartialDecomposition out;
  const Scalar p = m.p();
  GModule w = m;
  Matrix etot = Matrix::identity(m.dim(), p);
  Matrix ptot = etot;
  auto absorb = [&](PeelResult& pr, std::vector<Summand>& into) {
    for (auto& s : pr.summands) into.push_back({s.cls, etot * s.embed, s.retract * ptot});
    etot = etot * pr.complement_embed;
    ptot = pr.complement_proj * ptot;
    w = std::move(pr.complement);
  };
  for (std::size_t i = 0; i < reg.size() && w.dim() > 0; ++i) {
    if (reg[i].data.rep.dim() > w.dim()) continue;
    PeelResult pr = peel(w, reg[i].data, i);
    absorb(pr, out.known);
  }
  std::uint64_t salt = 0;
  while (w.dim() > 0) {
    FoundIndecomposable found = find_indecomposable(w, opt, salt++);
    std::size_t local = out.fresh.size();
    PeelResult pr = peel(w, found.data, local);
    if (pr.summands.empty()) throw Error(ErrorCode::InternalError, "found summand does not peel");
    out.fresh.push_back(std::move(found.data));
    absorb(pr, out.fresh_summands);
  }
  std::size_t total = 0;
  for (const auto& s : out.known) total += s.embed.cols();
  for (const auto& s : out.fresh_summands) total += s.embed.cols();
  if (total != m.dim()) throw Error(ErrorCode::InternalError, "decomposition dimension bookkeeping failed");
  return out;
}

std::vector<std::vector<Summand>> commit(std::vector<PartialDecomposition> parts, IsoClassRegistry& reg,
                                         std::size_t degree) {
  struct Mapping {
    bool existing;
    std::size_t index;  // registry index or index into batch
    Matrix iso;         // class rep -> fresh rep
  };
  std::vector<ClassData> batch;
  std::vector<std::vector<Mapping>> maps(parts.size());
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    for (auto& fc : parts[pi].fresh) {
      Matrix iso;
      if (auto idx = reg.find(fc.rep, &iso)) {
        maps[pi].push_back({true, *idx, iso});
        continue;
      }
      bool matched = false;
      for (std::size_t b = 0; b < batch.size(); ++b) {
        if (batch[b].rep.dim() == fc.rep.dim() && is_isomorphic(batch[b], fc.rep, &iso)) {
          maps[pi].push_back({false, b, iso});
          matched = true;
          break;
        }
      }
      if (!matched) {
        maps[pi].push_back({false, batch.size(), Matrix::identity(fc.rep.dim(), fc.rep.p())});
        batch.push_back(fc);
      }
    }
  }
  auto new_index = reg.add_batch(std::move(batch), degree);
  std::vector<std::vector<Summand>> out(parts.size());
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    out[pi] = std::move(parts[pi].known);
    for (auto& s : parts[pi].fresh_summands) {
      const Mapping& mp = maps[pi][s.cls];
      std::size_t g = mp.existing ? mp.index : new_index[mp.index];
      auto inv = inverse(mp.iso);
      if (!inv) throw Error(ErrorCode::InternalError, "class isomorphism not invertible");
      out[pi].push_back({g, s.embed * mp.iso, *inv * s.retract});
    }
  }
  return out;
}

std::vector<Summand> decompose(const GModule& m, IsoClassRegistry& reg, std::size_t degree,
                               const DecomposeOptions& opt) {
  std::vector<PartialDecomposition> parts;
  parts.push_back(decompose_partial(m, reg, opt));
  return commit(std::move(parts), reg, degree).front();
}

std::map<std::size_t, std::size_t> multiplicities(const std::vector<Summand>& s) {
  std::map<std::size_t, std::size_t> out;
  for (const auto& x : s) ++out[x.cls];
  return out;
}

}  // namespace modinv
