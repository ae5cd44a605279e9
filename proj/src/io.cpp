#include "modinv/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace modinv::io {

namespace fs = std::filesystem;

std::optional<Format> parse_format(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Source positions. nlohmann::json keeps no offsets, so a value is located
// again by walking the raw text along its path.

namespace {

struct Step {
  std::string key;
  std::size_t index = 0;
  bool is_key = true;
};
using Path = std::vector<Step>;

Path operator/(Path p, const std::string& key) {
  p.push_back({key, 0, true});
  return p;
}
Path operator/(Path p, std::size_t i) {
  p.push_back({{}, i, false});
  return p;
}

std::string pointer(const Path& path) {
  std::string s;
  for (const auto& st : path) s += "/" + (st.is_key ? st.key : std::to_string(st.index));
  return s.empty() ? "/" : s;
}

class Locator {
 public:
  explicit Locator(const std::string& s) : s_(s) {}

  std::size_t find(const Path& path) {
    i_ = 0;
    ws();
    for (const auto& st : path) {
      if (i_ >= s_.size()) break;
      if (st.is_key && s_[i_] == '{') {
        if (!enter_object(st.key)) break;
      } else if (!st.is_key && s_[i_] == '[') {
        if (!enter_array(st.index)) break;
      } else {
        break;
      }
    }
    return i_;
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;

  void ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  std::string string_token() {
    std::string out;
    ++i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\') ++i_;
      if (i_ < s_.size()) out += s_[i_++];
    }
    ++i_;
    return out;
  }
  void skip_value() {
    if (i_ >= s_.size()) return;
    if (s_[i_] == '"') {
      string_token();
      return;
    }
    if (s_[i_] == '{' || s_[i_] == '[') {
      int depth = 0;
      while (i_ < s_.size()) {
        char c = s_[i_];
        if (c == '"') {
          string_token();
          continue;
        }
        if (c == '{' || c == '[') ++depth;
        if (c == '}' || c == ']') --depth;
        ++i_;
        if (depth == 0) return;
      }
      return;
    }
    while (i_ < s_.size() && !std::strchr(",}] \t\r\n", s_[i_])) ++i_;
  }
  bool enter_object(const std::string& key) {
    const std::size_t start = i_;
    ++i_;
    for (;;) {
      ws();
      if (i_ >= s_.size() || s_[i_] != '"') break;
      std::string k = string_token();
      ws();
      if (i_ < s_.size() && s_[i_] == ':') ++i_;
      ws();
      if (k == key) return true;
      skip_value();
      ws();
      if (i_ < s_.size() && s_[i_] == ',') ++i_;
      else break;
    }
    i_ = start;
    return false;
  }
  bool enter_array(std::size_t index) {
    const std::size_t start = i_;
    ++i_;
    for (std::size_t k = 0;; ++k) {
      ws();
      if (i_ >= s_.size() || s_[i_] == ']') break;
      if (k == index) return true;
      skip_value();
      ws();
      if (i_ < s_.size() && s_[i_] == ',') ++i_;
      else break;
    }
    i_ = start;
    return false;
  }
};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class ConfigReader {
 public:
  explicit ConfigReader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const Path& path, const std::string& msg) const {
    Locator loc(text_);
    auto [l, c] = line_column(text_, loc.find(path));
    throw Error(ErrorCode::InvalidInput,
                "config line " + std::to_string(l) + ", column " + std::to_string(c) + " (" + pointer(path) + "): " + msg);
  }

  const Json& at(const Json& j, const Path& path, const std::string& key) const {
    if (!j.contains(key)) fail(path, "missing field '" + key + "'");
    return j.at(key);
  }

  long long integer(const Json& j, const Path& path) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long long>();
  }
  std::size_t natural(const Json& j, const Path& path) const {
    long long v = integer(j, path);
    if (v < 0) fail(path, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }
  std::string string(const Json& j, const Path& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }
  const Json& array(const Json& j, const Path& path) const {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
  }

  std::vector<long long> integers(const Json& j, const Path& path) const {
    array(j, path);
    std::vector<long long> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], path / i));
    return out;
  }

  /// Square matrix as a list of rows; entries reduced mod p.
  Matrix matrix(const Json& j, const Path& path, Scalar p, std::optional<std::size_t> size) const {
    array(j, path);
    const std::size_t n = j.size();
    if (n == 0) fail(path, "empty matrix");
    if (size && n != *size) fail(path, "expected " + std::to_string(*size) + " rows, found " + std::to_string(n));
    std::vector<std::vector<long long>> rows;
    for (std::size_t r = 0; r < n; ++r) {
      auto row = integers(j[r], path / r);
      if (row.size() != n)
        fail(path / r, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
      rows.push_back(std::move(row));
    }
    return Matrix::from_rows(rows, p);
  }

 private:
  const std::string& text_;
};

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void reject_unknown(const ConfigReader& rd, const Json& j, const Path& path, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) rd.fail(path / it.key(), "unknown field '" + it.key() + "'");
}

}  // namespace

JobConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [l, c] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorCode::InvalidInput,
                "config line " + std::to_string(l) + ", column " + std::to_string(c) + ": malformed JSON");
  }
  ConfigReader rd(text);
  const Path root;
  if (!j.is_object()) rd.fail(root, "expected an object");
  reject_unknown(rd, j, root,
                 {"schema", "description", "p", "generators", "max_degree", "seed", "threads", "modules",
                  "subgroup_class", "parameters", "fit", "format", "cache_dir"});
  if (rd.string(rd.at(j, root, "schema"), root / "schema") != kConfigSchema)
    rd.fail(root / "schema", std::string("unsupported schema, expected ") + kConfigSchema);

  JobConfig c;
  long long p = rd.integer(rd.at(j, root, "p"), root / "p");
  if (!is_prime(p) || p > 65521) rd.fail(root / "p", "p must be a prime below 65536");
  c.p = static_cast<Scalar>(p);

  const Path gp = root / "generators";
  const Json& gens = rd.array(rd.at(j, root, "generators"), gp);
  if (gens.empty()) rd.fail(gp, "at least one generator is required");
  std::optional<std::size_t> n;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    Matrix m = rd.matrix(gens[i], gp / i, c.p, n);
    n = m.rows();
    if (determinant(m) == 0) rd.fail(gp / i, "generator is not invertible mod p");
    c.generators.push_back(std::move(m));
  }

  if (j.contains("max_degree")) c.max_degree = rd.natural(j["max_degree"], root / "max_degree");
  if (j.contains("seed")) c.seed = rd.natural(j["seed"], root / "seed");
  if (j.contains("threads")) {
    c.threads = rd.natural(j["threads"], root / "threads");
    if (c.threads == 0) rd.fail(root / "threads", "threads must be positive");
  }
  if (j.contains("format")) {
    auto f = parse_format(rd.string(j["format"], root / "format"));
    if (!f) rd.fail(root / "format", "format must be text, json or csv");
    c.format = *f;
  }
  if (j.contains("cache_dir")) c.cache_dir = rd.string(j["cache_dir"], root / "cache_dir");
  if (j.contains("subgroup_class")) {
    std::string s = rd.string(j["subgroup_class"], root / "subgroup_class");
    static const std::set<std::string> names = {"trivial", "trivial-only", "non-sylow", "all-proper-p", "all-p"};
    if (!names.count(s)) rd.fail(root / "subgroup_class", "unknown subgroup class '" + s + "'");
    c.subgroup_class = s;
  }

  if (j.contains("modules")) {
    const Path mp = root / "modules";
    const Json& ms = rd.array(j["modules"], mp);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const Json& m = ms[i];
      const Path here = mp / i;
      if (!m.is_object()) rd.fail(here, "expected an object");
      reject_unknown(rd, m, here, {"label", "generators", "class", "builtin"});
      ModuleSpec s;
      const int kinds = int(m.contains("generators")) + int(m.contains("class")) + int(m.contains("builtin"));
      if (kinds != 1) rd.fail(here, "give exactly one of 'generators', 'class' or 'builtin'");
      if (m.contains("generators")) {
        s.kind = ModuleSpec::Kind::Matrices;
        const Json& mg = rd.array(m["generators"], here / "generators");
        if (mg.size() != c.generators.size())
          rd.fail(here / "generators", "expected one matrix per group generator (" +
                                           std::to_string(c.generators.size()) + ")");
        std::optional<std::size_t> dim;
        for (std::size_t k = 0; k < mg.size(); ++k) {
          Matrix a = rd.matrix(mg[k], here / "generators" / k, c.p, dim);
          dim = a.rows();
          s.generators.push_back(std::move(a));
        }
      } else if (m.contains("class")) {
        s.kind = ModuleSpec::Kind::Class;
        s.name = rd.string(m["class"], here / "class");
      } else {
        s.kind = ModuleSpec::Kind::Builtin;
        s.name = rd.string(m["builtin"], here / "builtin");
        if (s.name != "trivial" && s.name != "forms" && s.name != "regular")
          rd.fail(here / "builtin", "builtin must be trivial, forms or regular");
      }
      s.label = m.contains("label") ? rd.string(m["label"], here / "label") : (s.name.empty() ? "M" + std::to_string(i + 1) : s.name);
      c.modules.push_back(std::move(s));
    }
  }

  if (j.contains("parameters")) {
    const Path pp = root / "parameters";
    const Json& ps = j["parameters"];
    if (ps.is_string()) {
      c.parameter_mode = ps.get<std::string>();
      if (c.parameter_mode != "default" && c.parameter_mode != "dickson")
        rd.fail(pp, "parameters must be \"default\", \"dickson\" or a list");
    } else {
      rd.array(ps, pp);
      c.parameter_mode = "user";
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const Path here = pp / i;
        const Json& y = ps[i];
        if (!y.is_object()) rd.fail(here, "expected an object");
        reject_unknown(rd, y, here, {"name", "linear", "norm", "terms"});
        ParameterSpec s;
        s.name = y.contains("name") ? rd.string(y["name"], here / "name") : "y" + std::to_string(i + 1);
        const int kinds = int(y.contains("linear")) + int(y.contains("norm")) + int(y.contains("terms"));
        if (kinds != 1) rd.fail(here, "give exactly one of 'linear', 'norm' or 'terms'");
        if (y.contains("terms")) {
          s.kind = ParameterSpec::Kind::Terms;
          const Json& ts = rd.array(y["terms"], here / "terms");
          if (ts.empty()) rd.fail(here / "terms", "empty polynomial");
          for (std::size_t t = 0; t < ts.size(); ++t) {
            const Path tp = here / "terms" / t;
            if (!ts[t].is_array() || ts[t].size() != 2) rd.fail(tp, "a term is [coefficient, [exponents]]");
            long long coef = rd.integer(ts[t][0], tp / 0);
            auto ex = rd.integers(ts[t][1], tp / 1);
            if (ex.size() != *n) rd.fail(tp / 1, "expected " + std::to_string(*n) + " exponents");
            std::vector<std::size_t> e;
            for (std::size_t k = 0; k < ex.size(); ++k) {
              if (ex[k] < 0) rd.fail(tp / 1 / k, "negative exponent");
              e.push_back(static_cast<std::size_t>(ex[k]));
            }
            s.terms.push_back({coef, e});
          }
        } else {
          const bool lin = y.contains("linear");
          s.kind = lin ? ParameterSpec::Kind::Linear : ParameterSpec::Kind::Norm;
          const std::string key = lin ? "linear" : "norm";
          s.form = rd.integers(y[key], here / key);
          if (s.form.size() != *n) rd.fail(here / key, "expected " + std::to_string(*n) + " coefficients");
        }
        c.parameters.push_back(std::move(s));
      }
    }
  }

  if (j.contains("fit")) {
    const Json& f = j["fit"];
    if (f.is_boolean()) {
      c.fit = f.get<bool>();
    } else if (f.is_object()) {
      reject_unknown(rd, f, root / "fit", {"denominator"});
      c.fit = true;
      if (f.contains("denominator")) {
        for (long long e : rd.integers(f["denominator"], root / "fit" / "denominator")) {
          if (e <= 0) rd.fail(root / "fit" / "denominator", "denominator exponents must be positive");
          c.fit_denominator.push_back(static_cast<std::size_t>(e));
        }
      }
    } else {
      rd.fail(root / "fit", "fit must be a boolean or an object");
    }
  }
  return c;
}

JobConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

GroupPtr build_group(const JobConfig& c) { return GroupTable::enumerate(c.generators); }

std::vector<GModule> build_modules(const JobConfig& c, GradedEngine& e) {
  const auto& g = e.group();
  std::vector<GModule> out;
  for (const auto& s : c.modules) {
    GModule m;
    switch (s.kind) {
      case ModuleSpec::Kind::Matrices: {
        m = GModule(g, s.generators, s.label);
        // The words in the enumeration must compose consistently.
        auto acts = m.all_actions();
        for (std::size_t i = 0; i < g->order(); ++i)
          for (std::size_t k = 0; k < g->num_generators(); ++k)
            if (!(acts[i] * m.generator(k) == acts[g->times_generator(i, k)]))
              throw Error(ErrorCode::InvalidInput, "module '" + s.label + "' does not define a representation");
        break;
      }
      case ModuleSpec::Kind::Class: {
        e.extend(c.max_degree);
        auto idx = e.registry().find_label(s.name);
        if (!idx)
          throw Error(ErrorCode::InvalidInput, "no class '" + s.name + "' up to degree " + std::to_string(c.max_degree));
        m = e.registry().at(*idx).data.rep;
        break;
      }
      case ModuleSpec::Kind::Builtin:
        m = s.name == "trivial" ? GModule::trivial(g) : s.name == "forms" ? GModule::forms(g) : GModule::regular(g);
        break;
    }
    m.set_label(s.label);
    out.push_back(std::move(m));
  }
  return out;
}

ParameterSystem build_parameters(const JobConfig& c, const GroupPtr& g) {
  if (c.parameter_mode == "default") return default_parameters(g);
  if (c.parameter_mode == "dickson") return dickson(g->n(), g->p());
  ParameterSystem ps;
  ps.provenance = "user";
  const std::size_t n = g->n();
  for (const auto& s : c.parameters) {
    Poly f = Poly::constant(n, g->p(), 0);
    if (s.kind == ParameterSpec::Kind::Terms) {
      for (const auto& [coef, ex] : s.terms) {
        Exponent e(ex.begin(), ex.end());
        long long r = coef % static_cast<long long>(g->p());
        if (r < 0) r += g->p();
        f = f + Poly::monomial(e, g->p(), static_cast<Scalar>(r));
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        long long r = s.form[k] % static_cast<long long>(g->p());
        if (r < 0) r += g->p();
        f = f + Poly::variable(n, g->p(), k).scaled(static_cast<Scalar>(r));
      }
      if (s.kind == ParameterSpec::Kind::Norm) f = orbit_product(f, *g);
    }
    if (f.is_zero() || !f.is_homogeneous())
      throw Error(ErrorCode::InvalidInput, "parameter '" + s.name + "' is not a non-zero homogeneous polynomial");
    if (!is_invariant(f, *g)) throw Error(ErrorCode::InvalidInput, "parameter '" + s.name + "' is not invariant");
    const auto deg = static_cast<std::size_t>(f.degree());
    ps.params.push_back({std::move(f), deg, s.name});
  }
  if (ps.params.empty()) throw Error(ErrorCode::InvalidInput, "empty parameter list");
  return ps;
}

SubgroupClass build_class(const JobConfig& c) {
  const std::string s = c.subgroup_class.value_or("trivial");
  if (s == "non-sylow" || s == "all-proper-p") return SubgroupClass::non_sylow();
  if (s == "all-p") return SubgroupClass::all_p();
  return SubgroupClass::trivial_only();
}

// ---------------------------------------------------------------------------

namespace {

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, Scalar p) {
  std::vector<std::vector<long long>> rows;
  for (const auto& r : j) rows.push_back(r.get<std::vector<long long>>());
  return Matrix::from_rows(rows, p);
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error(ErrorCode::InternalError, "sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

}  // namespace

Json group_fragment(const JobConfig& c) {
  Json gens = Json::array();
  for (const auto& m : c.generators) gens.push_back(matrix_json(m));
  return Json{{"p", c.p}, {"generators", gens}, {"seed", c.seed}};
}

std::string content_key(const Json& fragment, std::size_t degree) {
  return sha256_hex(fragment.dump() + "\n" + std::to_string(degree));
}

// ---------------------------------------------------------------------------

SeriesTable series_table(const GreenSeries& gs, Scalar p) {
  SeriesTable t;
  t.p = p;
  t.max_degree = gs.max_degree;
  t.labels = gs.labels;
  t.class_dims = gs.class_dims;
  t.component_dims = gs.component_dims;
  for (const auto& row : gs.rows) {
    std::vector<std::size_t> r;
    for (const auto& l : t.labels) {
      auto it = row.find(l);
      r.push_back(it == row.end() ? 0 : it->second);
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

void fit_series(SeriesTable& t, const std::vector<std::size_t>& denominator) {
  t.fit_denominator = denominator;
  t.fits.clear();
  for (std::size_t i = 0; i < t.labels.size(); ++i) {
    std::vector<std::size_t> dims;
    for (const auto& r : t.rows) dims.push_back(r[i]);
    t.fits.push_back(series_fit(dims, denominator));
  }
}

Json to_json(const SeriesTable& t) {
  Json j;
  j["schema"] = kSeriesSchema;
  j["p"] = t.p;
  j["max_degree"] = t.max_degree;
  Json labels = Json::array();
  for (std::size_t i = 0; i < t.labels.size(); ++i) labels.push_back(Json{{"label", t.labels[i]}, {"dim", t.class_dims[i]}});
  j["labels"] = labels;
  Json rows = Json::array();
  for (std::size_t d = 0; d < t.rows.size(); ++d) {
    Json m = Json::object();
    for (std::size_t i = 0; i < t.labels.size(); ++i) m[t.labels[i]] = t.rows[d][i];
    rows.push_back(Json{{"degree", d}, {"dim", t.component_dims[d]}, {"multiplicities", m}});
  }
  j["rows"] = rows;
  if (!t.fits.empty()) {
    Json fits = Json::object();
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
      const auto& f = t.fits[i];
      Json e{{"status", fit_status_name(f.status)}};
      if (f.status == FitStatus::Ok) {
        e["numerator"] = f.series.numerator;
        e["window"] = f.series.window;
        e["text"] = f.series.to_string();
        auto k = krull_dim(f.series);
        e["krull_dim"] = k ? Json(*k) : Json(nullptr);
      } else {
        e["message"] = f.message;
      }
      fits[t.labels[i]] = e;
    }
    j["fit"] = Json{{"denominator", t.fit_denominator}, {"series", fits}};
  }
  return j;
}

SeriesTable series_from_json(const Json& j) {
  try {
    if (j.at("schema").get<std::string>() != kSeriesSchema) throw Error(ErrorCode::InvalidInput, "not a series document");
    SeriesTable t;
    t.p = j.at("p").get<Scalar>();
    t.max_degree = j.at("max_degree").get<std::size_t>();
    for (const auto& l : j.at("labels")) {
      t.labels.push_back(l.at("label").get<std::string>());
      t.class_dims.push_back(l.at("dim").get<std::size_t>());
    }
    for (const auto& r : j.at("rows")) {
      t.component_dims.push_back(r.at("dim").get<std::size_t>());
      std::vector<std::size_t> row;
      for (const auto& l : t.labels) row.push_back(r.at("multiplicities").at(l).get<std::size_t>());
      t.rows.push_back(std::move(row));
    }
    if (j.contains("fit")) {
      t.fit_denominator = j["fit"].at("denominator").get<std::vector<std::size_t>>();
      for (const auto& l : t.labels) {
        const Json& e = j["fit"].at("series").at(l);
        FitResult f;
        const std::string st = e.at("status").get<std::string>();
        f.status = st == "ok" ? FitStatus::Ok : st == "no-fit" ? FitStatus::NoFit : FitStatus::Inconclusive;
        if (f.status == FitStatus::Ok) {
          f.series.numerator = e.at("numerator").get<std::vector<long long>>();
          f.series.denominator = t.fit_denominator;
          f.series.window = e.at("window").get<std::size_t>();
        } else {
          f.message = e.at("message").get<std::string>();
        }
        t.fits.push_back(std::move(f));
      }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("series document: ") + e.what());
  }
}

Json to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json w = Json::object();
    for (const auto& [k, v] : c.witness) w[k] = v;
    checks.push_back(Json{{"name", c.name}, {"verdict", verdict_name(c.verdict)}, {"detail", c.detail}, {"witness", w}});
  }
  Json findings = Json::object();
  for (const auto& [k, v] : r.findings) findings[k] = v;
  return Json{{"schema", kReportSchema},
              {"suite", r.suite},
              {"passed", r.passed()},
              {"counts",
               {{"pass", r.count(Verdict::Pass)},
                {"fail", r.count(Verdict::Fail)},
                {"inconclusive", r.count(Verdict::Inconclusive)}}},
              {"checks", checks},
              {"findings", findings}};
}

namespace {

std::string table_text(const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> w;
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (w.size() <= i) w.push_back(0);
      w[i] = std::max(w[i], row[i].size());
    }
  std::ostringstream os;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += std::string(w[i] - row[i].size(), ' ') + row[i];
    }
    os << line << "\n";
  }
  return os.str();
}

}  // namespace

std::string emit_series(const SeriesTable& t, Format f) {
  if (f == Format::Json) return to_json(t).dump(2) + "\n";
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head = {"degree", "dim"};
  head.insert(head.end(), t.labels.begin(), t.labels.end());
  cells.push_back(head);
  for (std::size_t d = 0; d < t.rows.size(); ++d) {
    std::vector<std::string> r = {std::to_string(d), std::to_string(t.component_dims[d])};
    for (auto v : t.rows[d]) r.push_back(std::to_string(v));
    cells.push_back(std::move(r));
  }
  std::ostringstream os;
  if (f == Format::Csv) {
    for (const auto& r : cells) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
    return os.str();
  }
  os << "# p = " << t.p << ", degrees 0.." << t.max_degree << "\n";
  os << "# classes:";
  for (std::size_t i = 0; i < t.labels.size(); ++i) os << " " << t.labels[i] << "(dim " << t.class_dims[i] << ")";
  os << "\n" << table_text(cells);
  for (std::size_t i = 0; i < t.fits.size(); ++i) {
    const auto& fr = t.fits[i];
    os << "fit " << t.labels[i] << ": ";
    if (fr.status == FitStatus::Ok) {
      auto k = krull_dim(fr.series);
      os << fr.series.to_string() << "  krull " << (k ? std::to_string(*k) : std::string("undefined"));
    } else {
      os << fit_status_name(fr.status) << " (" << fr.message << ")";
    }
    os << "\n";
  }
  return os.str();
}

std::string emit_report(const Report& r, Format f) {
  if (f == Format::Csv) throw Error(ErrorCode::InvalidInput, "csv output is available for series only");
  if (f == Format::Json) return to_json(r).dump(2) + "\n";
  std::ostringstream os;
  os << "suite " << r.suite << ": " << r.count(Verdict::Pass) << " pass, " << r.count(Verdict::Fail) << " fail, "
     << r.count(Verdict::Inconclusive) << " inconclusive\n";
  std::vector<std::vector<std::string>> cells;
  for (const auto& c : r.checks) {
    std::string w;
    for (const auto& [k, v] : c.witness) w += (w.empty() ? "" : " ") + k + "=" + v;
    std::string v = verdict_name(c.verdict);
    std::transform(v.begin(), v.end(), v.begin(), ::toupper);
    cells.push_back({v, c.name, c.detail + (w.empty() ? "" : " [" + w + "]")});
  }
  // Left-aligned columns read better for prose.
  std::vector<std::size_t> w(3, 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < 3; ++i) w[i] = std::max(w[i], row[i].size());
  for (const auto& row : cells)
    os << row[0] << std::string(w[0] - row[0].size() + 2, ' ') << row[1] << std::string(w[1] - row[1].size() + 2, ' ')
       << row[2] << "\n";
  for (const auto& [k, v] : r.findings) os << "finding " << k << " = " << v << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

Cache::Cache(fs::path dir) : dir_(std::move(dir)) {}

void Cache::ensure_writable() const {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) throw Error(ErrorCode::IoFailure, "cache directory " + dir_.string() + " is not writable");
  const fs::path probe = dir_ / ".probe";
  {
    std::ofstream out(probe);
    if (!out) throw Error(ErrorCode::IoFailure, "cache directory " + dir_.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::optional<Cache::Entry> Cache::read(const fs::path& file, bool& corrupt) const {
  corrupt = false;
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::string magic, version_word, sha_word, digest;
  int version = 0;
  std::getline(in, magic);
  in >> version_word >> version >> sha_word >> digest;
  in.ignore(1);
  std::stringstream rest;
  rest << in.rdbuf();
  const std::string payload = rest.str();
  if (magic != kCacheMagic || version_word != "version" || sha_word != "sha256") {
    corrupt = true;
    return std::nullopt;
  }
  if (version != kCacheVersion) return std::nullopt;
  if (sha256_hex(payload) != digest) {
    corrupt = true;
    return std::nullopt;
  }
  try {
    Json j = Json::parse(payload);
    Entry e;
    e.degree = j.at("degree").get<std::size_t>();
    e.component_dim = j.at("component_dim").get<std::size_t>();
    const Scalar p = j.at("p").get<Scalar>();
    for (const auto& c : j.at("classes")) {
      e.labels.push_back(c.at("label").get<std::string>());
      e.class_dims.push_back(c.at("dim").get<std::size_t>());
      std::vector<Matrix> gens;
      for (const auto& m : c.at("generators")) gens.push_back(matrix_from_json(m, p));
      e.class_generators.push_back(std::move(gens));
    }
    e.row = j.at("row").get<std::vector<std::size_t>>();
    if (e.row.size() != e.labels.size()) throw Error(ErrorCode::InvalidInput, "row length");
    return e;
  } catch (const std::exception&) {
    corrupt = true;
    return std::nullopt;
  }
}

std::optional<Cache::Entry> Cache::load(const std::string& key) {
  const fs::path file = dir_ / (key + ".entry");
  if (!fs::exists(file)) return std::nullopt;
  bool corrupt = false;
  auto e = read(file, corrupt);
  if (corrupt) warnings_.push_back("warning: ignoring corrupt cache entry " + file.filename().string());
  if (!e) return std::nullopt;
  const fs::path hits = dir_ / (key + ".hits");
  std::size_t n = 0;
  {
    std::ifstream in(hits);
    if (in) in >> n;
  }
  std::ofstream(hits) << n + 1 << "\n";
  return e;
}

void Cache::store(const std::string& key, const Entry& e) const {
  Json classes = Json::array();
  Scalar p = 2;
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    Json gens = Json::array();
    for (const auto& m : e.class_generators[i]) {
      gens.push_back(matrix_json(m));
      p = m.p();
    }
    classes.push_back(Json{{"label", e.labels[i]}, {"dim", e.class_dims[i]}, {"generators", gens}});
  }
  Json j{{"degree", e.degree}, {"component_dim", e.component_dim}, {"p", p}, {"classes", classes}, {"row", e.row}};
  const std::string payload = j.dump() + "\n";
  const fs::path file = dir_ / (key + ".entry");
  const fs::path tmp = dir_ / (key + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
    out << kCacheMagic << "\nversion " << kCacheVersion << "\nsha256 " << sha256_hex(payload) << "\n" << payload;
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot write " + file.string());
}

std::vector<Cache::FileStat> Cache::stats() const {
  std::vector<FileStat> out;
  if (!fs::is_directory(dir_)) return out;
  for (const auto& de : fs::directory_iterator(dir_)) {
    if (de.path().extension() != ".entry") continue;
    FileStat s;
    s.key = de.path().stem().string();
    s.bytes = de.file_size();
    std::ifstream in(dir_ / (s.key + ".hits"));
    if (in) in >> s.hits;
    bool corrupt = false;
    s.valid = read(de.path(), corrupt).has_value();
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const FileStat& a, const FileStat& b) { return a.key < b.key; });
  return out;
}

std::size_t Cache::gc() const {
  std::size_t removed = 0;
  if (!fs::is_directory(dir_)) return 0;
  std::vector<fs::path> doomed;
  for (const auto& de : fs::directory_iterator(dir_)) {
    const auto ext = de.path().extension();
    const fs::path entry = dir_ / (de.path().stem().string() + ".entry");
    if (ext == ".entry") {
      bool corrupt = false;
      if (!read(de.path(), corrupt)) doomed.push_back(de.path());
    } else if ((ext == ".hits" && !fs::exists(entry)) || ext == ".tmp") {
      doomed.push_back(de.path());
    }
  }
  for (const auto& p : doomed) {
    std::error_code ec;
    if (fs::remove(p, ec)) ++removed;
    if (p.extension() == ".entry") fs::remove(dir_ / (p.stem().string() + ".hits"), ec);
  }
  return removed;
}

// ---------------------------------------------------------------------------

namespace {

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::CapExceeded:
    case ErrorCode::GroupTooLarge: return 3;
    case ErrorCode::Inconclusive: return 4;
    case ErrorCode::IoFailure: return 5;
    case ErrorCode::InternalError:
    case ErrorCode::CertificationFailure: return 1;
    default: return 2;
  }
}

JobConfig configure(const std::string& text, const Overrides& o) {
  JobConfig c = parse_config(text);
  if (o.max_degree) c.max_degree = *o.max_degree;
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = std::max<std::size_t>(1, *o.threads);
  if (o.format) c.format = *o.format;
  if (o.cache_dir) c.cache_dir = *o.cache_dir;
  return c;
}

GradedOptions engine_options(const JobConfig& c) {
  GradedOptions opt;
  opt.seed = c.seed;
  opt.threads = c.threads;
  return opt;
}

template <class F>
CommandResult guarded(F&& body) {
  CommandResult r;
  try {
    body(r);
  } catch (const Error& e) {
    r.exit_code = exit_code_for(e.code());
    r.err += std::string("error: ") + e.what() + "\n";
  }
  return r;
}

SeriesTable series_with_cache(const JobConfig& c, CommandResult& res) {
  const std::size_t D = c.max_degree;
  std::optional<Cache> cache;
  const Json frag = group_fragment(c);
  if (!c.cache_dir.empty()) {
    cache.emplace(c.cache_dir);
    cache->ensure_writable();
    std::vector<Cache::Entry> hit;
    for (std::size_t d = 0; d <= D; ++d) {
      auto e = cache->load(content_key(frag, d));
      if (!e || e->degree != d) break;
      hit.push_back(std::move(*e));
    }
    for (const auto& w : cache->warnings()) res.err += w + "\n";
    if (hit.size() == D + 1) {
      SeriesTable t;
      t.p = c.p;
      t.max_degree = D;
      t.labels = hit.back().labels;
      t.class_dims = hit.back().class_dims;
      for (const auto& e : hit) {
        std::vector<std::size_t> row(t.labels.size(), 0);
        std::copy(e.row.begin(), e.row.end(), row.begin());
        t.rows.push_back(std::move(row));
        t.component_dims.push_back(e.component_dim);
      }
      res.err += "cache: " + std::to_string(hit.size()) + " degrees served from " + c.cache_dir + "\n";
      return t;
    }
  }
  GradedEngine e(build_group(c), engine_options(c));
  auto gs = green_series(e, D);
  SeriesTable t = series_table(gs, c.p);
  if (cache) {
    const auto& reg = e.registry();
    for (std::size_t d = 0; d <= D; ++d) {
      Cache::Entry en;
      en.degree = d;
      en.component_dim = t.component_dims[d];
      for (std::size_t i = 0; i < reg.size(); ++i) {
        if (reg[i].first_degree > d) continue;
        en.labels.push_back(reg[i].label);
        en.class_dims.push_back(reg[i].data.rep.dim());
        en.class_generators.push_back(reg[i].data.rep.generator_action());
        en.row.push_back(t.rows[d][i]);
      }
      cache->store(content_key(frag, d), en);
    }
    res.err += "cache: stored " + std::to_string(D + 1) + " degrees in " + c.cache_dir + "\n";
  }
  return t;
}

}  // namespace

CommandResult cmd_series(const std::string& config_text, const Overrides& o) {
  return guarded([&](CommandResult& res) {
    JobConfig c = configure(config_text, o);
    SeriesTable t = series_with_cache(c, res);
    if (c.fit || o.require_fit) {
      std::vector<std::size_t> den = c.fit_denominator;
      if (den.empty()) den = build_parameters(c, build_group(c)).degrees();
      fit_series(t, den);
    }
    res.out = emit_series(t, c.format);
    if (o.require_fit)
      for (std::size_t i = 0; i < t.fits.size(); ++i)
        if (t.fits[i].status != FitStatus::Ok) {
          res.exit_code = 4;
          res.err += "error: series fit for " + t.labels[i] + " is " + fit_status_name(t.fits[i].status) + "\n";
        }
  });
}

CommandResult cmd_verify(const std::string& config_text, const std::string& suite, const Overrides& o) {
  return guarded([&](CommandResult& res) {
    static const std::set<std::string> suites = {"inc", "equiv", "depth", "summand", "mackey"};
    if (!suites.count(suite)) throw Error(ErrorCode::InvalidInput, "unknown suite '" + suite + "'");
    JobConfig c = configure(config_text, o);
    if (c.format == Format::Csv) throw Error(ErrorCode::InvalidInput, "csv output is available for series only");
    GroupPtr g = build_group(c);
    const std::size_t D = c.max_degree;
    Report r;
    if (suite == "inc") {
      r = c.subgroup_class ? verify_transfer_inclusion(g, build_class(c), D) : verify_inclusion_suite(g, D);
    } else if (suite == "mackey") {
      GradedEngine e(g, engine_options(c));
      auto ms = build_modules(c, e);
      if (ms.empty()) ms = {GModule::trivial(g), GModule::forms(g)};
      r = verify_mackey(g, ms, D);
    } else {
      GradedEngine e(g, engine_options(c));
      std::optional<ParameterSystem> ps;
      if (c.parameter_mode != "default") ps = build_parameters(c, g);
      if (suite == "equiv") {
        r = verify_equiv_diagram(e, D);
      } else if (suite == "summand") {
        r = verify_summand(e, D, ps);
      } else {
        auto ms = build_modules(c, e);
        if (ms.empty()) throw Error(ErrorCode::InvalidInput, "suite depth needs at least one module");
        r.suite = "depth";
        for (const auto& m : ms) {
          Report one = verify_depth_bounds(e, m, D, ps);
          for (auto& ch : one.checks) ch.name = m.label() + ":" + ch.name;
          for (auto& f : one.findings) f.first = m.label() + ":" + f.first;
          r.append(one);
        }
      }
    }
    res.out = emit_report(r, c.format);
    if (!r.passed()) {
      res.exit_code = 1;
      res.err += "verification failed: " + std::to_string(r.count(Verdict::Fail)) + " check(s)\n";
    }
  });
}

CommandResult cmd_cache(const std::string& action, const std::string& cache_dir, Format f) {
  return guarded([&](CommandResult& res) {
    if (action != "stats" && action != "gc") throw Error(ErrorCode::InvalidInput, "unknown cache action '" + action + "'");
    if (cache_dir.empty()) throw Error(ErrorCode::InvalidInput, "no cache directory given");
    Cache cache(cache_dir);
    cache.ensure_writable();
    if (action == "gc") {
      const std::size_t n = cache.gc();
      res.out = f == Format::Json ? Json{{"removed", n}}.dump(2) + "\n" : "removed " + std::to_string(n) + " file(s)\n";
      return;
    }
    auto st = cache.stats();
    std::uintmax_t bytes = 0;
    std::size_t hits = 0;
    for (const auto& s : st) {
      bytes += s.bytes;
      hits += s.hits;
    }
    if (f == Format::Json) {
      Json entries = Json::array();
      for (const auto& s : st)
        entries.push_back(Json{{"key", s.key}, {"bytes", s.bytes}, {"hits", s.hits}, {"valid", s.valid}});
      res.out = Json{{"entries", st.size()}, {"bytes", bytes}, {"hits", hits}, {"files", entries}}.dump(2) + "\n";
    } else {
      std::ostringstream os;
      os << "entries " << st.size() << "\nbytes " << bytes << "\nhits " << hits << "\n";
      for (const auto& s : st)
        os << s.key << "  " << s.bytes << " bytes  " << s.hits << " hits" << (s.valid ? "" : "  invalid") << "\n";
      res.out = os.str();
    }
  });
}

}  // namespace modinv::io
