// Python extension: the two subcommands and the per-degree decomposition.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "modinv/io.hpp"

namespace py = pybind11;
using namespace modinv;

namespace {

io::Overrides overrides(std::optional<std::size_t> max_degree, std::optional<std::uint64_t> seed,
                        std::optional<std::size_t> threads, const std::string& format,
                        std::optional<std::string> cache_dir, bool require_fit) {
  io::Overrides o;
  o.max_degree = max_degree;
  o.seed = seed;
  o.threads = threads;
  o.format = io::parse_format(format);
  if (!o.format) throw Error(ErrorCode::InvalidInput, "unknown format " + format);
  o.cache_dir = std::move(cache_dir);
  o.require_fit = require_fit;
  return o;
}

GroupPtr make_group(const std::vector<std::vector<std::vector<long long>>>& gens, Scalar p) {
  std::vector<Matrix> ms;
  for (const auto& g : gens) ms.push_back(Matrix::from_rows(g, p));
  return GroupTable::enumerate(ms);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> error(m, "ModinvError");
  py::register_exception_translator([](std::exception_ptr e) {
    try {
      if (e) std::rethrow_exception(e);
    } catch (const Error& x) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(x.what());
      exc.attr("code") = error_code_name(x.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<io::CommandResult>(m, "CommandResult")
      .def_readonly("exit_code", &io::CommandResult::exit_code)
      .def_readonly("out", &io::CommandResult::out)
      .def_readonly("err", &io::CommandResult::err);

  m.def(
      "series",
      [](const std::string& config, std::optional<std::size_t> max_degree, std::optional<std::uint64_t> seed,
         std::optional<std::size_t> threads, const std::string& format, std::optional<std::string> cache_dir,
         bool require_fit) {
        auto o = overrides(max_degree, seed, threads, format, std::move(cache_dir), require_fit);
        py::gil_scoped_release nogil;
        return io::cmd_series(config, o);
      },
      py::arg("config"), py::kw_only(), py::arg("max_degree") = py::none(), py::arg("seed") = py::none(),
      py::arg("threads") = py::none(), py::arg("format") = "json", py::arg("cache_dir") = py::none(),
      py::arg("require_fit") = false);

  m.def(
      "verify",
      [](const std::string& config, const std::string& suite, std::optional<std::size_t> max_degree,
         const std::string& format) {
        auto o = overrides(max_degree, std::nullopt, std::nullopt, format, std::nullopt, false);
        py::gil_scoped_release nogil;
        return io::cmd_verify(config, suite, o);
      },
      py::arg("config"), py::arg("suite"), py::kw_only(), py::arg("max_degree") = py::none(),
      py::arg("format") = "json");

  m.def(
      "multiplicities",
      [](const std::vector<std::vector<std::vector<long long>>>& generators, Scalar p, std::size_t max_degree) {
        auto g = make_group(generators, p);
        GradedEngine e(g, GradedOptions{0, 1, false});
        auto gs = green_series(e, max_degree);
        std::map<std::string, std::vector<std::size_t>> out;
        for (const auto& label : gs.labels)
          for (const auto& row : gs.rows) out[label].push_back(row.count(label) ? row.at(label) : 0);
        return out;
      },
      py::arg("generators"), py::arg("p"), py::arg("max_degree"),
      "Multiplicity of every indecomposable summand of S_d, keyed by class label.");

  m.def("group_order", [](const std::vector<std::vector<std::vector<long long>>>& generators, Scalar p) {
    return make_group(generators, p)->order();
  });
}
