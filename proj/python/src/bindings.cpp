#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tpdo/catalog.hpp"
#include "tpdo/classify.hpp"
#include "tpdo/commands.hpp"
#include "tpdo/error.hpp"
#include "tpdo/lattice.hpp"
#include "tpdo/lbeta.hpp"
#include "tpdo/orbit.hpp"
#include "tpdo/quantize.hpp"

namespace py = pybind11;
using namespace tpdo;

namespace {

// Records cross the boundary as JSON so that Python sees exactly the report schema.
py::object to_py(const ReportJson& j) { return py::module_::import("json").attr("loads")(dump_report_json(j)); }

FreqIndex freq(const std::vector<int>& v) { return FreqIndex(std::span<const int>(v)); }
MultiIndex multi(const std::vector<int>& v) { return MultiIndex(std::span<const int>(v)); }

py::array_t<cplx> grid_array(const TorusGrid& g, std::vector<cplx> data) {
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.dim()), g.points_per_dim());
  py::array_t<cplx> out(shape);
  std::copy(data.begin(), data.end(), out.mutable_data());
  return out;
}

std::vector<cplx> flat_from(const TorusGrid& g, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& a) {
  if (static_cast<std::size_t>(a.size()) != g.size()) {
    throw Error(ErrorKind::size_mismatch, "array has " + std::to_string(a.size()) + " entries, grid has " +
                                              std::to_string(g.size()));
  }
  return {a.data(), a.data() + a.size()};
}

std::vector<std::vector<int>> basis_list(const TruncatedOperator& op) {
  std::vector<std::vector<int>> out;
  for (const auto& k : op.basis()) out.emplace_back(k.components().begin(), k.components().end());
  return out;
}

}  // namespace

PYBIND11_MODULE(_tpdo, m) {
  m.doc() = "Discrete-symbol pseudodifferential operators on the torus";

  static py::exception<Error> error(m, "TpdoError", PyExc_ValueError);
  static py::exception<NonConvergence> nonconv(m, "NonConvergence", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NonConvergence& e) {
      py::set_error(nonconv, e.what());
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<DiscreteSymbol>(m, "Symbol", "Family a_j(x), |j|_inf <= J, sampled on an N^n grid")
      .def_static(
          "from_expression",
          [](const std::string& text, int dim, int points, int cutoff, const std::map<std::string, double>& params) {
            return build_symbol(parse_symbol_spec(text, params), TorusGrid(dim, points), cutoff);
          },
          py::arg("text"), py::arg("dim"), py::arg("points"), py::arg("cutoff"),
          py::arg("parameters") = std::map<std::string, double>{})
      .def_static(
          "from_catalog",
          [](const std::string& name, int dim, int points, int cutoff, double decay, std::uint64_t seed) {
            CatalogOptions o;
            o.decay = decay;
            o.seed = seed;
            const auto e = catalog_entry(name, dim, o);
            return build_symbol(e.spec, TorusGrid(dim, points > 0 ? points : e.recommended_points), cutoff);
          },
          py::arg("name"), py::arg("dim") = 1, py::arg("points") = 0, py::arg("cutoff") = 16,
          py::arg("decay") = 1.0, py::arg("seed") = CatalogOptions{}.seed,
          "points = 0 uses the entry's recommended grid")
      .def_property_readonly("dim", &DiscreteSymbol::dim)
      .def_property_readonly("cutoff", &DiscreteSymbol::cutoff)
      .def_property_readonly("points", [](const DiscreteSymbol& s) { return s.grid().points_per_dim(); })
      .def("bandwidth", &DiscreteSymbol::bandwidth, py::arg("rel_tol") = 1e-10)
      .def(
          "coefficients",
          [](const DiscreteSymbol& s, const std::vector<int>& j) {
            const auto& f = s.at(freq(j));
            return grid_array(s.grid(), {f.coefficients().begin(), f.coefficients().end()});
          },
          py::arg("j"), "hat a_j(k) = int e_{-k} a_j, frequencies -N/2..N/2-1 along each axis")
      .def(
          "values", [](const DiscreteSymbol& s, const std::vector<int>& j) { return grid_array(s.grid(), s.at(freq(j)).values()); },
          py::arg("j"), "a_j at the nodes 2 pi m / N")
      .def(
          "translate", [](const DiscreteSymbol& s, const std::vector<double>& y) { return symbol_translate(s, y); },
          py::arg("y"))
      .def(
          "derivative",
          [](const DiscreteSymbol& s, const std::vector<int>& a) { return symbol_derivative(s, multi(a)); },
          py::arg("alpha"));

  py::class_<TruncatedOperator>(m, "Operator", "Matrix of an operator on the modes |k|_inf <= K")
      .def(py::init([](int dim, int cutoff, const Eigen::MatrixXcd& a) { return TruncatedOperator(dim, cutoff, a); }),
           py::arg("dim"), py::arg("cutoff"), py::arg("matrix"))
      .def_property_readonly("dim", &TruncatedOperator::dim)
      .def_property_readonly("cutoff", &TruncatedOperator::cutoff)
      .def_property_readonly("matrix", &TruncatedOperator::matrix, py::return_value_policy::copy)
      .def_property_readonly("basis", &basis_list, "mode of each row and column, graded lex order")
      .def("norm", [](const TruncatedOperator& a, double tol) { return operator_norm(a, tol); }, py::arg("tol") = 1e-10);

  m.def("catalog_names", &catalog_names);
  m.def("to_matrix", &to_matrix, py::arg("symbol"), py::arg("cutoff"), py::arg("bandwidth_tol") = 1e-10);
  m.def(
      "extract_symbol",
      [](const TruncatedOperator& a, int out_cutoff, int points, int bandwidth) {
        return extract_symbol(a, out_cutoff, TorusGrid(a.dim(), points), bandwidth);
      },
      py::arg("operator"), py::arg("out_cutoff"), py::arg("points"), py::arg("bandwidth") = -1);
  m.def("interior_symbol_diff", &interior_symbol_diff, py::arg("a"), py::arg("b"), py::arg("cutoff"),
        py::arg("bandwidth"));
  m.def(
      "apply",
      [](const DiscreteSymbol& s, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& u) {
        const PeriodicFunction f(s.grid(), flat_from(s.grid(), u));
        const auto r = apply(s, f);
        return grid_array(s.grid(), {r.coefficients().begin(), r.coefficients().end()});
      },
      py::arg("symbol"), py::arg("coefficients"), "Op(a) u on Fourier coefficients (centered layout)");

  m.def("lattice_constant", [](int dim, int p) { return to_py(to_json(lattice_constant(dim, p))); }, py::arg("dim"),
        py::arg("p"));
  m.def(
      "norm_bound_check",
      [](const DiscreteSymbol& s, int p, int cutoff, double tol) { return to_py(to_json(norm_bound_check(s, p, cutoff, tol))); },
      py::arg("symbol"), py::arg("p"), py::arg("cutoff"), py::arg("tolerance") = 1e-8);
  m.def(
      "analyticity_fit",
      [](const DiscreteSymbol& s, int max_order) { return to_py(to_json(analyticity_fit(s, max_order))); },
      py::arg("symbol"), py::arg("max_order") = 14);

  m.def(
      "orbit_eval", [](const DiscreteSymbol& s, const std::vector<double>& y, int k) { return orbit_eval(s, y, k); },
      py::arg("symbol"), py::arg("y"), py::arg("cutoff"));
  m.def(
      "conjugate_translation",
      [](const TruncatedOperator& a, const std::vector<double>& y) { return conjugate_translation(a, y); },
      py::arg("operator"), py::arg("y"));
  m.def(
      "richardson_check",
      [](const DiscreteSymbol& s, const std::vector<int>& a, const std::vector<double>& y, double h, int k) {
        return to_py(to_json(richardson_check(s, multi(a), y, h, k)));
      },
      py::arg("symbol"), py::arg("alpha"), py::arg("y"), py::arg("step"), py::arg("cutoff"));
  m.def(
      "orbit_growth_table",
      [](const DiscreteSymbol& s, int max_order, int k) { return to_py(to_json(orbit_growth_table(s, max_order, k))); },
      py::arg("symbol"), py::arg("max_order"), py::arg("cutoff"));

  m.def(
      "bbeta_build", [](const DiscreteSymbol& s, const std::vector<int>& b) { return bbeta_build(s, multi(b)); },
      py::arg("symbol"), py::arg("beta"));
  m.def(
      "recover_symbol", [](const DiscreteSymbol& s, const std::vector<int>& b) { return recover_symbol(s, multi(b)); },
      py::arg("symbol"), py::arg("beta"));
  m.def(
      "bound_chain_check",
      [](const DiscreteSymbol& s, const std::vector<int>& a, int k) { return to_py(to_json(bound_chain_check(s, multi(a), k))); },
      py::arg("symbol"), py::arg("alpha"), py::arg("cutoff"));
  m.def("mu_constant", [](int p) { return to_py(to_json(mu_constant(p))); }, py::arg("p"));

  m.def("default_config", [] { return emit_config(ExperimentConfig{}); });
  m.def(
      "run_command",
      [](const std::string& name, const std::string& config_json, bool strict) {
        const auto config = parse_config(config_json);
        ReportEnvelope env;
        {
          py::gil_scoped_release release;
          env = run_command(name, config, {strict});
        }
        return py::make_tuple(to_string(env.status(strict)), dump_report_json(envelope_json(env, strict)));
      },
      py::arg("command"), py::arg("config_json") = "{}", py::arg("strict") = false,
      "Returns (status, report JSON text)");
}
