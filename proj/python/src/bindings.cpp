#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "frachs/cli.hpp"
#include "frachs/constants.hpp"
#include "frachs/error.hpp"
#include "frachs/geometry.hpp"
#include "frachs/layer_cake.hpp"
#include "frachs/verify.hpp"

namespace py = pybind11;
using namespace frachs;

namespace {

Point to_point(const std::vector<double>& v) {
  if (v.empty() || v.size() > static_cast<std::size_t>(kMaxDim)) throw py::value_error("point dimension out of range");
  return Point(std::span<const double>(v.data(), v.size()));
}

}  // namespace

PYBIND11_MODULE(_frachs, m) {
  m.attr("__version__") = FRACHS_VERSION;

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);

  py::class_<Params>(m, "Params")
      .def(py::init<int, double, double>(), py::arg("n"), py::arg("alpha"), py::arg("p") = 2.0)
      .def_property_readonly("n", &Params::n)
      .def_property_readonly("alpha", &Params::alpha)
      .def_property_readonly("p", &Params::p)
      .def_property_readonly("p_star", &Params::p_star)
      .def_property_readonly("two_star", &Params::two_star)
      .def_property_readonly("q", &Params::q)
      .def("__repr__", &Params::describe);

  py::class_<QuadratureConfig>(m, "QuadratureConfig")
      .def(py::init<>())
      .def_readwrite("samples", &QuadratureConfig::samples)
      .def_readwrite("seed", &QuadratureConfig::seed)
      .def_readwrite("batches", &QuadratureConfig::batches)
      .def_readwrite("low_discrepancy", &QuadratureConfig::low_discrepancy);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("std_error", &Estimate::std_error)
      .def_readonly("divergent", &Estimate::divergent);

  m.def("eta", [](const std::vector<double>& w) { return eta(to_point(w)); });
  m.def("map_T", [](const std::vector<double>& w) { return map_T(to_point(w)).to_vector(); });
  m.def("cp_min", &cp_min, py::arg("p"));
  m.def("sphere_area", &sphere_area, py::arg("n"));
  m.def("shell_integral", &shell_integral, py::arg("d"), py::arg("params"));
  m.def("shell_integral_radial", &shell_integral_radial, py::arg("d"), py::arg("params"));
  m.def("tail_t_integral", &tail_t_integral, py::arg("params"));
  m.def("hardy_constant_ground_state", &hardy_constant_ground_state, py::arg("params"));
  m.def("d_constant_polar", &d_constant_polar, py::arg("params"));

  m.def(
      "run_checks",
      [](const std::string& suite, const Params& params, const QuadratureConfig& cfg) {
        py::list out;
        for (const auto& c : run_suites(suite, params, cfg)) {
          py::dict d;
          d["suite"] = c.suite;
          d["name"] = c.name;
          d["measured"] = c.measured;
          d["comparison"] = c.comparison;
          d["tolerance"] = c.tolerance;
          d["passed"] = c.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "exact", py::arg("params") = Params(2, 1.5), py::arg("config") = QuadratureConfig{});

  m.def("_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  });
}
