#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "glvortex/error.hpp"
#include "glvortex/io.hpp"
#include "glvortex/operators.hpp"
#include "glvortex/profiles.hpp"
#include "glvortex/spectra.hpp"
#include "glvortex/verdict.hpp"

namespace py = pybind11;
using namespace glvortex;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

// reports travel as the same JSON the CLI writes
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

ClassifyOptions options(std::size_t eigenpairs) {
  ClassifyOptions o;
  o.eigenpairs = eigenpairs;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial Ginzburg-Landau vortex profiles and their linearized spectra";
  m.attr("__version__") = version();

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<GridConfig>(m, "GridConfig")
      .def(py::init([](double r_max, std::size_t n_points, double r_min) {
             return GridConfig{r_max, n_points, r_min};
           }),
           py::arg("r_max") = 20.0, py::arg("n_points") = 2000, py::arg("r_min") = 0.0)
      .def_readwrite("r_max", &GridConfig::r_max)
      .def_readwrite("n_points", &GridConfig::n_points)
      .def_readwrite("r_min", &GridConfig::r_min)
      .def("__repr__", [](const GridConfig& g) {
        return "GridConfig(r_max=" + format_double(g.r_max) + ", n_points=" + std::to_string(g.n_points) +
               ", r_min=" + format_double(g.r_min) + ")";
      });

  py::class_<VortexProfile>(m, "Profile")
      .def_readonly("n", &VortexProfile::n)
      .def_readonly("lam", &VortexProfile::lambda)
      .def_readonly("iterations", &VortexProfile::iterations)
      .def_readonly("residual", &VortexProfile::residual)
      .def_property_readonly("r", [](const VortexProfile& p) { return to_array(p.grid->nodes); })
      .def_property_readonly("f", [](const VortexProfile& p) { return to_array(p.f); })
      .def_property_readonly("a", [](const VortexProfile& p) { return to_array(p.a); })
      .def_property_readonly("f_prime", [](const VortexProfile& p) { return to_array(p.f_prime); })
      .def_property_readonly("a_prime", [](const VortexProfile& p) { return to_array(p.a_prime); })
      .def_property_readonly("inequality_margin",
                             [](const VortexProfile& p) { return to_array(profile_inequality_margin(p)); })
      .def("energy", &vortex_energy, "Planar energy, pi n at lambda = 1")
      .def("to_csv", [](const VortexProfile& p) { return profile_csv(p); });

  m.def(
      "solve_profile",
      [](int n, double lambda, const GridConfig& grid) {
        if (n < 1) throw py::value_error("n must be >= 1");
        if (!(lambda > 0.0)) throw py::value_error("lambda must be positive");
        py::gil_scoped_release release;
        return solve_profile(n, lambda, grid.make());
      },
      py::arg("n"), py::arg("lam"), py::arg("grid") = GridConfig{});

  m.def(
      "classify",
      [](int n, double lambda, const GridConfig& grid, std::size_t eigenpairs) {
        StabilityReport r;
        {
          py::gil_scoped_release release;
          r = classify(n, lambda, grid, options(eigenpairs));
        }
        return to_python(to_json(r));
      },
      py::arg("n"), py::arg("lam"), py::arg("grid") = GridConfig{}, py::arg("eigenpairs") = 6,
      "Stability report as a dict; 'classification' is stable, unstable or marginal.");

  m.def(
      "sweep",
      [](std::vector<int> n_list, std::vector<double> lambda_list, const GridConfig& grid, std::size_t jobs,
         std::size_t eigenpairs) {
        std::vector<SweepCell> cells;
        {
          py::gil_scoped_release release;
          cells = sweep(std::move(n_list), std::move(lambda_list), grid, jobs, options(eigenpairs));
        }
        py::list out;
        for (const auto& c : cells) {
          if (c.report) {
            out.append(to_python(to_json(*c.report)));
          } else {
            py::dict d;
            d["n"] = c.n;
            d["lambda"] = c.lambda;
            d["error"] = c.error;
            out.append(d);
          }
        }
        return out;
      },
      py::arg("n_list"), py::arg("lambda_list"), py::arg("grid") = GridConfig{}, py::arg("jobs") = 1,
      py::arg("eigenpairs") = 6);

  m.def(
      "block_spectrum",
      [](const VortexProfile& p, int mode, std::size_t k, bool deflate) {
        if (mode < 0) throw py::value_error("m must be >= 0");
        EigenResult r;
        {
          py::gil_scoped_release release;
          const BlockOperator l = assemble_Lm(p, mode);
          std::vector<std::vector<double>> defl;
          if (deflate && mode == 1) defl.push_back(translational_mode(p).packed());
          r = smallest_eigenpairs(l.matrix, k, defl);
        }
        return to_array(r.eigenvalues);
      },
      py::arg("profile"), py::arg("m"), py::arg("k") = 6, py::arg("deflate") = false,
      "Lowest k eigenvalues of L_m; with deflate the translational mode is removed from L_1.");
}
