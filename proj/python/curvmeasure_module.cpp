#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "curvmeasure/bessel.hpp"
#include "curvmeasure/curvature.hpp"
#include "curvmeasure/error.hpp"
#include "curvmeasure/fd_eigen.hpp"
#include "curvmeasure/report.hpp"
#include "curvmeasure/spectra.hpp"
#include "curvmeasure/surface_file.hpp"

namespace py = pybind11;
using namespace curvmeasure;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

DomainSpec domain(const std::string& name, const std::vector<double>& size) { return DomainSpec::parse(name, size); }

struct Surface {
  GluedSurface glued;
  CurvatureMeasure measure;

  explicit Surface(const SurfaceDocument& doc) : glued(build(doc)), measure(compute_curvature_measure(glued)) {}
};

}  // namespace

PYBIND11_MODULE(curvmeasure, m) {
  m.doc() = "Curvature measures of glued surfaces and doubled-domain spectra";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto input = py::register_exception<InputError>(m, "InputError", base.ptr());
  auto numeric = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", input.ptr());
  py::register_exception<SyntaxError>(m, "SyntaxError", input.ptr());
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", numeric.ptr());
  py::register_exception<InsufficientRange>(m, "InsufficientRange", numeric.ptr());
  py::register_exception<OutOfValidatedRange>(m, "OutOfValidatedRange", numeric.ptr());

  py::class_<Surface>(m, "Surface")
      .def_static("from_file", [](const std::filesystem::path& p) { return Surface(load_surface(p)); }, py::arg("path"))
      .def_static("from_json", [](const std::string& text) { return Surface(parse_surface(text)); }, py::arg("text"))
      .def_property_readonly("euler_characteristic", [](const Surface& s) { return euler_characteristic(s.glued); })
      .def("measure",
           [](const Surface& s, const std::string& region) {
             return measure_of(s.measure, parse_region(s.glued, region)).total;
           },
           py::arg("region") = "all")
      .def("parts", [](const Surface& s) { return to_python(to_json(s.measure)); })
      .def("gauss_bonnet",
           [](const Surface& s, double tol) { return to_python(to_json(verify_gauss_bonnet(s.measure, tol))); },
           py::arg("tol") = 1e-5)
      .def("quadrilateral",
           [](const Surface& s, const std::string& seam, double tx, double ty, const std::vector<double>& lengths) {
             return to_python(to_json(quadrilateral_angle_check(s.glued, s.glued.seam_index(seam), tx, ty, lengths)));
           },
           py::arg("seam"), py::arg("tx"), py::arg("ty"), py::arg("lengths"))
      .def("disc_asymptotics",
           [](const Surface& s, const std::string& seam, double t, const std::vector<double>& radii) {
             return to_python(to_json(disc_area_asymptotics(s.glued, s.glued.seam_index(seam), t, radii)));
           },
           py::arg("seam"), py::arg("t"), py::arg("radii"));

  m.def(
      "spectrum",
      [](const std::string& name, const std::string& bc, double t_max, const std::vector<double>& size) {
        return spectrum(domain(name, size), parse_boundary_condition(bc), t_max);
      },
      py::arg("domain"), py::arg("bc"), py::arg("t_max"), py::arg("size") = std::vector<double>{});

  m.def(
      "fd_eigenvalues",
      [](const std::string& name, const std::string& bc, int grid, int count, const std::vector<double>& size) {
        py::gil_scoped_release release;
        return fd_eigenvalues(domain(name, size), parse_boundary_condition(bc), grid, count).eigenvalues;
      },
      py::arg("domain"), py::arg("bc"), py::arg("grid"), py::arg("count"), py::arg("size") = std::vector<double>{});

  m.def(
      "conjecture",
      [](const std::string& name, double t_max, const std::string& constant, double t_min, std::size_t grid,
         std::size_t bootstrap, std::uint64_t seed, const std::vector<double>& size) {
        const ConjectureOptions opt{t_min, grid, bootstrap, seed};
        return to_python(to_json(conjecture_test(domain(name, size), t_max, ConstantMode::parse(constant), opt)));
      },
      py::arg("domain"), py::arg("t_max"), py::arg("constant") = "paper", py::arg("t_min") = 10.0,
      py::arg("grid") = 2000, py::arg("bootstrap") = 400, py::arg("seed") = 20240917,
      py::arg("size") = std::vector<double>{});

  m.def(
      "weyl",
      [](const std::string& name, const std::string& bc, const std::vector<double>& ts, const std::vector<double>& size) {
        py::list out;
        for (const auto& r : weyl_ivrii_residuals(domain(name, size), parse_boundary_condition(bc), ts)) {
          py::dict row;
          row["t"] = r.t;
          row["n"] = r.n;
          row["residual"] = r.residual;
          row["scaled"] = r.scaled;
          row["uncorrected"] = r.uncorrected;
          out.append(row);
        }
        return out;
      },
      py::arg("domain"), py::arg("bc"), py::arg("t"), py::arg("size") = std::vector<double>{});

  m.def("bessel_zeros", &bessel_zeros, py::arg("nu"), py::arg("x_max"), py::arg("derivative") = false);
}
