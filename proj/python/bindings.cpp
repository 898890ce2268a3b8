#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relaxwave/io.hpp"
#include "relaxwave/profiles.hpp"
#include "relaxwave/projections.hpp"
#include "relaxwave/rates.hpp"
#include "relaxwave/reduction.hpp"
#include "relaxwave/structure.hpp"

namespace py = pybind11;
using namespace relaxwave;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
template <class T>
std::string dump(const T& value) {
  return io::to_json(value).dump();
}

profiles::InitialData gaussian(const SystemDef& sys, std::optional<CVector> amplitude, double sigma) {
  CVector v = amplitude.value_or(CVector::Unit(sys.n(), 0));
  return profiles::InitialData::gaussian(std::move(v), sigma);
}

}  // namespace

PYBIND11_MODULE(_relaxwave, m) {
  m.doc() = "Large-time profiles of linear hyperbolic relaxation systems";

  // Messages are prefixed with the error code, e.g. "ParseError: ...".
  py::register_exception<Error>(m, "RelaxwaveError");

  py::class_<SystemDef>(m, "System")
      .def(py::init([](std::string name, const CMatrix& a, const CMatrix& b, std::optional<CMatrix> s) {
             return SystemDef::make(std::move(name), a, b, std::move(s));
           }),
           py::arg("name"), py::arg("A"), py::arg("B"), py::arg("S") = py::none())
      .def_property_readonly("name", &SystemDef::name)
      .def_property_readonly("n", &SystemDef::n)
      .def_property_readonly("A", &SystemDef::A)
      .def_property_readonly("B", &SystemDef::B)
      .def_property_readonly("S", &SystemDef::S)
      .def("E", &SystemDef::E, py::arg("xi"))
      .def("to_json", [](const SystemDef& s) { return io::system_to_json(s).dump(); })
      .def("__repr__", [](const SystemDef& s) { return "<System " + s.name() + " n=" + std::to_string(s.n()) + ">"; });

  m.def("load_system", [](const std::string& path) { return io::load_system(path); }, py::arg("path"));
  m.def("parse_system", &io::parse_system, py::arg("text"));
  m.def("damped_wave", &systems::damped_wave);
  m.def("goldstein_kac", &systems::goldstein_kac);
  m.def("asymmetric_relaxation", &systems::asymmetric_relaxation);

  m.def("eigenvalues", &linalg::eigenvalues, py::arg("M"));
  m.def(
      "proj_semisimple_zero",
      [](const CMatrix& a, int mult) {
        auto pr = projections::proj_semisimple_zero(a, mult);
        return py::make_tuple(pr.P, pr.S);
      },
      py::arg("A"), py::arg("m"));
  m.def(
      "proj_oracle",
      [](const CMatrix& a, cplx ev) {
        auto pr = projections::proj_oracle(a, ev);
        return py::make_tuple(pr.P, pr.S, pr.m);
      },
      py::arg("A"), py::arg("eigenvalue") = cplx{0.0});

  m.def("_check_conditions", [](const SystemDef& s) { return dump(structure::check_all(s)); });
  m.def("_reduce_low", [](const SystemDef& s) { return dump(reduction::reduce_low(s)); });
  m.def("_reduce_high", [](const SystemDef& s) { return dump(reduction::reduce_high(s)); });

  m.def("Ghat", &profiles::Ghat, py::arg("system"), py::arg("xi"), py::arg("t"));
  m.def(
      "Khat",
      [](const SystemDef& s, double xi, double t, bool refined) {
        const auto red = reduction::reduce_low(s);
        return refined ? profiles::Khat_star(red, xi, t) : profiles::Khat(red, xi, t);
      },
      py::arg("system"), py::arg("xi"), py::arg("t"), py::arg("refined") = false);
  m.def(
      "Vhat", [](const SystemDef& s, double xi, double t) { return profiles::Vhat(reduction::reduce_high(s), xi, t); },
      py::arg("system"), py::arg("xi"), py::arg("t"));

  m.def(
      "solve",
      [](const SystemDef& s, double t, const std::string& profile, double L, int N, std::optional<CVector> amplitude,
         double sigma) {
        using profiles::Profile;
        const std::map<std::string, Profile> names{{"exact", Profile::Exact},
                                                   {"diffusion", Profile::Diffusion},
                                                   {"diffusion_refined", Profile::DiffusionRefined},
                                                   {"expwave", Profile::ExpWave}};
        const auto it = names.find(profile);
        if (it == names.end()) throw Error(Errc::InvalidArgument, "unknown profile " + profile);
        const auto grid = profiles::GridSpec::make(L, N);
        const profiles::Solver solver(s, grid, gaussian(s, std::move(amplitude), sigma));
        solver.check_domain(t);
        Eigen::VectorXd x(N);
        for (int i = 0; i < N; ++i) x(i) = grid.x(i);
        return py::make_tuple(x, solver.solve(t, it->second).values);
      },
      py::arg("system"), py::arg("t"), py::arg("profile") = "exact", py::arg("L") = 2200.0, py::arg("N") = 1 << 14,
      py::arg("amplitude") = py::none(), py::arg("sigma") = 1.0);

  m.def(
      "_verify_theorem",
      [](const SystemDef& s, std::vector<std::pair<double, double>> pq, bool refined, std::vector<double> times,
         double L, int N) {
        rates::RateOptions opts;
        if (!times.empty()) opts.times = std::move(times);
        const auto rep = [&] {
          py::gil_scoped_release release;
          return rates::verify_theorem(s, profiles::GridSpec::make(L, N), gaussian(s, std::nullopt, 1.0), pq, refined,
                                       opts);
        }();
        return dump(rep);
      },
      py::arg("system"), py::arg("pq"), py::arg("refined") = false, py::arg("times") = std::vector<double>{},
      py::arg("L") = 2200.0, py::arg("N") = 1 << 14);

  m.def("theorem_slope", &rates::theorem_slope, py::arg("p"), py::arg("q"), py::arg("refined") = false);
  m.def("fit_rate",
        [](const std::vector<double>& t, const std::vector<double>& y) {
          const auto f = rates::fit_rate(t, y);
          return py::make_tuple(f.slope, f.intercept);
        },
        py::arg("times"), py::arg("norms"));
}
